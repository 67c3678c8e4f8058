//! JSON files on disk and the cross-references between them.
//!
//! A reference is a path relative to the directory of the file that
//! contains it. Every file is parsed and validated once; later references
//! share the loaded entity.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::birkhoff::{ReflSpec, SubWitness};
use crate::error::{Error, Result};
use crate::fincat::{validate_category, FinCategory, Functor, NatTransformation, RawCategory, RawComponents, RawFunctorMaps};
use crate::theory::{Algebra, CellEquation, Extension, Operation, Presentation, RawTables, Signature, Term, TwoCellExpr, TwoCellGenerator};

pub const FORMAT_VERSION: &str = "birkhoff-json/1";

/// The bundled corpus: `BIRKHOFF_CORPUS` if set, else the crate's `corpus/`.
pub fn corpus_dir() -> PathBuf {
    match std::env::var_os("BIRKHOFF_CORPUS") {
        Some(p) => PathBuf::from(p),
        None => Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus"),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct FunctorFile {
    source: String,
    target: String,
    #[serde(flatten)]
    maps: RawFunctorMaps,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct NatFile {
    from: String,
    to: String,
    #[serde(flatten)]
    components: RawComponents,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum EquationJson {
    Named { name: String, lhs: TwoCellExpr, rhs: TwoCellExpr },
    Pair(TwoCellExpr, TwoCellExpr),
}

fn equations(raw: Vec<EquationJson>) -> Vec<CellEquation> {
    raw.into_iter()
        .enumerate()
        .map(|(k, e)| match e {
            EquationJson::Named { name, lhs, rhs } => CellEquation { name, lhs, rhs },
            EquationJson::Pair(lhs, rhs) => CellEquation {
                name: format!("equation{}", k + 1),
                lhs,
                rhs,
            },
        })
        .collect()
}

fn equations_json(eqs: &[CellEquation]) -> Vec<EquationJson> {
    eqs.iter()
        .map(|e| EquationJson::Named {
            name: e.name.clone(),
            lhs: e.lhs.clone(),
            rhs: e.rhs.clone(),
        })
        .collect()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct PresentationFile {
    operations: Vec<Operation>,
    #[serde(default)]
    term_equations: Vec<(Term, Term)>,
    #[serde(default)]
    generators: Vec<TwoCellGenerator>,
    #[serde(default)]
    two_cell_equations: Vec<EquationJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ExtensionFile {
    base: String,
    #[serde(alias = "added_two_cell_equations")]
    added: Vec<EquationJson>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct AlgebraFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    presentation: String,
    carrier: String,
    #[serde(flatten)]
    tables: RawTables,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SubFile {
    name: String,
    algebra: String,
    source: String,
    #[serde(flatten)]
    maps: RawFunctorMaps,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ReflFile {
    name: String,
    algebra: String,
    kernel_of: Vec<(String, String)>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct CoequifierFile {
    from: String,
    to: String,
    phi: std::collections::BTreeMap<String, String>,
    psi: std::collections::BTreeMap<String, String>,
}

/// Loaded, validated entities keyed by canonical path.
#[derive(Default)]
pub struct Workspace {
    pub root: PathBuf,
    pub version: &'static str,
    categories: BTreeMap<PathBuf, Arc<FinCategory>>,
    functors: BTreeMap<PathBuf, Functor>,
    presentations: BTreeMap<PathBuf, Arc<Presentation>>,
    extensions: BTreeMap<PathBuf, Extension>,
    algebras: BTreeMap<PathBuf, Arc<Algebra>>,
}

fn io_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

fn parse_error(path: &Path, e: impl std::fmt::Display) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    }
}

/// Re-labels an error with the file it came from.
fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        e @ (Error::Io { .. } | Error::Parse { .. }) => e,
        e => parse_error(path, e),
    })
}

impl Workspace {
    pub fn new(root: impl Into<PathBuf>) -> Workspace {
        Workspace {
            root: root.into(),
            version: FORMAT_VERSION,
            ..Default::default()
        }
    }

    fn locate(&self, path: &Path) -> Result<PathBuf> {
        let full = if path.is_absolute() { path.to_path_buf() } else { self.root.join(path) };
        full.canonicalize().map_err(|e| io_error(&full, e))
    }

    fn read<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
        let text = fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        serde_json::from_str(&text).map_err(|e| parse_error(path, e))
    }

    fn reference(from: &Path, r: &str) -> PathBuf {
        from.parent().unwrap_or(Path::new(".")).join(r)
    }

    pub fn category(&mut self, path: impl AsRef<Path>) -> Result<Arc<FinCategory>> {
        let path = self.locate(path.as_ref())?;
        if let Some(c) = self.categories.get(&path) {
            return Ok(c.clone());
        }
        let raw: RawCategory = Self::read(&path)?;
        let c = Arc::new(in_file(&path, validate_category(&raw))?);
        self.categories.insert(path, c.clone());
        Ok(c)
    }

    pub fn functor(&mut self, path: impl AsRef<Path>) -> Result<Functor> {
        let path = self.locate(path.as_ref())?;
        if let Some(f) = self.functors.get(&path) {
            return Ok(f.clone());
        }
        let raw: FunctorFile = Self::read(&path)?;
        let source = self.category(Self::reference(&path, &raw.source))?;
        let target = self.category(Self::reference(&path, &raw.target))?;
        let f = in_file(&path, Functor::from_raw(source, target, &raw.maps))?;
        self.functors.insert(path, f.clone());
        Ok(f)
    }

    pub fn nat(&mut self, path: impl AsRef<Path>) -> Result<NatTransformation> {
        let path = self.locate(path.as_ref())?;
        let raw: NatFile = Self::read(&path)?;
        let from = self.functor(Self::reference(&path, &raw.from))?;
        let to = self.functor(Self::reference(&path, &raw.to))?;
        in_file(&path, NatTransformation::from_raw(from, to, &raw.components))
    }

    /// A parallel pair of 2-cells stored as two component maps between the
    /// same pair of functors.
    pub fn coequifier(&mut self, path: impl AsRef<Path>) -> Result<(NatTransformation, NatTransformation)> {
        let path = self.locate(path.as_ref())?;
        let raw: CoequifierFile = Self::read(&path)?;
        let from = self.functor(Self::reference(&path, &raw.from))?;
        let to = self.functor(Self::reference(&path, &raw.to))?;
        let phi = in_file(&path, NatTransformation::from_raw(from.clone(), to.clone(), &RawComponents { components: raw.phi }))?;
        let psi = in_file(&path, NatTransformation::from_raw(from, to, &RawComponents { components: raw.psi }))?;
        Ok((phi, psi))
    }

    pub fn presentation(&mut self, path: impl AsRef<Path>) -> Result<Arc<Presentation>> {
        let path = self.locate(path.as_ref())?;
        if let Some(p) = self.presentations.get(&path) {
            return Ok(p.clone());
        }
        let raw: PresentationFile = Self::read(&path)?;
        let p = in_file(
            &path,
            Signature::new(raw.operations).and_then(|sig| {
                Presentation::new(sig, raw.term_equations, raw.generators, equations(raw.two_cell_equations))
            }),
        )?;
        let p = Arc::new(p);
        self.presentations.insert(path, p.clone());
        Ok(p)
    }

    pub fn extension(&mut self, path: impl AsRef<Path>) -> Result<Extension> {
        let path = self.locate(path.as_ref())?;
        if let Some(e) = self.extensions.get(&path) {
            return Ok(e.clone());
        }
        let raw: ExtensionFile = Self::read(&path)?;
        let base = self.presentation(Self::reference(&path, &raw.base))?;
        let e = in_file(&path, Extension::new(base, equations(raw.added)))?;
        self.extensions.insert(path, e.clone());
        Ok(e)
    }

    pub fn algebra(&mut self, path: impl AsRef<Path>) -> Result<Arc<Algebra>> {
        let path = self.locate(path.as_ref())?;
        if let Some(a) = self.algebras.get(&path) {
            return Ok(a.clone());
        }
        let raw: AlgebraFile = Self::read(&path)?;
        let pres = self.presentation(Self::reference(&path, &raw.presentation))?;
        let carrier = self.category(Self::reference(&path, &raw.carrier))?;
        let name = raw.name.unwrap_or_else(|| stem(&path));
        let a = Arc::new(in_file(&path, Algebra::from_raw(&name, pres, carrier, &raw.tables))?);
        self.algebras.insert(path, a.clone());
        Ok(a)
    }

    fn json_files(&self, dir: &Path) -> Result<Vec<PathBuf>> {
        let dir = self.locate(dir)?;
        let mut files: Vec<PathBuf> = fs::read_dir(&dir)
            .map_err(|e| io_error(&dir, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        files.sort();
        Ok(files)
    }

    /// Every algebra file in a directory, in file-name order.
    pub fn catalog(&mut self, dir: impl AsRef<Path>) -> Result<Vec<Arc<Algebra>>> {
        self.json_files(dir.as_ref())?.iter().map(|p| self.algebra(p)).collect()
    }

    /// Every category file in a directory, with its file stem.
    pub fn categories_in(&mut self, dir: impl AsRef<Path>) -> Result<Vec<(String, Arc<FinCategory>)>> {
        self.json_files(dir.as_ref())?
            .iter()
            .map(|p| Ok((stem(p), self.category(p)?)))
            .collect()
    }

    pub fn coequifiers_in(&mut self, dir: impl AsRef<Path>) -> Result<Vec<(String, NatTransformation, NatTransformation)>> {
        self.json_files(dir.as_ref())?
            .iter()
            .map(|p| {
                let (phi, psi) = self.coequifier(p)?;
                Ok((stem(p), phi, psi))
            })
            .collect()
    }

    pub fn sub_witnesses(&mut self, path: impl AsRef<Path>) -> Result<Vec<SubWitness>> {
        let path = self.locate(path.as_ref())?;
        let raw: Vec<SubFile> = Self::read(&path)?;
        raw.into_iter()
            .map(|w| {
                let algebra = self.algebra(Self::reference(&path, &w.algebra))?;
                let source = self.category(Self::reference(&path, &w.source))?;
                let inclusion = in_file(&path, Functor::from_raw(source, algebra.carrier().clone(), &w.maps))?;
                Ok(SubWitness {
                    name: w.name,
                    inclusion,
                    algebra,
                })
            })
            .collect()
    }

    pub fn refl_specs(&mut self, path: impl AsRef<Path>) -> Result<Vec<ReflSpec>> {
        let path = self.locate(path.as_ref())?;
        let raw: Vec<ReflFile> = Self::read(&path)?;
        raw.into_iter()
            .map(|r| {
                let algebra = self.algebra(Self::reference(&path, &r.algebra))?;
                let c = algebra.carrier();
                let generators = r
                    .kernel_of
                    .iter()
                    .map(|(u, v)| Ok((c.morphism(u)?, c.morphism(v)?)))
                    .collect::<Result<Vec<_>>>();
                Ok(ReflSpec {
                    name: r.name,
                    generators: in_file(&path, generators)?,
                    algebra,
                })
            })
            .collect()
    }
}

fn stem(p: &Path) -> String {
    p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default()
}

pub fn category_json(c: &FinCategory) -> Value {
    serde_json::to_value(c.to_raw()).expect("serialisable")
}

/// A functor file whose source and target are the given references.
pub fn functor_json(f: &Functor, source: &str, target: &str) -> Value {
    serde_json::to_value(FunctorFile {
        source: source.into(),
        target: target.into(),
        maps: f.to_raw(),
    })
    .expect("serialisable")
}

pub fn nat_json(n: &NatTransformation, from: &str, to: &str) -> Value {
    serde_json::to_value(NatFile {
        from: from.into(),
        to: to.into(),
        components: n.to_raw(),
    })
    .expect("serialisable")
}

pub fn presentation_json(p: &Presentation) -> Value {
    serde_json::to_value(PresentationFile {
        operations: p.signature.operations.clone(),
        term_equations: p.term_equations.clone(),
        generators: p.generators.clone(),
        two_cell_equations: equations_json(&p.two_cell_equations),
    })
    .expect("serialisable")
}

pub fn extension_json(e: &Extension, base: &str) -> Value {
    serde_json::to_value(ExtensionFile {
        base: base.into(),
        added: equations_json(&e.added),
    })
    .expect("serialisable")
}

pub fn algebra_json(a: &Algebra, presentation: &str, carrier: &str) -> Value {
    serde_json::to_value(AlgebraFile {
        name: Some(a.name.clone()),
        presentation: presentation.into(),
        carrier: carrier.into(),
        tables: a.to_raw(),
    })
    .expect("serialisable")
}

/// Pretty JSON with a trailing newline, so written files are stable.
pub fn write_json(path: &Path, v: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(v).expect("serialisable");
    text.push('\n');
    fs::write(path, text).map_err(|e| io_error(path, e))
}
