//! Batch front end: parse arguments, load files, run one check, report.
//!
//! Exit codes: 0 when the property holds, 1 when it fails, 2 for usage
//! and input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use birkhoff_core::birkhoff::{
    audit_closure, enumerate_quotient_algebras, is_quotient_map, reflect, verify_orthogonality_characterisation,
    Subclass,
};
use birkhoff_core::factor::{check_orthogonal_morphisms, check_orthogonal_object, System};
use birkhoff_core::fincat::{classify, Cached, FinCategory, NatTransformation, SearchLimit};
use birkhoff_core::kernel::{bof_kernel, coequify, immediate_convergence_check, KernelData};
use birkhoff_core::lemmas::{all_functors, cancel_two_cells, coeq_refl, immediate_convergence, so_faithfulness};
use birkhoff_core::theory::satisfies;
use birkhoff_core::workspace::{
    algebra_json, category_json, corpus_dir, functor_json, nat_json, presentation_json, write_json, Workspace,
};
use birkhoff_core::Error;

#[derive(Debug, Parser)]
#[command(name = "birkhoff", version, about = "Exhaustive checks on finite categories and 2-algebras")]
pub struct Cli {
    /// Bound on the candidates explored by any single enumeration.
    #[arg(long, global = true)]
    pub limit: Option<u64>,
    /// Emit machine-readable JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse and validate one file.
    Validate(ValidateArgs),
    /// Factor a functor in one of the three factorisation systems.
    Factor {
        #[arg(long, default_value = "bof")]
        system: String,
        #[arg(long)]
        functor: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Unique lifting of `left` against `right`, for 1-cells and 2-cells.
    Orthogonal {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        right: PathBuf,
    },
    /// Orthogonality of a functor to a category.
    OrthogonalObject {
        #[arg(long)]
        morphism: PathBuf,
        #[arg(long)]
        object: PathBuf,
    },
    /// The parallel-pair kernel of a functor.
    Kernel {
        #[arg(long)]
        functor: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Coequify two parallel 2-cells.
    Coequify {
        #[arg(long, requires = "psi", conflicts_with = "pair")]
        phi: Option<PathBuf>,
        #[arg(long, requires = "phi")]
        psi: Option<PathBuf>,
        /// A file holding both 2-cells.
        #[arg(long, required_unless_present = "phi")]
        pair: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Whether the comparison out of the kernel quotient is faithful.
    Converges {
        #[arg(long)]
        functor: PathBuf,
    },
    /// Check an algebra against the added equations of an extension.
    Satisfies {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        extension: PathBuf,
    },
    /// The reflection of an algebra into the subclass.
    Reflect {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        extension: PathBuf,
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// All quotient algebras.
    Quotients {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Closure of the satisfying subclass of a catalog.
    Audit {
        #[arg(long)]
        extension: PathBuf,
        #[arg(long)]
        catalog: PathBuf,
        #[arg(long)]
        subs: Option<PathBuf>,
        #[arg(long)]
        refl: Option<PathBuf>,
    },
    /// Compare the satisfying class with the class orthogonal to every unit.
    OrthoChar {
        #[arg(long)]
        extension: PathBuf,
        #[arg(long)]
        catalog: PathBuf,
    },
    /// Run the exhaustive lemma suites over the bundled corpus.
    Lemmas,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ValidateArgs {
    #[arg(long)]
    category: Option<PathBuf>,
    #[arg(long)]
    functor: Option<PathBuf>,
    #[arg(long)]
    nat: Option<PathBuf>,
    #[arg(long)]
    coequifier: Option<PathBuf>,
    #[arg(long)]
    presentation: Option<PathBuf>,
    #[arg(long)]
    extension: Option<PathBuf>,
    #[arg(long)]
    algebra: Option<PathBuf>,
}

/// What a command found: a text rendering, a JSON rendering, and whether
/// the checked property holds.
struct Report {
    holds: bool,
    text: String,
    json: Value,
}

impl Report {
    fn new(holds: bool, text: impl Into<String>, json: Value) -> Report {
        Report {
            holds,
            text: text.into(),
            json,
        }
    }
}

fn size(c: &FinCategory) -> String {
    format!("{} objects, {} morphisms", c.object_count(), c.morphism_count())
}

fn size_json(c: &FinCategory) -> Value {
    json!({ "objects": c.object_count(), "morphisms": c.morphism_count() })
}

fn ensure_dir(dir: &Path) -> Result<(), Error> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        path: dir.display().to_string(),
        message: e.to_string(),
    })
}

fn write_all(dir: &Path, files: &[(&str, Value)]) -> Result<Vec<String>, Error> {
    ensure_dir(dir)?;
    for (name, v) in files {
        write_json(&dir.join(name), v)?;
    }
    Ok(files.iter().map(|(n, _)| n.to_string()).collect())
}

struct Ctx {
    ws: Workspace,
    en: Cached,
}

fn validate(cx: &mut Ctx, a: &ValidateArgs) -> Result<Report, Error> {
    let ws = &mut cx.ws;
    let (kind, path, detail) = if let Some(p) = &a.category {
        ("category", p, size(&*ws.category(p)?))
    } else if let Some(p) = &a.functor {
        let f = ws.functor(p)?;
        ("functor", p, format!("classes: {}", classify(&f).holding().join(", ")))
    } else if let Some(p) = &a.nat {
        let n = ws.nat(p)?;
        ("nat", p, format!("{} components", n.components().len()))
    } else if let Some(p) = &a.coequifier {
        let (phi, _) = ws.coequifier(p)?;
        ("coequifier", p, format!("apex with {}", size(phi.source_category())))
    } else if let Some(p) = &a.presentation {
        let pr = ws.presentation(p)?;
        let detail = format!(
            "{} operations, {} generators, {} 2-cell equations",
            pr.signature.operations.len(),
            pr.generators.len(),
            pr.two_cell_equations.len()
        );
        ("presentation", p, detail)
    } else if let Some(p) = &a.extension {
        let e = ws.extension(p)?;
        ("extension", p, format!("{} added equations", e.added.len()))
    } else if let Some(p) = &a.algebra {
        let al = ws.algebra(p)?;
        ("algebra", p, format!("{} on a carrier with {}", al.name, size(al.carrier())))
    } else {
        unreachable!("clap requires one input")
    };
    Ok(Report::new(
        true,
        format!("valid {kind} {}: {detail}", path.display()),
        json!({ "valid": true, "kind": kind, "path": path.display().to_string(), "detail": detail }),
    ))
}

fn factor(cx: &mut Ctx, system: &str, functor: &Path, out: &Path) -> Result<Report, Error> {
    let sys: System = system.parse()?;
    let f = cx.ws.functor(functor)?;
    let fact = sys.factor(&f);
    let files = write_all(
        out,
        &[
            ("source.json", category_json(f.source())),
            ("middle.json", category_json(&fact.middle)),
            ("target.json", category_json(f.target())),
            ("left.json", functor_json(&fact.left, "source.json", "middle.json")),
            ("right.json", functor_json(&fact.right, "middle.json", "target.json")),
        ],
    )?;
    let left_ok = sys.in_left(&fact.left);
    let right_ok = sys.in_right(&fact.right);
    let holds = left_ok && right_ok && fact.composes();
    let mark = |ok: bool| if ok { "" } else { " (FAILED)" };
    let text = format!(
        "system: {}\nmiddle: {}\nleft: {}{}, right: {}{}\nwrote: {}",
        sys.name(),
        size(&fact.middle),
        sys.left_class(),
        mark(left_ok),
        sys.right_class(),
        mark(right_ok),
        files.join(", ")
    );
    let json = json!({
        "system": sys.name(),
        "middle": size_json(&fact.middle),
        "left": { "class": sys.left_class(), "member": left_ok },
        "right": { "class": sys.right_class(), "member": right_ok },
        "composes": fact.composes(),
        "files": files,
    });
    Ok(Report::new(holds, text, json))
}

fn verdict_report<W: std::fmt::Display>(what: &str, v: Option<&W>) -> Report {
    match v {
        None => Report::new(true, format!("{what}: holds"), json!({ "holds": true })),
        Some(w) => Report::new(
            false,
            format!("{what}: fails\nwitness: {w}"),
            json!({ "holds": false, "witness": w.to_string() }),
        ),
    }
}

fn kernel(cx: &mut Ctx, functor: &Path, out: &Path) -> Result<Report, Error> {
    let f = cx.ws.functor(functor)?;
    let kd = bof_kernel(&f);
    let files = write_all(
        out,
        &[
            ("base.json", category_json(f.source())),
            ("apex.json", category_json(kd.apex())),
            ("s.json", functor_json(&kd.s, "apex.json", "base.json")),
            ("t.json", functor_json(&kd.t, "apex.json", "base.json")),
            ("phi.json", nat_json(&kd.phi, "s.json", "t.json")),
            ("psi.json", nat_json(&kd.psi, "s.json", "t.json")),
        ],
    )?;
    let coequified = kd.coequified_by(&f);
    Ok(Report::new(
        coequified,
        format!("apex: {}\ncoequified by f: {coequified}\nwrote: {}", size(kd.apex()), files.join(", ")),
        json!({ "apex": size_json(kd.apex()), "coequified": coequified, "files": files }),
    ))
}

fn coequify_cmd(cx: &mut Ctx, phi: &Option<PathBuf>, psi: &Option<PathBuf>, pair: &Option<PathBuf>, out: &Option<PathBuf>) -> Result<Report, Error> {
    let (phi, psi): (NatTransformation, NatTransformation) = match (phi, psi, pair) {
        (Some(p), Some(q), _) => (cx.ws.nat(p)?, cx.ws.nat(q)?),
        (_, _, Some(pair)) => cx.ws.coequifier(pair)?,
        _ => unreachable!("clap enforces the argument groups"),
    };
    let kd = KernelData::new(phi.clone(), psi.clone())?;
    let q = coequify(&phi, &psi)?;
    let base = kd.base();
    let mut merged = Vec::new();
    for m in base.morphism_indices() {
        let image = q.projection.mor(m);
        let id = q.category.morphism_id(image);
        if id != base.morphism_id(m) {
            merged.push(format!("{} ~ {}", base.morphism_id(m), id));
        }
    }
    let files = match out {
        Some(dir) => write_all(
            dir,
            &[
                ("base.json", category_json(base)),
                ("quotient.json", category_json(&q.category)),
                ("projection.json", functor_json(&q.projection, "base.json", "quotient.json")),
            ],
        )?,
        None => vec![],
    };
    let bo_full = classify(&q.projection).bo_full;
    let mut text = format!(
        "quotient: {}\nidentified: {}\nprojection b.o. full: {bo_full}",
        size(&q.category),
        if merged.is_empty() { "nothing".to_string() } else { merged.join(", ") }
    );
    if !files.is_empty() {
        text.push_str(&format!("\nwrote: {}", files.join(", ")));
    }
    Ok(Report::new(
        bo_full,
        text,
        json!({ "quotient": size_json(&q.category), "identified": merged, "bo_full": bo_full, "files": files }),
    ))
}

fn converges(cx: &mut Ctx, functor: &Path) -> Result<Report, Error> {
    let f = cx.ws.functor(functor)?;
    let c = immediate_convergence_check(&f)?;
    Ok(Report::new(
        c.faithful,
        format!("kernel quotient: {}\neps_f faithful: {}", size(&c.quotient.category), c.faithful),
        json!({ "quotient": size_json(&c.quotient.category), "faithful": c.faithful }),
    ))
}

fn satisfies_cmd(cx: &mut Ctx, algebra: &Path, extension: &Path) -> Result<Report, Error> {
    let a = cx.ws.algebra(algebra)?;
    let e = cx.ws.extension(extension)?;
    let v = satisfies(&a, &e)?;
    Ok(match v.witness() {
        None => Report::new(
            true,
            format!("{} satisfies all {} added equations", a.name, e.added.len()),
            json!({ "algebra": a.name, "holds": true }),
        ),
        Some(w) => Report::new(
            false,
            format!("{} fails: {w}", a.name),
            json!({ "algebra": a.name, "holds": false, "witness": w }),
        ),
    })
}

fn reflect_cmd(cx: &mut Ctx, algebra: &Path, extension: &Path, out: &Path) -> Result<Report, Error> {
    let a = cx.ws.algebra(algebra)?;
    let e = cx.ws.extension(extension)?;
    let r = reflect(&a, &e)?;
    let files = write_all(
        out,
        &[
            ("presentation.json", presentation_json(a.presentation())),
            ("source.json", category_json(a.carrier())),
            ("carrier.json", category_json(r.reflected.carrier())),
            ("reflected.json", algebra_json(&r.reflected, "presentation.json", "carrier.json")),
            ("unit.json", functor_json(r.unit.underlying(), "source.json", "carrier.json")),
        ],
    )?;
    let sat = satisfies(&r.reflected, &e)?.holds();
    let bo_full = is_quotient_map(&r.unit);
    let holds = sat && bo_full;
    Ok(Report::new(
        holds,
        format!(
            "{}: carrier {}\nsatisfies extension: {sat}\nunit b.o. full: {bo_full}\nwrote: {}",
            r.reflected.name,
            size(r.reflected.carrier()),
            files.join(", ")
        ),
        json!({
            "reflected": r.reflected.name,
            "carrier": size_json(r.reflected.carrier()),
            "satisfies": sat,
            "unit_bo_full": bo_full,
            "files": files,
        }),
    ))
}

fn quotients(cx: &mut Ctx, algebra: &Path, limit: SearchLimit) -> Result<Report, Error> {
    let a = cx.ws.algebra(algebra)?;
    let qs = enumerate_quotient_algebras(&a, limit)?;
    let describe = |classes: Vec<Vec<String>>| -> String {
        let merged: Vec<String> = classes.into_iter().filter(|c| c.len() > 1).map(|c| format!("{{{}}}", c.join("~"))).collect();
        if merged.is_empty() { "discrete".into() } else { merged.join(" ") }
    };
    let rows: Vec<String> = qs.iter().map(|q| describe(q.congruence.describe())).collect();
    let mut text = format!("{}: {} quotient algebras", a.name, qs.len());
    for (i, row) in rows.iter().enumerate() {
        text.push_str(&format!("\n{:>3}  {row}", i + 1));
    }
    Ok(Report::new(true, text, json!({ "algebra": a.name, "count": qs.len(), "congruences": rows })))
}

fn audit(cx: &mut Ctx, extension: &Path, catalog: &Path, subs: &Option<PathBuf>, refl: &Option<PathBuf>) -> Result<Report, Error> {
    let e = cx.ws.extension(extension)?;
    let cat = cx.ws.catalog(catalog)?;
    let subs = match subs {
        Some(p) => cx.ws.sub_witnesses(p)?,
        None => vec![],
    };
    let refl = match refl {
        Some(p) => cx.ws.refl_specs(p)?,
        None => vec![],
    };
    let report = audit_closure(&Subclass::Equational(e), &cat, &subs, &refl, &cx.en)?;
    Ok(Report::new(report.passed(), report.to_string(), serde_json::to_value(&report).expect("serialisable")))
}

fn ortho_char(cx: &mut Ctx, extension: &Path, catalog: &Path) -> Result<Report, Error> {
    let e = cx.ws.extension(extension)?;
    let cat = cx.ws.catalog(catalog)?;
    let report = verify_orthogonality_characterisation(&e, &cat, &cx.en)?;
    let mut satisfying = Vec::new();
    for b in &cat {
        if satisfies(b, &e)?.holds() {
            satisfying.push(b.name.clone());
        }
    }
    let orth = report.orthogonality_class();
    let holds = report.holds() && orth == satisfying;
    let mut text = format!(
        "satisfying: {}\northogonal to every unit: {}",
        satisfying.join(", "),
        orth.join(", ")
    );
    for d in &report.disagreements {
        text.push_str(&format!("\ndisagreement: {d}"));
    }
    text.push_str(if holds { "\nthe classes coincide" } else { "\nthe classes differ" });
    let mut json = serde_json::to_value(&report).expect("serialisable");
    json["satisfying"] = json!(satisfying);
    json["orthogonality_class"] = json!(orth);
    Ok(Report::new(holds, text, json))
}

fn lemmas(cx: &mut Ctx) -> Result<Report, Error> {
    let root = corpus_dir();
    let mut ws = Workspace::new(&root);
    let cats: Vec<Arc<FinCategory>> = ws.categories_in(root.join("categories"))?.into_iter().map(|(_, c)| c).collect();
    let mut data = Vec::new();
    for (_, phi, psi) in ws.coequifiers_in(root.join("coequifiers"))? {
        data.push(KernelData::new(phi, psi)?);
    }
    data.extend(all_functors(&cats, &cx.en)?.iter().map(bof_kernel));
    let reports = vec![
        cancel_two_cells(&cats, &cx.en)?,
        so_faithfulness(&cats, &cx.en)?,
        coeq_refl(&data)?,
        immediate_convergence(&cats, &cx.en)?,
    ];
    let holds = reports.iter().all(|r| r.passed());
    let mut text = format!("{:<24} {:>8} {:>8}", "suite", "checked", "failed");
    for r in &reports {
        text.push_str(&format!("\n{:<24} {:>8} {:>8}", r.name, r.checked, r.failures.len()));
    }
    for r in &reports {
        for f in &r.failures {
            text.push_str(&format!("\nFAIL {}: {f}", r.name));
        }
    }
    Ok(Report::new(holds, text, json!({ "categories": cats.len(), "suites": reports })))
}

fn dispatch(cx: &mut Ctx, command: &Command, limit: SearchLimit) -> Result<Report, Error> {
    match command {
        Command::Validate(a) => validate(cx, a),
        Command::Factor { system, functor, out } => factor(cx, system, functor, out),
        Command::Orthogonal { left, right } => {
            let f = cx.ws.functor(left)?;
            let g = cx.ws.functor(right)?;
            let v = check_orthogonal_morphisms(&f, &g, &cx.en)?;
            Ok(verdict_report("left ⊥ right", v.witness()))
        }
        Command::OrthogonalObject { morphism, object } => {
            let f = cx.ws.functor(morphism)?;
            let c = cx.ws.category(object)?;
            let v = check_orthogonal_object(&f, &c, &cx.en)?;
            Ok(verdict_report("morphism ⊥ object", v.witness()))
        }
        Command::Kernel { functor, out } => kernel(cx, functor, out),
        Command::Coequify { phi, psi, pair, out } => coequify_cmd(cx, phi, psi, pair, out),
        Command::Converges { functor } => converges(cx, functor),
        Command::Satisfies { algebra, extension } => satisfies_cmd(cx, algebra, extension),
        Command::Reflect { algebra, extension, out } => reflect_cmd(cx, algebra, extension, out),
        Command::Quotients { algebra } => quotients(cx, algebra, limit),
        Command::Audit { extension, catalog, subs, refl } => audit(cx, extension, catalog, subs, refl),
        Command::OrthoChar { extension, catalog } => ortho_char(cx, extension, catalog),
        Command::Lemmas => lemmas(cx),
    }
}

/// Runs one invocation, writing the report to `out` and diagnostics to
/// `err`; returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let limit = cli.limit.map(SearchLimit).unwrap_or_default();
    let mut cx = Ctx {
        ws: Workspace::new("."),
        en: Cached::new(limit),
    };
    match dispatch(&mut cx, &cli.command, limit) {
        Ok(report) => {
            let _ = if cli.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("serialisable"))
            } else {
                writeln!(out, "{}", report.text)
            };
            if report.holds {
                0
            } else {
                1
            }
        }
        Err(e) => {
            let _ = if cli.json {
                writeln!(out, "{}", json!({ "error": e.to_string() }))
            } else {
                writeln!(err, "error: {e}")
            };
            2
        }
    }
}
