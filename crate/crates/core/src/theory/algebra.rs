//! Finite algebras for a presentation: a carrier category, a functor per
//! operation and a natural transformation per 2-cell generator.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::syntax::{CellEquation, Extension, Presentation, SubstArg, Term, TwoCellExpr};
use crate::error::{Error, Result};
use crate::fincat::{power_category, FinCategory, Functor, Mor, NatTransformation, Obj};
use crate::verdict::Verdict;

/// Dense table of an `n`-ary operation, indexed by tuples in mixed radix
/// with the first entry most significant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpTable {
    pub arity: usize,
    pub objects: Vec<Obj>,
    pub morphisms: Vec<Mor>,
}

#[derive(Clone)]
pub struct Algebra {
    pub name: String,
    presentation: Arc<Presentation>,
    carrier: Arc<FinCategory>,
    ops: Vec<OpTable>,
    /// Components per generator, indexed by object tuples.
    gens: Vec<Vec<Mor>>,
}

impl fmt::Debug for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Algebra({})", self.name)
    }
}

/// Same presentation, carrier and tables; the name is ignored.
impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        *self.carrier == *other.carrier
            && self.ops == other.ops
            && self.gens == other.gens
            && *self.presentation == *other.presentation
    }
}

pub(crate) fn rank(radix: usize, t: impl IntoIterator<Item = usize>) -> usize {
    t.into_iter().fold(0, |acc, x| acc * radix + x)
}

pub(crate) fn unrank(mut k: usize, radix: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = k % radix;
        k /= radix;
    }
    out
}

/// Every tuple of length `len` below `radix`, lexicographically.
pub(crate) fn all_tuples(radix: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = radix.checked_pow(len as u32).unwrap_or(usize::MAX);
    (0..total).map(move |k| unrank(k, radix, len))
}

fn objs(t: Vec<usize>) -> Vec<Obj> {
    t.into_iter().map(Obj).collect()
}

fn mors(t: Vec<usize>) -> Vec<Mor> {
    t.into_iter().map(Mor).collect()
}

/// First failing equation and the least object tuple where it fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquationFailure {
    pub equation: String,
    pub tuple: Vec<String>,
    pub lhs: String,
    pub rhs: String,
}

impl fmt::Display for EquationFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} fails at ({}): lhs = {}, rhs = {}",
            self.equation,
            self.tuple.join(", "),
            self.lhs,
            self.rhs
        )
    }
}

/// Interpretation tables as read from JSON, keyed by object and morphism ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawTables {
    pub operations: BTreeMap<String, RawOpTable>,
    #[serde(default)]
    pub generators: BTreeMap<String, Vec<(Vec<String>, String)>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawOpTable {
    pub objects: Vec<(Vec<String>, String)>,
    #[serde(default)]
    pub morphisms: Vec<(Vec<String>, String)>,
}

impl Algebra {
    /// Validates functoriality of the operations, the term equations,
    /// naturality and invertibility of the generators and the 2-cell
    /// equations of the presentation.
    pub fn new(
        name: &str,
        presentation: Arc<Presentation>,
        carrier: Arc<FinCategory>,
        ops: Vec<OpTable>,
        gens: Vec<Vec<Mor>>,
    ) -> Result<Algebra> {
        let a = Algebra {
            name: name.to_string(),
            presentation,
            carrier,
            ops,
            gens,
        };
        a.validate()?;
        Ok(a)
    }

    pub(crate) fn new_unchecked(
        name: &str,
        presentation: Arc<Presentation>,
        carrier: Arc<FinCategory>,
        ops: Vec<OpTable>,
        gens: Vec<Vec<Mor>>,
    ) -> Algebra {
        let a = Algebra {
            name: name.to_string(),
            presentation,
            carrier,
            ops,
            gens,
        };
        debug_assert!(a.validate().is_ok(), "{:?}", a.validate());
        a
    }

    /// Operations only, for evaluating terms while the generator
    /// components are still being computed.
    pub(crate) fn partial(presentation: Arc<Presentation>, carrier: Arc<FinCategory>, ops: Vec<OpTable>) -> Algebra {
        Algebra {
            name: String::new(),
            presentation,
            carrier,
            ops,
            gens: Vec::new(),
        }
    }

    fn validate(&self) -> Result<()> {
        let (c, p) = (&self.carrier, &self.presentation);
        let (no, nm) = (c.object_count(), c.morphism_count());
        let bad = |msg: String| Err(Error::InvalidAlgebra(msg));
        if self.ops.len() != p.signature.operations.len() {
            return bad("one table per operation is required".into());
        }
        for (op, table) in p.signature.operations.iter().zip(&self.ops) {
            let name = &op.name;
            if table.arity != op.arity
                || table.objects.len() != no.pow(op.arity as u32)
                || table.morphisms.len() != nm.pow(op.arity as u32)
            {
                return bad(format!("table of {name} has the wrong size"));
            }
            if table.objects.iter().any(|o| o.0 >= no) || table.morphisms.iter().any(|m| m.0 >= nm) {
                return bad(format!("table of {name} leaves the carrier"));
            }
            for (k, t) in all_tuples(nm, op.arity).enumerate() {
                let t = mors(t);
                let img = table.morphisms[k];
                let dom = table.objects[rank(no, t.iter().map(|&m| c.dom(m).0))];
                let cod = table.objects[rank(no, t.iter().map(|&m| c.cod(m).0))];
                if c.dom(img) != dom || c.cod(img) != cod {
                    return bad(format!("{name} at ({}) has the wrong boundary", self.mor_names(&t)));
                }
            }
            for (k, t) in all_tuples(no, op.arity).enumerate() {
                let ids = t.iter().map(|&o| c.identity(Obj(o)).0);
                if table.morphisms[rank(nm, ids)] != c.identity(table.objects[k]) {
                    return bad(format!("{name} does not preserve the identity at ({})", self.obj_names(&objs(t))));
                }
            }
            for f in all_tuples(nm, op.arity) {
                let f = mors(f);
                let outs: Vec<Vec<Mor>> = f.iter().map(|&m| c.morphisms_out_of(c.cod(m)).collect()).collect();
                let radix: Vec<usize> = outs.iter().map(Vec::len).collect();
                let total: usize = radix.iter().product();
                for mut code in 0..total {
                    let mut g = vec![Mor(0); op.arity];
                    for i in (0..op.arity).rev() {
                        g[i] = outs[i][code % radix[i]];
                        code /= radix[i];
                    }
                    let gf: Vec<Mor> = g.iter().zip(&f).map(|(&g, &f)| c.compose(g, f)).collect();
                    let lhs = self.op_mor_at(table, &gf);
                    let rhs = c.compose(self.op_mor_at(table, &g), self.op_mor_at(table, &f));
                    if lhs != rhs {
                        return bad(format!(
                            "{name} does not preserve the composite ({}) ∘ ({})",
                            self.mor_names(&g),
                            self.mor_names(&f)
                        ));
                    }
                }
            }
        }
        for (l, r) in &p.term_equations {
            let n = l.free_arity().max(r.free_arity());
            for t in all_tuples(no, n) {
                let t = objs(t);
                if self.eval_obj(l, &t)? != self.eval_obj(r, &t)? {
                    return bad(format!("{l} = {r} fails on objects at ({})", self.obj_names(&t)));
                }
            }
            for t in all_tuples(nm, n) {
                let t = mors(t);
                if self.eval_mor(l, &t)? != self.eval_mor(r, &t)? {
                    return bad(format!("{l} = {r} fails on morphisms at ({})", self.mor_names(&t)));
                }
            }
        }
        if self.gens.len() != p.generators.len() {
            return bad("one component table per generator is required".into());
        }
        for (g, comps) in p.generators.iter().zip(&self.gens) {
            if comps.len() != no.pow(g.arity as u32) || comps.iter().any(|m| m.0 >= nm) {
                return bad(format!("components of {} have the wrong size", g.name));
            }
            for (k, t) in all_tuples(no, g.arity).enumerate() {
                let t = objs(t);
                let m = comps[k];
                if c.dom(m) != self.eval_obj(&g.source, &t)? || c.cod(m) != self.eval_obj(&g.target, &t)? {
                    return bad(format!("component of {} at ({}) has the wrong boundary", g.name, self.obj_names(&t)));
                }
                if g.invertible && c.inverse(m).is_none() {
                    return Err(Error::NonInvertibleComponent {
                        generator: g.name.clone(),
                        tuple: self.obj_names(&t),
                    });
                }
            }
            for t in all_tuples(nm, g.arity) {
                let t = mors(t);
                let dom = rank(no, t.iter().map(|&m| c.dom(m).0));
                let cod = rank(no, t.iter().map(|&m| c.cod(m).0));
                let lhs = c.compose(self.eval_mor(&g.target, &t)?, comps[dom]);
                let rhs = c.compose(comps[cod], self.eval_mor(&g.source, &t)?);
                if lhs != rhs {
                    return bad(format!("{} is not natural at ({})", g.name, self.mor_names(&t)));
                }
            }
        }
        if let Verdict::Fails(w) = self.satisfies_equations(&p.two_cell_equations)? {
            return bad(format!("presentation equation violated: {w}"));
        }
        Ok(())
    }

    pub fn presentation(&self) -> &Arc<Presentation> {
        &self.presentation
    }

    pub fn carrier(&self) -> &Arc<FinCategory> {
        &self.carrier
    }

    pub fn op_tables(&self) -> &[OpTable] {
        &self.ops
    }

    pub fn generator_tables(&self) -> &[Vec<Mor>] {
        &self.gens
    }

    pub fn with_name(mut self, name: &str) -> Algebra {
        self.name = name.to_string();
        self
    }

    pub fn obj_names(&self, t: &[Obj]) -> String {
        t.iter().map(|&o| self.carrier.object_id(o)).collect::<Vec<_>>().join(", ")
    }

    pub fn mor_names(&self, t: &[Mor]) -> String {
        t.iter().map(|&m| self.carrier.morphism_id(m)).collect::<Vec<_>>().join(", ")
    }

    fn op_mor_at(&self, table: &OpTable, t: &[Mor]) -> Mor {
        table.morphisms[rank(self.carrier.morphism_count(), t.iter().map(|m| m.0))]
    }

    pub fn op_obj(&self, op: usize, t: &[Obj]) -> Obj {
        self.ops[op].objects[rank(self.carrier.object_count(), t.iter().map(|o| o.0))]
    }

    pub fn op_mor(&self, op: usize, t: &[Mor]) -> Mor {
        self.op_mor_at(&self.ops[op], t)
    }

    pub fn component(&self, gen: usize, t: &[Obj]) -> Mor {
        self.gens[gen][rank(self.carrier.object_count(), t.iter().map(|o| o.0))]
    }

    fn op_index(&self, name: &str) -> Result<usize> {
        self.presentation
            .signature
            .position(name)
            .ok_or_else(|| Error::SignatureMismatch(format!("unknown operation {name}")))
    }

    /// The term's object map at a tuple (variables beyond it are an error).
    pub fn eval_obj(&self, t: &Term, x: &[Obj]) -> Result<Obj> {
        match t {
            Term::Var(i) => x.get(i.wrapping_sub(1)).copied().ok_or_else(|| {
                Error::MalformedTerm(format!("x{i} outside a context of {}", x.len()))
            }),
            Term::Op(name, args) => {
                let k = self.op_index(name)?;
                let a = args.iter().map(|s| self.eval_obj(s, x)).collect::<Result<Vec<_>>>()?;
                if a.len() != self.ops[k].arity {
                    return Err(Error::SignatureMismatch(format!("{name} applied to {} arguments", a.len())));
                }
                Ok(self.op_obj(k, &a))
            }
        }
    }

    pub fn eval_mor(&self, t: &Term, x: &[Mor]) -> Result<Mor> {
        match t {
            Term::Var(i) => x.get(i.wrapping_sub(1)).copied().ok_or_else(|| {
                Error::MalformedTerm(format!("x{i} outside a context of {}", x.len()))
            }),
            Term::Op(name, args) => {
                let k = self.op_index(name)?;
                let a = args.iter().map(|s| self.eval_mor(s, x)).collect::<Result<Vec<_>>>()?;
                if a.len() != self.ops[k].arity {
                    return Err(Error::SignatureMismatch(format!("{name} applied to {} arguments", a.len())));
                }
                Ok(self.op_mor(k, &a))
            }
        }
    }

    /// Component of an expression at an object tuple of its context.
    pub fn cell_component(&self, e: &TwoCellExpr, x: &[Obj]) -> Result<Mor> {
        let c = &self.carrier;
        match e {
            TwoCellExpr::Id(t) => Ok(c.identity(self.eval_obj(t, x)?)),
            TwoCellExpr::Gen(name) | TwoCellExpr::Inv(name) => {
                let k = self
                    .presentation
                    .generator_position(name)
                    .ok_or_else(|| Error::SignatureMismatch(format!("unknown 2-cell generator {name}")))?;
                let arity = self.presentation.generators[k].arity;
                if x.len() < arity {
                    return Err(Error::MalformedExpression(format!("{name} needs {arity} arguments")));
                }
                let m = self.component(k, &x[..arity]);
                if matches!(e, TwoCellExpr::Gen(_)) {
                    return Ok(m);
                }
                c.inverse(m).ok_or_else(|| Error::NonInvertibleComponent {
                    generator: name.clone(),
                    tuple: self.obj_names(&x[..arity]),
                })
            }
            TwoCellExpr::VComp(second, first) => {
                let f = self.cell_component(first, x)?;
                let g = self.cell_component(second, x)?;
                c.try_compose(g, f).ok_or_else(|| {
                    Error::MalformedExpression(format!("components of {e} do not compose"))
                })
            }
            TwoCellExpr::Subst { inner, args } => {
                // inner_{b(X)} ∘ S(c(X)) with c the argument components and
                // b their targets.
                let mut cs = Vec::with_capacity(args.len());
                for a in args {
                    cs.push(match a {
                        SubstArg::Term(t) => c.identity(self.eval_obj(t, x)?),
                        SubstArg::Cell(e) => self.cell_component(e, x)?,
                    });
                }
                let bs: Vec<Obj> = cs.iter().map(|&m| c.cod(m)).collect();
                let b = inner.boundary(&self.presentation)?;
                let s = self.eval_mor(&b.source, &cs)?;
                let top = self.cell_component(inner, &bs)?;
                c.try_compose(top, s).ok_or_else(|| {
                    Error::MalformedExpression(format!("components of {e} do not compose"))
                })
            }
        }
    }

    /// Checks `lhs = rhs` at every object tuple of each equation's context.
    pub fn satisfies_equations(&self, eqs: &[CellEquation]) -> Result<Verdict<EquationFailure>> {
        let no = self.carrier.object_count();
        for eq in eqs {
            let n = eq.arity(&self.presentation)?;
            for t in all_tuples(no, n) {
                let t = objs(t);
                let (l, r) = (self.cell_component(&eq.lhs, &t)?, self.cell_component(&eq.rhs, &t)?);
                if l != r {
                    return Ok(Verdict::Fails(EquationFailure {
                        equation: eq.name.clone(),
                        tuple: t.iter().map(|&o| self.carrier.object_id(o).to_string()).collect(),
                        lhs: self.carrier.morphism_id(l).to_string(),
                        rhs: self.carrier.morphism_id(r).to_string(),
                    }));
                }
            }
        }
        Ok(Verdict::Holds)
    }

    pub fn from_raw(
        name: &str,
        presentation: Arc<Presentation>,
        carrier: Arc<FinCategory>,
        raw: &RawTables,
    ) -> Result<Algebra> {
        let c = &carrier;
        let (no, nm) = (c.object_count(), c.morphism_count());
        let bad = |msg: String| Error::InvalidAlgebra(msg);
        let lookup_objs = |t: &[String]| t.iter().map(|s| c.object(s)).collect::<Result<Vec<_>>>();
        let lookup_mors = |t: &[String]| t.iter().map(|s| c.morphism(s)).collect::<Result<Vec<_>>>();
        for k in raw.operations.keys() {
            presentation.signature.arity(k)?;
        }
        for k in raw.generators.keys() {
            presentation.generator(k)?;
        }
        let mut ops = Vec::new();
        for op in &presentation.signature.operations {
            let rt = raw
                .operations
                .get(&op.name)
                .ok_or_else(|| bad(format!("no table for {}", op.name)))?;
            let mut objects = vec![None; no.pow(op.arity as u32)];
            for (t, y) in &rt.objects {
                if t.len() != op.arity {
                    return Err(bad(format!("{} entry ({}) has the wrong length", op.name, t.join(", "))));
                }
                objects[rank(no, lookup_objs(t)?.iter().map(|o| o.0))] = Some(c.object(y)?);
            }
            let objects: Vec<Obj> = objects
                .into_iter()
                .enumerate()
                .map(|(k, o)| {
                    o.ok_or_else(|| {
                        let t = objs(unrank(k, no, op.arity));
                        bad(format!("{} is not given at ({})", op.name, names(c, &t)))
                    })
                })
                .collect::<Result<_>>()?;
            let mut morphisms = vec![None; nm.pow(op.arity as u32)];
            for (t, g) in &rt.morphisms {
                if t.len() != op.arity {
                    return Err(bad(format!("{} entry ({}) has the wrong length", op.name, t.join(", "))));
                }
                morphisms[rank(nm, lookup_mors(t)?.iter().map(|m| m.0))] = Some(c.morphism(g)?);
            }
            // Entries landing in a singleton hom-set are forced and may be omitted.
            let morphisms = morphisms
                .into_iter()
                .enumerate()
                .map(|(k, m)| match m {
                    Some(m) => Ok(m),
                    None => {
                        let t = mors(unrank(k, nm, op.arity));
                        let dom = objects[rank(no, t.iter().map(|&m| c.dom(m).0))];
                        let cod = objects[rank(no, t.iter().map(|&m| c.cod(m).0))];
                        match c.hom(dom, cod) {
                            [only] => Ok(*only),
                            _ => Err(bad(format!(
                                "{} is not given at ({})",
                                op.name,
                                t.iter().map(|&m| c.morphism_id(m)).collect::<Vec<_>>().join(", ")
                            ))),
                        }
                    }
                })
                .collect::<Result<_>>()?;
            ops.push(OpTable {
                arity: op.arity,
                objects,
                morphisms,
            });
        }
        let partial = Algebra::partial(presentation.clone(), carrier.clone(), ops);
        let mut gens = Vec::new();
        for g in &presentation.generators {
            let mut comps = vec![None; no.pow(g.arity as u32)];
            for (t, m) in raw.generators.get(&g.name).map(Vec::as_slice).unwrap_or(&[]) {
                if t.len() != g.arity {
                    return Err(bad(format!("{} entry ({}) has the wrong length", g.name, t.join(", "))));
                }
                comps[rank(no, lookup_objs(t)?.iter().map(|o| o.0))] = Some(c.morphism(m)?);
            }
            let comps = comps
                .into_iter()
                .enumerate()
                .map(|(k, m)| match m {
                    Some(m) => Ok(m),
                    None => {
                        let t = objs(unrank(k, no, g.arity));
                        let dom = partial.eval_obj(&g.source, &t)?;
                        let cod = partial.eval_obj(&g.target, &t)?;
                        match c.hom(dom, cod) {
                            [only] => Ok(*only),
                            _ => Err(bad(format!("{} has no component at ({})", g.name, names(c, &t)))),
                        }
                    }
                })
                .collect::<Result<_>>()?;
            gens.push(comps);
        }
        Algebra::new(name, presentation, carrier, partial.ops, gens)
    }

    pub fn to_raw(&self) -> RawTables {
        let c = &self.carrier;
        let (no, nm) = (c.object_count(), c.morphism_count());
        let ids = |t: &[Obj]| t.iter().map(|&o| c.object_id(o).to_string()).collect::<Vec<_>>();
        let mut operations = BTreeMap::new();
        for (op, table) in self.presentation.signature.operations.iter().zip(&self.ops) {
            let objects = all_tuples(no, op.arity)
                .enumerate()
                .map(|(k, t)| (ids(&objs(t)), c.object_id(table.objects[k]).to_string()))
                .collect();
            let morphisms = all_tuples(nm, op.arity)
                .enumerate()
                .map(|(k, t)| {
                    let t: Vec<String> = t.iter().map(|&m| c.morphism_id(Mor(m)).to_string()).collect();
                    (t, c.morphism_id(table.morphisms[k]).to_string())
                })
                .collect();
            operations.insert(op.name.clone(), RawOpTable { objects, morphisms });
        }
        let mut generators = BTreeMap::new();
        for (g, comps) in self.presentation.generators.iter().zip(&self.gens) {
            let entries = all_tuples(no, g.arity)
                .enumerate()
                .map(|(k, t)| (ids(&objs(t)), c.morphism_id(comps[k]).to_string()))
                .collect();
            generators.insert(g.name.clone(), entries);
        }
        RawTables {
            operations,
            generators,
        }
    }
}

fn names(c: &FinCategory, t: &[Obj]) -> String {
    t.iter().map(|&o| c.object_id(o)).collect::<Vec<_>>().join(", ")
}

/// `A ⊨ E`: the added equations hold at every object tuple.
pub fn satisfies(a: &Algebra, e: &Extension) -> Result<Verdict<EquationFailure>> {
    if *a.presentation != *e.base {
        return Err(Error::SignatureMismatch(format!(
            "{} is not an algebra for the base of the extension",
            a.name
        )));
    }
    a.satisfies_equations(&e.added)
}

/// The term as a functor `carrier^n → carrier`.
pub fn interpret_term(a: &Algebra, t: &Term, n: usize) -> Result<Functor> {
    t.check(&a.presentation.signature)?;
    if t.free_arity() > n {
        return Err(Error::MalformedTerm(format!("{t} does not live in a context of {n}")));
    }
    let power = power_category(&a.carrier, n);
    let on_objects = power
        .category
        .object_indices()
        .map(|o| a.eval_obj(t, &power.decode_object(o)))
        .collect::<Result<_>>()?;
    let on_morphisms = power
        .category
        .morphism_indices()
        .map(|m| a.eval_mor(t, &power.decode_morphism(m)))
        .collect::<Result<_>>()?;
    Functor::new(power.category.clone(), a.carrier.clone(), on_objects, on_morphisms)
}

/// The expression as a natural transformation between its interpreted
/// boundary terms on `carrier^n`.
pub fn interpret_two_cell(a: &Algebra, e: &TwoCellExpr, n: usize) -> Result<NatTransformation> {
    let b = e.boundary(&a.presentation)?;
    if b.arity > n {
        return Err(Error::MalformedExpression(format!("{e} does not live in a context of {n}")));
    }
    let from = interpret_term(a, &b.source, n)?;
    let to = interpret_term(a, &b.target, n)?;
    let power = power_category(&a.carrier, n);
    let components = power
        .category
        .object_indices()
        .map(|o| a.cell_component(e, &power.decode_object(o)))
        .collect::<Result<_>>()?;
    // Share the power category of `from` so the boundaries are parallel.
    let to = Functor::new(from.source().clone(), to.target().clone(), to.object_map().to_vec(), to.morphism_map().to_vec())?;
    NatTransformation::new(from, to, components)
}
