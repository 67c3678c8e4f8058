//! Reflections into equational subclasses, quotient enumeration, the
//! closure audit and the orthogonality characterisation.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fincat::{classify, Budget, Congruence, Enumerator, Functor, Mor, Obj, SearchLimit};
use crate::theory::{
    algebra_congruence_closure, algebra_kernel, algebra_orthogonal, all_tuples,
    enumerate_algebra_homs, enumerate_algebra_two_cells, find_algebra_isomorphism,
    product_algebra, quotient_algebra, reflexive_coequifier_algebra, satisfies, subalgebra_check,
    Algebra, AlgebraHom, Extension, OrthogonalityFailure,
};
use crate::verdict::Verdict;

/// The universal quotient of an algebra satisfying an extension.
#[derive(Clone, Debug)]
pub struct Reflection {
    pub unit: AlgebraHom,
    pub reflected: Arc<Algebra>,
}

fn require_base(a: &Algebra, e: &Extension) -> Result<()> {
    if **a.presentation() != *e.base {
        return Err(Error::SignatureMismatch(format!(
            "{} is not an algebra for the base of the extension",
            a.name
        )));
    }
    Ok(())
}

/// Quotients `a` by the operation-closed congruence generated by both sides
/// of every added equation at every object tuple.
pub fn reflect(a: &Arc<Algebra>, e: &Extension) -> Result<Reflection> {
    require_base(a, e)?;
    let no = a.carrier().object_count();
    let mut generators = Vec::new();
    for eq in &e.added {
        for t in all_tuples(no, eq.arity(&e.base)?) {
            let t: Vec<Obj> = t.into_iter().map(Obj).collect();
            generators.push((a.cell_component(&eq.lhs, &t)?, a.cell_component(&eq.rhs, &t)?));
        }
    }
    let cong = algebra_congruence_closure(a, &generators)?;
    let (reflected, unit) = quotient_algebra(a, &cong)?;
    let reflected = Arc::new((*reflected).clone().with_name(&format!("L({})", a.name)));
    let unit = AlgebraHom::new(a.clone(), reflected.clone(), unit.underlying().clone())?;
    Ok(Reflection { unit, reflected })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeFailure {
    pub probe: String,
    pub failure: OrthogonalityFailure,
}

impl fmt::Display for ProbeFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "against {}: {}", self.probe, self.failure)
    }
}

/// Precomposition with the unit is bijective on homomorphisms and on
/// algebra 2-cells into every probe.
pub fn verify_reflection_free(
    r: &Reflection,
    e: &Extension,
    probes: &[Arc<Algebra>],
    en: &dyn Enumerator,
) -> Result<Verdict<ProbeFailure>> {
    for b in probes {
        require_base(b, e)?;
        if !satisfies(b, e)?.holds() {
            return Err(Error::ProbeViolatesExtension(b.name.clone()));
        }
    }
    for b in probes {
        if let Verdict::Fails(failure) = algebra_orthogonal(&r.unit, b, en)? {
            return Ok(Verdict::Fails(ProbeFailure {
                probe: b.name.clone(),
                failure,
            }));
        }
    }
    Ok(Verdict::Holds)
}

#[derive(Clone, Debug)]
pub struct QuotientAlgebra {
    pub congruence: Congruence,
    pub algebra: Arc<Algebra>,
    pub projection: AlgebraHom,
}

/// Restricted growth strings of length `n`: every set partition once.
pub(crate) fn set_partitions(n: usize) -> Vec<Vec<usize>> {
    fn go(prefix: &mut Vec<usize>, n: usize, blocks: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for b in 0..=blocks {
            prefix.push(b);
            go(prefix, n, blocks.max(b + 1), out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::with_capacity(n), n, 0, &mut out);
    out
}

/// Every operation-closed congruence on the carrier with its quotient,
/// finest first; ties are ordered by their class lists.
pub fn enumerate_quotient_algebras(a: &Arc<Algebra>, limit: SearchLimit) -> Result<Vec<QuotientAlgebra>> {
    let c = a.carrier();
    let homs: Vec<&[Mor]> = c
        .object_indices()
        .flat_map(|x| c.object_indices().map(move |y| (x, y)))
        .map(|(x, y)| c.hom(x, y))
        .filter(|h| !h.is_empty())
        .collect();
    let parts: Vec<Vec<Vec<usize>>> = homs.iter().map(|h| set_partitions(h.len())).collect();
    let radix: Vec<usize> = parts.iter().map(Vec::len).collect();
    let mut budget = Budget::new(limit, "enumerating quotient algebras");
    let mut out = Vec::new();
    let total: usize = radix.iter().product();
    for mut code in 0..total {
        budget.tick()?;
        let mut labels = vec![0; c.morphism_count()];
        let mut offset = 0;
        for i in (0..homs.len()).rev() {
            let p = &parts[i][code % radix[i]];
            code /= radix[i];
            for (&m, &block) in homs[i].iter().zip(p) {
                labels[m.0] = offset + block;
            }
            offset += homs[i].len();
        }
        let Ok(cong) = Congruence::from_labels(c, &labels) else {
            continue;
        };
        match quotient_algebra(a, &cong) {
            Ok((algebra, projection)) => out.push(QuotientAlgebra {
                congruence: cong,
                algebra,
                projection,
            }),
            Err(Error::NotOperationClosed { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    out.sort_by_cached_key(|q| (std::cmp::Reverse(q.congruence.class_count()), q.congruence.classes()));
    Ok(out)
}

/// A full subcategory of algebras: equationally defined, or an explicit
/// list of members taken up to isomorphism.
#[derive(Clone, Debug)]
pub enum Subclass {
    Equational(Extension),
    Explicit(Vec<Arc<Algebra>>),
}

impl Subclass {
    /// `None` when `b` belongs, otherwise why not.
    pub fn excludes(&self, b: &Arc<Algebra>, en: &dyn Enumerator) -> Result<Option<String>> {
        match self {
            Subclass::Equational(e) => Ok(satisfies(b, e)?.witness().map(|w| w.to_string())),
            Subclass::Explicit(members) => {
                for m in members {
                    if find_algebra_isomorphism(b, m, en)?.is_some() {
                        return Ok(None);
                    }
                }
                Ok(Some(format!("{} is not isomorphic to any member", b.name)))
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Products,
    Subalgebras,
    Quotients,
    ReflexiveCoequifiers,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Products, Family::Subalgebras, Family::Quotients, Family::ReflexiveCoequifiers];

    pub fn name(self) -> &'static str {
        match self {
            Family::Products => "products",
            Family::Subalgebras => "subalgebras",
            Family::Quotients => "quotients",
            Family::ReflexiveCoequifiers => "reflexive_coequifiers",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureCheck {
    pub family: Family,
    pub inputs: Vec<String>,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosureReport {
    pub catalog: Vec<String>,
    pub members: Vec<String>,
    pub checks: Vec<ClosureCheck>,
    /// Inputs that could not be turned into a construction instance.
    pub skipped: Vec<String>,
}

impl ClosureReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn family_passed(&self, family: Family) -> bool {
        self.checks.iter().filter(|c| c.family == family).all(|c| c.passed)
    }

    pub fn count(&self, family: Family) -> usize {
        self.checks.iter().filter(|c| c.family == family).count()
    }

    pub fn first_failure(&self, family: Family) -> Option<&ClosureCheck> {
        self.checks.iter().find(|c| c.family == family && !c.passed)
    }
}

impl fmt::Display for ClosureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "catalog: {}", self.catalog.join(", "))?;
        writeln!(f, "members: {}", self.members.join(", "))?;
        writeln!(f, "{:<22} {:>7} {:>7}", "family", "checked", "failed")?;
        for family in Family::ALL {
            let failed = self.checks.iter().filter(|c| c.family == family && !c.passed).count();
            writeln!(f, "{:<22} {:>7} {:>7}", family.name(), self.count(family), failed)?;
        }
        for c in self.checks.iter().filter(|c| !c.passed) {
            writeln!(
                f,
                "FAIL {} [{}]: {}",
                c.family.name(),
                c.inputs.join(", "),
                c.witness.as_deref().unwrap_or("")
            )?;
        }
        for s in &self.skipped {
            writeln!(f, "skipped: {s}")?;
        }
        write!(f, "{}", if self.passed() { "all closure checks pass" } else { "closure failure found" })
    }
}

/// A faithful functor into the carrier of a catalog algebra.
#[derive(Clone, Debug)]
pub struct SubWitness {
    pub name: String,
    pub inclusion: Functor,
    pub algebra: Arc<Algebra>,
}

/// Parallel pairs generating a quotient of a catalog algebra, whose kernel
/// is the reflexive pair to coequify.
#[derive(Clone, Debug)]
pub struct ReflSpec {
    pub name: String,
    pub algebra: Arc<Algebra>,
    pub generators: Vec<(Mor, Mor)>,
}

fn check(family: Family, inputs: Vec<String>, excluded: Option<String>) -> ClosureCheck {
    ClosureCheck {
        family,
        inputs,
        passed: excluded.is_none(),
        witness: excluded,
    }
}

fn is_member(subclass: &Subclass, a: &Arc<Algebra>, en: &dyn Enumerator) -> Result<bool> {
    Ok(subclass.excludes(a, en)?.is_none())
}

/// Restricts the catalog to the subclass and checks that binary products,
/// the given subalgebras, every quotient and the given reflexive
/// coequifiers of members are members again.
pub fn audit_closure(
    subclass: &Subclass,
    catalog: &[Arc<Algebra>],
    subs: &[SubWitness],
    refl: &[ReflSpec],
    en: &dyn Enumerator,
) -> Result<ClosureReport> {
    let membership = catalog
        .par_iter()
        .map(|a| is_member(subclass, a, en))
        .collect::<Result<Vec<_>>>()?;
    let members: Vec<Arc<Algebra>> = catalog
        .iter()
        .zip(&membership)
        .filter(|(_, &m)| m)
        .map(|(a, _)| a.clone())
        .collect();
    let member = |a: &Arc<Algebra>| members.iter().any(|m| Arc::ptr_eq(m, a) || **m == **a);
    let mut skipped = Vec::new();

    let pairs: Vec<(&Arc<Algebra>, &Arc<Algebra>)> =
        members.iter().flat_map(|a| members.iter().map(move |b| (a, b))).collect();
    let mut checks = pairs
        .par_iter()
        .map(|(a, b)| {
            let p = product_algebra(a, b)?;
            Ok(check(Family::Products, vec![a.name.clone(), b.name.clone()], subclass.excludes(&p.algebra, en)?))
        })
        .collect::<Result<Vec<_>>>()?;

    for w in subs {
        if !member(&w.algebra) {
            skipped.push(format!("subalgebra {}: {} is not a member", w.name, w.algebra.name));
            continue;
        }
        match subalgebra_check(&w.inclusion, &w.algebra) {
            Ok(sub) => checks.push(check(
                Family::Subalgebras,
                vec![w.name.clone(), w.algebra.name.clone()],
                subclass.excludes(&sub, en)?,
            )),
            Err(e) => skipped.push(format!("subalgebra {}: {e}", w.name)),
        }
    }

    for a in &members {
        let quotients = enumerate_quotient_algebras(a, en.limit())?;
        let results = quotients
            .par_iter()
            .map(|q| {
                let classes = q
                    .congruence
                    .describe()
                    .iter()
                    .map(|c| format!("{{{}}}", c.join("~")))
                    .collect::<Vec<_>>();
                let label = if classes.is_empty() { "discrete".to_string() } else { classes.join(" ") };
                Ok(check(Family::Quotients, vec![a.name.clone(), label], subclass.excludes(&q.algebra, en)?))
            })
            .collect::<Result<Vec<_>>>()?;
        checks.extend(results);
    }

    for r in refl {
        if !member(&r.algebra) {
            skipped.push(format!("reflexive pair {}: {} is not a member", r.name, r.algebra.name));
            continue;
        }
        let cong = algebra_congruence_closure(&r.algebra, &r.generators)?;
        let (_, h) = quotient_algebra(&r.algebra, &cong)?;
        let data = algebra_kernel(&h)?;
        let (coequifier, _) = reflexive_coequifier_algebra(&data)?;
        checks.push(check(
            Family::ReflexiveCoequifiers,
            vec![r.name.clone(), r.algebra.name.clone()],
            subclass.excludes(&coequifier, en)?,
        ));
    }

    checks.sort_by(|x, y| (x.family, &x.inputs).cmp(&(y.family, &y.inputs)));
    Ok(ClosureReport {
        catalog: catalog.iter().map(|a| a.name.clone()).collect(),
        members: members.iter().map(|a| a.name.clone()).collect(),
        checks,
        skipped,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InclusionReport {
    pub homs: usize,
    pub two_cells: usize,
    pub agree: bool,
    pub note: &'static str,
}

/// Compares the hom-categories `A → B` computed over the base presentation
/// and over the extended one.
pub fn verify_fully_faithful_inclusion(
    e: &Extension,
    a: &Arc<Algebra>,
    b: &Arc<Algebra>,
    en: &dyn Enumerator,
) -> Result<InclusionReport> {
    for x in [a, b] {
        require_base(x, e)?;
        if !satisfies(x, e)?.holds() {
            return Err(Error::ProbeViolatesExtension(x.name.clone()));
        }
    }
    let extended = Arc::new(e.presentation());
    let lift = |x: &Algebra| -> Result<Arc<Algebra>> {
        Ok(Arc::new(Algebra::new(
            &x.name,
            extended.clone(),
            x.carrier().clone(),
            x.op_tables().to_vec(),
            x.generator_tables().to_vec(),
        )?))
    };
    let (ea, eb) = (lift(a)?, lift(b)?);
    let base_homs = enumerate_algebra_homs(a, b, en)?;
    let ext_homs = enumerate_algebra_homs(&ea, &eb, en)?;
    let same_functors = |x: &[AlgebraHom], y: &[AlgebraHom]| {
        x.len() == y.len() && x.iter().zip(y).all(|(p, q)| p.underlying() == q.underlying())
    };
    let mut agree = same_functors(&base_homs, &ext_homs);
    let mut two_cells = 0;
    if agree {
        for (h, eh) in base_homs.iter().zip(&ext_homs) {
            for (k, ek) in base_homs.iter().zip(&ext_homs) {
                let base = enumerate_algebra_two_cells(h, k, en)?;
                let ext = enumerate_algebra_two_cells(eh, ek, en)?;
                agree &= base == ext;
                two_cells += base.len();
            }
        }
    }
    Ok(InclusionReport {
        homs: base_homs.len(),
        two_cells,
        agree,
        note: "algebras for the extension are base algebras satisfying more equations, so agreement is a consistency check of the encoding",
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalityEntry {
    pub unit_of: String,
    pub probe: String,
    pub probe_satisfies: bool,
    pub orthogonal: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterisationReport {
    pub entries: Vec<OrthogonalityEntry>,
    /// `B ⊨ E` but some unit is not orthogonal to `B`, or `B ⊭ E` but every
    /// unit is.
    pub disagreements: Vec<String>,
}

impl CharacterisationReport {
    pub fn holds(&self) -> bool {
        self.disagreements.is_empty()
    }

    /// Catalog algebras orthogonal to every unit.
    pub fn orthogonality_class(&self) -> Vec<String> {
        let mut probes: Vec<String> = Vec::new();
        for e in &self.entries {
            if !probes.contains(&e.probe) {
                probes.push(e.probe.clone());
            }
        }
        probes
            .into_iter()
            .filter(|p| self.entries.iter().filter(|e| &e.probe == p).all(|e| e.orthogonal))
            .collect()
    }
}

/// Checks every catalog unit `η_A` against every catalog algebra and
/// compares the class orthogonal to all units with the satisfying class.
pub fn verify_orthogonality_characterisation(
    e: &Extension,
    catalog: &[Arc<Algebra>],
    en: &dyn Enumerator,
) -> Result<CharacterisationReport> {
    let units = catalog.iter().map(|a| reflect(a, e)).collect::<Result<Vec<_>>>()?;
    let sat = catalog
        .iter()
        .map(|b| Ok(satisfies(b, e)?.holds()))
        .collect::<Result<Vec<bool>>>()?;
    let pairs: Vec<(usize, usize)> =
        (0..catalog.len()).flat_map(|i| (0..catalog.len()).map(move |j| (i, j))).collect();
    let entries = pairs
        .par_iter()
        .map(|&(i, j)| {
            let v = algebra_orthogonal(&units[i].unit, &catalog[j], en)?;
            Ok(OrthogonalityEntry {
                unit_of: catalog[i].name.clone(),
                probe: catalog[j].name.clone(),
                probe_satisfies: sat[j],
                orthogonal: v.holds(),
                witness: v.witness().map(|w| w.to_string()),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut disagreements = Vec::new();
    for (j, b) in catalog.iter().enumerate() {
        let column: Vec<&OrthogonalityEntry> = entries.iter().filter(|x| x.probe == b.name).collect();
        let all_orthogonal = column.iter().all(|x| x.orthogonal);
        if sat[j] {
            for x in column.iter().filter(|x| !x.orthogonal) {
                disagreements.push(format!(
                    "{} satisfies the extension but the unit of {} is not orthogonal to it: {}",
                    b.name,
                    x.unit_of,
                    x.witness.as_deref().unwrap_or("")
                ));
            }
        } else if all_orthogonal {
            disagreements.push(format!("{} violates the extension but every unit is orthogonal to it", b.name));
        }
    }
    Ok(CharacterisationReport {
        entries,
        disagreements,
    })
}

/// True when `h` is bijective on objects and full.
pub fn is_quotient_map(h: &AlgebraHom) -> bool {
    classify(h.underlying()).bo_full
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{named, Fresh};
    use crate::theory::catalog::{self, coherence, monoidal};
    use crate::theory::{Presentation, Signature};

    #[test]
    fn partitions_are_counted_by_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(set_partitions(n).len(), b);
        }
    }

    #[test]
    fn reflecting_a_coherent_algebra_is_trivial() {
        let pres = monoidal();
        let e = coherence(&pres);
        for a in catalog::all(&pres).into_iter().filter(|a| a.name != "sigma_assoc") {
            let r = reflect(&a, &e).unwrap();
            assert!(r.unit.underlying().is_isomorphism(), "{}", a.name);
        }
    }

    #[test]
    fn reflecting_the_sigma_associator_collapses_sigma() {
        let pres = monoidal();
        let e = coherence(&pres);
        let en = Fresh::default();
        let a = Arc::new(catalog::sigma_assoc(&pres));
        let r = reflect(&a, &e).unwrap();
        let c = classify(r.unit.underlying());
        assert!(c.bo_full && !c.faithful);
        assert!(satisfies(&r.reflected, &e).unwrap().holds());
        let strict = Arc::new(catalog::strict_xor(&pres));
        assert!(find_algebra_isomorphism(&r.reflected, &strict, &en).unwrap().is_some());
        assert!(verify_reflection_free(&r, &e, &[strict, r.reflected.clone()], &en).unwrap().holds());
        assert!(matches!(
            verify_reflection_free(&r, &e, &[a.clone()], &en),
            Err(Error::ProbeViolatesExtension(_))
        ));
        // Idempotence.
        assert!(reflect(&r.reflected, &e).unwrap().unit.underlying().is_isomorphism());
    }

    #[test]
    fn quotient_counts() {
        let pres = monoidal();
        let limit = SearchLimit::default();
        let meet = Arc::new(catalog::meet2(&pres));
        assert_eq!(enumerate_quotient_algebras(&meet, limit).unwrap().len(), 1);
        let bare = Arc::new(Presentation::new(Signature::default(), vec![], vec![], vec![]).unwrap());
        let p = Arc::new(Algebra::new("P", bare, named::parallel(), vec![], vec![]).unwrap());
        assert_eq!(enumerate_quotient_algebras(&p, limit).unwrap().len(), 2);
        let sigma = Arc::new(catalog::sigma_assoc(&pres));
        let qs = enumerate_quotient_algebras(&sigma, limit).unwrap();
        assert_eq!(qs.len(), 2);
        assert!(qs[0].congruence.is_discrete());
        assert_eq!(qs[1].congruence.class_count(), 2);
        assert!(matches!(
            enumerate_quotient_algebras(&sigma, SearchLimit(2)),
            Err(Error::SizeLimitExceeded { .. })
        ));
    }

    #[test]
    fn audits() {
        let pres = monoidal();
        let en = Fresh::default();
        let cat = catalog::all(&pres);
        let empty = audit_closure(&Subclass::Equational(Extension::empty(pres.clone())), &cat, &[], &[], &en).unwrap();
        assert!(empty.passed());
        assert_eq!(empty.members.len(), cat.len());
        let coherent = audit_closure(&Subclass::Equational(coherence(&pres)), &cat, &[], &[], &en).unwrap();
        assert!(coherent.passed(), "{coherent}");
        assert!(!coherent.members.contains(&"sigma_assoc".to_string()));
        let sigma = cat.iter().find(|a| a.name == "sigma_assoc").unwrap().clone();
        let corrupted = audit_closure(&Subclass::Explicit(vec![sigma]), &cat, &[], &[], &en).unwrap();
        let fail = corrupted.first_failure(Family::Quotients).unwrap();
        assert_eq!(fail.inputs, vec!["sigma_assoc".to_string(), "{id_0~s0} {id_1~s1}".to_string()]);
    }

    #[test]
    fn inclusion_and_characterisation() {
        let pres = monoidal();
        let en = Fresh::default();
        let e = coherence(&pres);
        let x = Arc::new(catalog::strict_xor(&pres));
        let r = verify_fully_faithful_inclusion(&e, &x, &x, &en).unwrap();
        assert!(r.agree && r.homs >= 1);
        let report = verify_orthogonality_characterisation(&e, &catalog::all(&pres), &en).unwrap();
        assert!(report.holds(), "{:?}", report.disagreements);
        let own = report
            .entries
            .iter()
            .find(|x| x.unit_of == "sigma_assoc" && x.probe == "sigma_assoc")
            .unwrap();
        assert!(!own.orthogonal);
    }
}
