//! Strict homomorphisms of algebras and the 2-cells between them.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::algebra::{all_tuples, Algebra};
use crate::error::{Error, Result};
use crate::fincat::{same_category, whisker, Enumerator, Functor, Mor, NatTransformation, Obj, Side};
use crate::verdict::Verdict;

/// A functor between carriers commuting strictly with the structure.
#[derive(Clone, Debug)]
pub struct AlgebraHom {
    source: Arc<Algebra>,
    target: Arc<Algebra>,
    underlying: Functor,
}

impl PartialEq for AlgebraHom {
    fn eq(&self, other: &Self) -> bool {
        self.underlying == other.underlying
    }
}

/// Where a functor fails to be a homomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomFailure {
    /// Operation or generator name.
    pub structure: String,
    pub tuple: Vec<String>,
    /// Image of the structure at the tuple.
    pub mapped: String,
    /// Structure at the image tuple.
    pub expected: String,
}

impl fmt::Display for HomFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "h({}({})) = {} but {} is expected",
            self.structure,
            self.tuple.join(", "),
            self.mapped,
            self.expected
        )
    }
}

fn check_compatible(h: &Functor, a: &Algebra, b: &Algebra) -> Result<()> {
    if **a.presentation() != **b.presentation() {
        return Err(Error::SignatureMismatch(format!(
            "{} and {} are algebras for different presentations",
            a.name, b.name
        )));
    }
    if !same_category(h.source(), a.carrier()) || !same_category(h.target(), b.carrier()) {
        return Err(Error::BoundaryMismatch(format!(
            "functor does not go from the carrier of {} to the carrier of {}",
            a.name, b.name
        )));
    }
    Ok(())
}

/// Decides whether `h` commutes with every operation (objects first, then
/// morphisms) and every generator component.
pub fn is_algebra_hom(h: &Functor, a: &Algebra, b: &Algebra) -> Result<Verdict<HomFailure>> {
    check_compatible(h, a, b)?;
    let (ca, cb) = (a.carrier(), b.carrier());
    let p = a.presentation();
    for (k, op) in p.signature.operations.iter().enumerate() {
        for t in all_tuples(ca.object_count(), op.arity) {
            let t: Vec<Obj> = t.into_iter().map(Obj).collect();
            let ht: Vec<Obj> = t.iter().map(|&o| h.obj(o)).collect();
            let (mapped, expected) = (h.obj(a.op_obj(k, &t)), b.op_obj(k, &ht));
            if mapped != expected {
                return Ok(Verdict::Fails(HomFailure {
                    structure: op.name.clone(),
                    tuple: t.iter().map(|&o| ca.object_id(o).to_string()).collect(),
                    mapped: cb.object_id(mapped).to_string(),
                    expected: cb.object_id(expected).to_string(),
                }));
            }
        }
    }
    for (k, op) in p.signature.operations.iter().enumerate() {
        for t in all_tuples(ca.morphism_count(), op.arity) {
            let t: Vec<Mor> = t.into_iter().map(Mor).collect();
            let ht: Vec<Mor> = t.iter().map(|&m| h.mor(m)).collect();
            let (mapped, expected) = (h.mor(a.op_mor(k, &t)), b.op_mor(k, &ht));
            if mapped != expected {
                return Ok(Verdict::Fails(HomFailure {
                    structure: op.name.clone(),
                    tuple: t.iter().map(|&m| ca.morphism_id(m).to_string()).collect(),
                    mapped: cb.morphism_id(mapped).to_string(),
                    expected: cb.morphism_id(expected).to_string(),
                }));
            }
        }
    }
    for (k, g) in p.generators.iter().enumerate() {
        for t in all_tuples(ca.object_count(), g.arity) {
            let t: Vec<Obj> = t.into_iter().map(Obj).collect();
            let ht: Vec<Obj> = t.iter().map(|&o| h.obj(o)).collect();
            let (mapped, expected) = (h.mor(a.component(k, &t)), b.component(k, &ht));
            if mapped != expected {
                return Ok(Verdict::Fails(HomFailure {
                    structure: g.name.clone(),
                    tuple: t.iter().map(|&o| ca.object_id(o).to_string()).collect(),
                    mapped: cb.morphism_id(mapped).to_string(),
                    expected: cb.morphism_id(expected).to_string(),
                }));
            }
        }
    }
    Ok(Verdict::Holds)
}

impl AlgebraHom {
    pub fn new(source: Arc<Algebra>, target: Arc<Algebra>, underlying: Functor) -> Result<AlgebraHom> {
        if let Verdict::Fails(w) = is_algebra_hom(&underlying, &source, &target)? {
            return Err(Error::NotAHomomorphism(w.to_string()));
        }
        Ok(AlgebraHom {
            source,
            target,
            underlying,
        })
    }

    pub(crate) fn new_unchecked(source: Arc<Algebra>, target: Arc<Algebra>, underlying: Functor) -> AlgebraHom {
        debug_assert!(matches!(
            is_algebra_hom(&underlying, &source, &target),
            Ok(Verdict::Holds)
        ));
        AlgebraHom {
            source,
            target,
            underlying,
        }
    }

    pub fn identity(a: &Arc<Algebra>) -> AlgebraHom {
        AlgebraHom {
            source: a.clone(),
            target: a.clone(),
            underlying: Functor::identity(a.carrier()),
        }
    }

    pub fn source(&self) -> &Arc<Algebra> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Algebra> {
        &self.target
    }

    pub fn underlying(&self) -> &Functor {
        &self.underlying
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &AlgebraHom) -> Result<AlgebraHom> {
        Ok(AlgebraHom {
            source: first.source.clone(),
            target: self.target.clone(),
            underlying: self.underlying.after(&first.underlying)?,
        })
    }

    /// Inverse of a homomorphism that is an isomorphism of carriers; such an
    /// inverse is automatically a homomorphism.
    pub fn inverse(&self) -> Option<AlgebraHom> {
        Some(AlgebraHom::new_unchecked(
            self.target.clone(),
            self.source.clone(),
            self.underlying.inverse()?,
        ))
    }
}

/// All homomorphisms `a → b`.
pub fn enumerate_algebra_homs(a: &Arc<Algebra>, b: &Arc<Algebra>, en: &dyn Enumerator) -> Result<Vec<AlgebraHom>> {
    let mut out = Vec::new();
    for f in en.functors(a.carrier(), b.carrier())?.iter() {
        if is_algebra_hom(f, a, b)?.holds() {
            out.push(AlgebraHom::new_unchecked(a.clone(), b.clone(), f.clone()));
        }
    }
    Ok(out)
}

/// An invertible homomorphism `a → b`, if there is one.
pub fn find_algebra_isomorphism(a: &Arc<Algebra>, b: &Arc<Algebra>, en: &dyn Enumerator) -> Result<Option<AlgebraHom>> {
    let (ca, cb) = (a.carrier(), b.carrier());
    if ca.object_count() != cb.object_count() || ca.morphism_count() != cb.morphism_count() {
        return Ok(None);
    }
    for f in en.functors(ca, cb)?.iter() {
        if f.is_isomorphism() && is_algebra_hom(f, a, b)?.holds() {
            return Ok(Some(AlgebraHom::new_unchecked(a.clone(), b.clone(), f.clone())));
        }
    }
    Ok(None)
}

/// `ρ: h ⇒ k` is an algebra 2-cell when `ρ_{op(X)} = op(ρ_X)` for every
/// operation and object tuple; for nullary operations that makes the
/// component at the constant an identity.
pub fn is_algebra_two_cell(rho: &NatTransformation, h: &AlgebraHom, k: &AlgebraHom) -> Result<bool> {
    if *rho.from() != h.underlying || *rho.to() != k.underlying {
        return Err(Error::BoundaryMismatch("2-cell does not go between the given homomorphisms".into()));
    }
    let (a, b) = (&h.source, &h.target);
    for (i, op) in a.presentation().signature.operations.iter().enumerate() {
        for t in all_tuples(a.carrier().object_count(), op.arity) {
            let t: Vec<Obj> = t.into_iter().map(Obj).collect();
            let comps: Vec<Mor> = t.iter().map(|&o| rho.component(o)).collect();
            if rho.component(a.op_obj(i, &t)) != b.op_mor(i, &comps) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn enumerate_algebra_two_cells(
    h: &AlgebraHom,
    k: &AlgebraHom,
    en: &dyn Enumerator,
) -> Result<Vec<NatTransformation>> {
    let mut out = Vec::new();
    for rho in en.nats(&h.underlying, &k.underlying)?.iter() {
        if is_algebra_two_cell(rho, h, k)? {
            out.push(rho.clone());
        }
    }
    Ok(out)
}

/// Why precomposition with a homomorphism fails to be bijective.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum OrthogonalityFailure {
    /// A homomorphism out of the domain that does not factor.
    DoesNotFactor { hom: String },
    /// Two distinct homomorphisms with the same restriction.
    FactorsTwice { first: String, second: String },
    /// A 2-cell between restricted homomorphisms that does not lift.
    CellDoesNotLift { from: String, to: String, cell: String },
    CellLiftsTwice { from: String, to: String, cell: String },
}

impl fmt::Display for OrthogonalityFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrthogonalityFailure::DoesNotFactor { hom } => write!(f, "{hom} does not factor"),
            OrthogonalityFailure::FactorsTwice { first, second } => {
                write!(f, "{first} and {second} have the same restriction")
            }
            OrthogonalityFailure::CellDoesNotLift { from, to, cell } => {
                write!(f, "2-cell {cell} between {from} and {to} does not lift")
            }
            OrthogonalityFailure::CellLiftsTwice { from, to, cell } => {
                write!(f, "2-cell {cell} between {from} and {to} lifts twice")
            }
        }
    }
}

/// Decides whether precomposition with `eta: A → L` is a bijection
/// `Hom(L, B) → Hom(A, B)` and, for every pair of homs out of `L`, a
/// bijection on algebra 2-cells.
pub fn algebra_orthogonal(
    eta: &AlgebraHom,
    b: &Arc<Algebra>,
    en: &dyn Enumerator,
) -> Result<Verdict<OrthogonalityFailure>> {
    let out_of_l = enumerate_algebra_homs(&eta.target, b, en)?;
    let out_of_a = enumerate_algebra_homs(&eta.source, b, en)?;
    let restricted = out_of_l
        .iter()
        .map(|u| u.after(eta))
        .collect::<Result<Vec<_>>>()?;
    for (i, r) in restricted.iter().enumerate() {
        if let Some(j) = restricted[..i].iter().position(|s| s == r) {
            return Ok(Verdict::Fails(OrthogonalityFailure::FactorsTwice {
                first: format!("{:?}", out_of_l[j].underlying),
                second: format!("{:?}", out_of_l[i].underlying),
            }));
        }
    }
    for g in &out_of_a {
        if !restricted.contains(g) {
            return Ok(Verdict::Fails(OrthogonalityFailure::DoesNotFactor {
                hom: format!("{:?}", g.underlying),
            }));
        }
    }
    for (u, ue) in out_of_l.iter().zip(&restricted) {
        for (v, ve) in out_of_l.iter().zip(&restricted) {
            let above = enumerate_algebra_two_cells(u, v, en)?;
            let below = enumerate_algebra_two_cells(ue, ve, en)?;
            let whiskered = above
                .iter()
                .map(|c| whisker(&eta.underlying, c, Side::Right))
                .collect::<Result<Vec<_>>>()?;
            let describe = || (format!("{:?}", ue.underlying), format!("{:?}", ve.underlying));
            for (i, w) in whiskered.iter().enumerate() {
                if whiskered[..i].contains(w) {
                    let (from, to) = describe();
                    return Ok(Verdict::Fails(OrthogonalityFailure::CellLiftsTwice {
                        from,
                        to,
                        cell: format!("{w:?}"),
                    }));
                }
            }
            for c in &below {
                if !whiskered.contains(c) {
                    let (from, to) = describe();
                    return Ok(Verdict::Fails(OrthogonalityFailure::CellDoesNotLift {
                        from,
                        to,
                        cell: format!("{c:?}"),
                    }));
                }
            }
        }
    }
    Ok(Verdict::Holds)
}
