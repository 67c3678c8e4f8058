//! Kernels for the (b.o. full, faithful) system, coequifiers, reflexive
//! coequifier data and the immediate-convergence check.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::factor::{precomposition_bijective, OrthogonalityWitness};
use crate::fincat::{
    classify, compose_functors, congruence_closure, copair, coproduct_category,
    quotient_by_congruence, same_category, search_functors, Coproduct, Enumerator, FinCategory,
    Functor, Mor, MorphismInfo, NatTransformation, Obj, Quotient, Side,
};
use crate::fincat::whisker;
use crate::verdict::Verdict;

/// Kernel data `s, t: K → A` with 2-cells `phi, psi: s ⇒ t`.
#[derive(Clone, Debug)]
pub struct KernelData {
    pub s: Functor,
    pub t: Functor,
    pub phi: NatTransformation,
    pub psi: NatTransformation,
}

impl KernelData {
    pub fn new(phi: NatTransformation, psi: NatTransformation) -> Result<KernelData> {
        if phi.from() != psi.from() || phi.to() != psi.to() {
            return Err(Error::BoundaryMismatch(
                "phi and psi do not share their boundary functors".into(),
            ));
        }
        Ok(KernelData {
            s: phi.from().clone(),
            t: phi.to().clone(),
            phi,
            psi,
        })
    }

    pub fn apex(&self) -> &Arc<FinCategory> {
        self.s.source()
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        self.s.target()
    }

    /// `f ∗ phi = f ∗ psi`.
    pub fn coequified_by(&self, f: &Functor) -> bool {
        self.apex()
            .object_indices()
            .all(|k| f.mor(self.phi.component(k)) == f.mor(self.psi.component(k)))
    }
}

/// Lookup tables of a parallel-pair kernel.
#[derive(Clone, Debug)]
pub struct KernelIndex {
    pub pairs: Vec<(Mor, Mor)>,
    objects: HashMap<(Mor, Mor), Obj>,
    morphisms: HashMap<(Obj, Obj, Mor, Mor), Mor>,
}

impl KernelIndex {
    pub fn object(&self, u: Mor, v: Mor) -> Option<Obj> {
        self.objects.get(&(u, v)).copied()
    }

    /// The morphism `(p, q): x → y`, if it is one.
    pub fn morphism(&self, x: Obj, y: Obj, p: Mor, q: Mor) -> Option<Mor> {
        self.morphisms.get(&(x, y, p, q)).copied()
    }
}

/// Objects are the parallel pairs `(u, v)` with `f u = f v`; a morphism
/// `(u, v) → (u′, v′)` is a pair `(p, q)` with `u′p = qu` and `v′p = qv`.
pub fn bof_kernel(f: &Functor) -> KernelData {
    bof_kernel_indexed(f).0
}

pub fn bof_kernel_indexed(f: &Functor) -> (KernelData, KernelIndex) {
    let a = f.source();
    let mut pairs = Vec::new();
    for x in a.object_indices() {
        for y in a.object_indices() {
            let hom = a.hom(x, y);
            for &u in hom {
                for &v in hom {
                    if f.mor(u) == f.mor(v) {
                        pairs.push((u, v));
                    }
                }
            }
        }
    }
    let pair_id = |(u, v): (Mor, Mor)| format!("({},{})", a.morphism_id(u), a.morphism_id(v));
    let mut morphisms = Vec::new();
    let mut legs = Vec::new();
    let mut index = HashMap::new();
    for (i, &(u, v)) in pairs.iter().enumerate() {
        for (j, &(u2, v2)) in pairs.iter().enumerate() {
            for &p in a.hom(a.dom(u), a.dom(u2)) {
                for &q in a.hom(a.cod(u), a.cod(u2)) {
                    if a.compose(u2, p) == a.compose(q, u) && a.compose(v2, p) == a.compose(q, v) {
                        index.insert((Obj(i), Obj(j), p, q), Mor(morphisms.len()));
                        morphisms.push(MorphismInfo {
                            id: format!(
                                "({},{}):{}->{}",
                                a.morphism_id(p),
                                a.morphism_id(q),
                                pair_id((u, v)),
                                pair_id((u2, v2))
                            ),
                            dom: Obj(i),
                            cod: Obj(j),
                        });
                        legs.push((p, q));
                    }
                }
            }
        }
    }
    let identities = (0..pairs.len())
        .map(|i| {
            let (u, _) = pairs[i];
            index[&(Obj(i), Obj(i), a.identity(a.dom(u)), a.identity(a.cod(u)))]
        })
        .collect();
    let ends: Vec<(Obj, Obj)> = morphisms.iter().map(|m| (m.dom, m.cod)).collect();
    let apex = Arc::new(FinCategory::from_parts(
        pairs.iter().map(|&p| pair_id(p)).collect(),
        morphisms,
        identities,
        |g, h| {
            let ((p2, q2), (p1, q1)) = (legs[g.0], legs[h.0]);
            index[&(ends[h.0].0, ends[g.0].1, a.compose(p2, p1), a.compose(q2, q1))]
        },
    ));
    let s = Functor::new_unchecked(
        apex.clone(),
        a.clone(),
        pairs.iter().map(|&(u, _)| a.dom(u)).collect(),
        legs.iter().map(|&(p, _)| p).collect(),
    );
    let t = Functor::new_unchecked(
        apex.clone(),
        a.clone(),
        pairs.iter().map(|&(u, _)| a.cod(u)).collect(),
        legs.iter().map(|&(_, q)| q).collect(),
    );
    let phi = NatTransformation::new_unchecked(s.clone(), t.clone(), pairs.iter().map(|p| p.0).collect());
    let psi = NatTransformation::new_unchecked(s.clone(), t.clone(), pairs.iter().map(|p| p.1).collect());
    let objects = pairs.iter().enumerate().map(|(i, &p)| (p, Obj(i))).collect();
    (
        KernelData { s, t, phi, psi },
        KernelIndex {
            pairs,
            objects,
            morphisms: index,
        },
    )
}

/// Why kernel data is not the kernel of `f`.
#[derive(Clone, Debug)]
pub enum KernelWitness {
    NotCoequified { object: String },
    /// A datum on `apex` coequified by `f` with `mediators` maps into the
    /// proposed kernel (should be one).
    Mediators { apex: String, datum: String, mediators: usize },
    /// Two parallel morphisms of the apex identified by both legs.
    NotJointlyFaithful { first: String, second: String },
}

impl fmt::Display for KernelWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelWitness::NotCoequified { object } => {
                write!(f, "f does not coequify phi and psi at {object}")
            }
            KernelWitness::Mediators { apex, datum, mediators } => write!(
                f,
                "datum {datum} on apex {apex} has {mediators} mediating functors"
            ),
            KernelWitness::NotJointlyFaithful { first, second } => {
                write!(f, "legs identify {first} and {second}")
            }
        }
    }
}

/// `f` coequifies the data, every coequified datum on a probe apex factors
/// through it by exactly one functor, and the legs are jointly faithful (so
/// mediating 2-cells are unique as well).
pub fn verify_kernel_universal(
    kd: &KernelData,
    f: &Functor,
    probes: &[Arc<FinCategory>],
    en: &dyn Enumerator,
) -> Result<Verdict<KernelWitness>> {
    let (k, a) = (kd.apex(), kd.base());
    if !same_category(a, f.source()) {
        return Err(Error::BoundaryMismatch("kernel data and functor disagree on A".into()));
    }
    for o in k.object_indices() {
        if f.mor(kd.phi.component(o)) != f.mor(kd.psi.component(o)) {
            return Ok(Verdict::Fails(KernelWitness::NotCoequified {
                object: k.object_id(o).to_string(),
            }));
        }
    }
    for x in k.object_indices() {
        for y in k.object_indices() {
            let hom = k.hom(x, y);
            for (i, &m) in hom.iter().enumerate() {
                for &n in &hom[i + 1..] {
                    if kd.s.mor(m) == kd.s.mor(n) && kd.t.mor(m) == kd.t.mor(n) {
                        return Ok(Verdict::Fails(KernelWitness::NotJointlyFaithful {
                            first: k.morphism_id(m).to_string(),
                            second: k.morphism_id(n).to_string(),
                        }));
                    }
                }
            }
        }
    }
    for j in probes {
        let legs = en.functors(j, a)?;
        for s2 in legs.iter() {
            for t2 in legs.iter() {
                let cells = en.nats(s2, t2)?;
                for phi2 in cells.iter() {
                    for psi2 in cells.iter() {
                        let coequified = j
                            .object_indices()
                            .all(|o| f.mor(phi2.component(o)) == f.mor(psi2.component(o)));
                        if !coequified {
                            continue;
                        }
                        let n = count_mediators(kd, s2, t2, phi2, psi2, en)?;
                        if n != 1 {
                            let datum = format!("s = {s2:?}, t = {t2:?}, phi = {phi2:?}, psi = {psi2:?}");
                            return Ok(Verdict::Fails(KernelWitness::Mediators {
                                apex: format!("{j:?}"),
                                datum,
                                mediators: n,
                            }));
                        }
                    }
                }
            }
        }
    }
    Ok(Verdict::Holds)
}

/// Functors `m: J → K` with `s m = s′`, `t m = t′`, `phi ∗ m = phi′` and
/// `psi ∗ m = psi′`, counted by search.
fn count_mediators(
    kd: &KernelData,
    s2: &Functor,
    t2: &Functor,
    phi2: &NatTransformation,
    psi2: &NatTransformation,
    en: &dyn Enumerator,
) -> Result<usize> {
    let mut count = 0;
    search_functors(
        s2.source(),
        kd.apex(),
        en.limit(),
        |j, k| {
            kd.s.obj(k) == s2.obj(j)
                && kd.t.obj(k) == t2.obj(j)
                && kd.phi.component(k) == phi2.component(j)
                && kd.psi.component(k) == psi2.component(j)
        },
        |m, km| kd.s.mor(km) == s2.mor(m) && kd.t.mor(km) == t2.mor(m),
        |_| {
            count += 1;
            true
        },
    )?;
    Ok(count)
}

/// Quotient of `A` by the congruence generated by `(phi_k, psi_k)`.
pub fn coequify(phi: &NatTransformation, psi: &NatTransformation) -> Result<Quotient> {
    let kd = KernelData::new(phi.clone(), psi.clone())?;
    let gens: Vec<(Mor, Mor)> = kd
        .apex()
        .object_indices()
        .map(|k| (phi.component(k), psi.component(k)))
        .collect();
    Ok(quotient_by_congruence(&congruence_closure(kd.base(), &gens)?))
}

/// The coequifier's universal property against probe categories: functors
/// out of the quotient biject with coequifying functors out of `A`, and so
/// do 2-cells between them.
pub fn verify_coequifier_2d(
    q: &Functor,
    phi: &NatTransformation,
    psi: &NatTransformation,
    probes: &[Arc<FinCategory>],
    en: &dyn Enumerator,
) -> Result<Verdict<OrthogonalityWitness>> {
    let kd = KernelData::new(phi.clone(), psi.clone())?;
    if !kd.coequified_by(q) {
        return Err(Error::InvalidFunctor("q does not coequify phi and psi".into()));
    }
    for x in probes {
        let v = precomposition_bijective(q, x, en, |h| kd.coequified_by(h))?;
        if !v.holds() {
            return Ok(v);
        }
    }
    Ok(Verdict::Holds)
}

/// The reflexive pair over `K + A`: `[s, 1]`, `[t, 1]`, `[phi, 1]`, `[psi, 1]`
/// with the section `i_A`.
#[derive(Clone, Debug)]
pub struct ReflexiveData {
    pub coproduct: Coproduct,
    pub data: KernelData,
    pub section: Functor,
}

impl ReflexiveData {
    /// `[s,1] i = [t,1] i = 1` and `[phi,1] ∗ i = [psi,1] ∗ i = 1`.
    pub fn reflexivity_holds(&self) -> bool {
        let i = &self.section;
        let unit = |f: &Functor| compose_functors(f, i).is_ok_and(|c| c.is_identity());
        let trivial = |n: &NatTransformation| whisker(i, n, Side::Right).is_ok_and(|w| w.is_identity());
        unit(&self.data.s) && unit(&self.data.t) && trivial(&self.data.phi) && trivial(&self.data.psi)
    }
}

pub fn make_reflexive(kd: &KernelData) -> Result<ReflexiveData> {
    let a = kd.base();
    let coproduct = coproduct_category(kd.apex(), a);
    let id = Functor::identity(a);
    let one = NatTransformation::identity(&id);
    let phi = coproduct.copair_nat(&kd.phi, &one)?;
    let psi = coproduct.copair_nat(&kd.psi, &one)?;
    let s = copair(&coproduct, &kd.s, &id)?;
    let t = copair(&coproduct, &kd.t, &id)?;
    Ok(ReflexiveData {
        section: coproduct.right.clone(),
        coproduct,
        data: KernelData { s, t, phi, psi },
    })
}

/// Mutually inverse comparison functors between two quotients of the same
/// category that commute with the projections, when they exist.
pub fn quotient_isomorphism(q1: &Quotient, q2: &Quotient) -> Option<(Functor, Functor)> {
    let there = q1.induced(&q2.projection).ok()?;
    let back = q2.induced(&q1.projection).ok()?;
    let round = compose_functors(&back, &there).ok()?;
    let round2 = compose_functors(&there, &back).ok()?;
    (round.is_identity() && round2.is_identity()).then_some((there, back))
}

/// `f = ε_f ∘ q` with `q` the coequifier of the kernel of `f`.
#[derive(Clone, Debug)]
pub struct Convergence {
    pub quotient: Quotient,
    pub epsilon: Functor,
    pub faithful: bool,
}

pub fn immediate_convergence_check(f: &Functor) -> Result<Convergence> {
    let kd = bof_kernel(f);
    let quotient = coequify(&kd.phi, &kd.psi)?;
    let epsilon = quotient.induced(f)?;
    debug_assert!(compose_functors(&epsilon, &quotient.projection).is_ok_and(|c| c == *f));
    if !classify(&quotient.projection).bo_full {
        return Err(Error::InvalidFunctor("coequifier is not b.o. full".into()));
    }
    let faithful = classify(&epsilon).faithful;
    Ok(Convergence {
        quotient,
        epsilon,
        faithful,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::factor_bof;
    use crate::fincat::{find_isomorphism, named, Fresh, SearchLimit};

    fn probes() -> Vec<Arc<FinCategory>> {
        vec![named::terminal(), named::arrow(), named::parallel(), named::discrete2()]
    }

    fn pick_pair() -> KernelData {
        let (one, p) = (named::terminal(), named::parallel());
        let s = Functor::constant(&one, &p, p.object("a").unwrap());
        let t = Functor::constant(&one, &p, p.object("b").unwrap());
        let phi = NatTransformation::new(s.clone(), t.clone(), vec![p.morphism("u").unwrap()]).unwrap();
        let psi = NatTransformation::new(s, t, vec![p.morphism("v").unwrap()]).unwrap();
        KernelData::new(phi, psi).unwrap()
    }

    #[test]
    fn kernel_of_identity_is_the_arrow_category() {
        let two = named::arrow();
        let kd = bof_kernel(&Functor::identity(&two));
        assert_eq!(kd.phi, kd.psi);
        // The arrows id_a → u → id_b of 2 with their squares form the chain 3.
        kd.apex().revalidate().unwrap();
        let chain = named::chain3();
        assert!(find_isomorphism(kd.apex(), &chain, SearchLimit::default()).unwrap().is_some());
    }

    #[test]
    fn kernel_of_the_collapse_contains_the_parallel_pairs() {
        let kd = bof_kernel(&named::collapse());
        for id in ["(u,v)", "(v,u)", "(u,u)", "(v,v)", "(id_a,id_a)", "(id_b,id_b)"] {
            assert!(kd.apex().find_object(id).is_some(), "{id}");
        }
        assert_eq!(kd.apex().object_count(), 6);
        kd.apex().revalidate().unwrap();
    }

    #[test]
    fn kernels_are_universal() {
        for f in [Functor::identity(&named::arrow()), named::collapse()] {
            let kd = bof_kernel(&f);
            assert!(verify_kernel_universal(&kd, &f, &probes(), &Fresh::default()).unwrap().holds());
        }
    }

    #[test]
    fn trivial_data_is_not_the_kernel_of_the_collapse() {
        let (one, p) = (named::terminal(), named::parallel());
        let s = Functor::constant(&one, &p, p.object("a").unwrap());
        let unit = NatTransformation::identity(&s);
        let kd = KernelData::new(unit.clone(), unit).unwrap();
        let v = verify_kernel_universal(&kd, &named::collapse(), &probes(), &Fresh::default()).unwrap();
        assert!(matches!(v.witness(), Some(KernelWitness::Mediators { mediators: 0, .. })));
    }

    #[test]
    fn coequifying_u_and_v() {
        let kd = pick_pair();
        let q = coequify(&kd.phi, &kd.psi).unwrap();
        assert_eq!(*q.category, *named::arrow());
        assert!(verify_coequifier_2d(&q.projection, &kd.phi, &kd.psi, &probes(), &Fresh::default())
            .unwrap()
            .holds());
        let unit = NatTransformation::identity(&kd.s);
        assert!(coequify(&unit, &unit).unwrap().projection.is_isomorphism());
    }

    #[test]
    fn collapsing_too_much_is_not_a_coequifier() {
        let kd = pick_pair();
        let p = kd.base().clone();
        let bang = Functor::constant(&p, &named::terminal(), Obj(0));
        let v = verify_coequifier_2d(&bang, &kd.phi, &kd.psi, &probes(), &Fresh::default()).unwrap();
        assert!(!v.holds());
    }

    #[test]
    fn reflexive_data_has_the_same_coequifier() {
        let kd = pick_pair();
        let r = make_reflexive(&kd).unwrap();
        assert!(r.reflexivity_holds());
        let q1 = coequify(&kd.phi, &kd.psi).unwrap();
        let q2 = coequify(&r.data.phi, &r.data.psi).unwrap();
        assert!(quotient_isomorphism(&q1, &q2).is_some());
    }

    #[test]
    fn kernel_coequifier_recovers_the_bof_left_part() {
        let e = named::collapse();
        let kd = bof_kernel(&e);
        let q = coequify(&kd.phi, &kd.psi).unwrap();
        let fact = factor_bof(&e);
        let left = Quotient {
            category: fact.middle.clone(),
            projection: fact.left.clone(),
        };
        assert!(quotient_isomorphism(&q, &left).is_some());
    }

    #[test]
    fn convergence_of_the_collapse() {
        let c = immediate_convergence_check(&named::collapse()).unwrap();
        assert!(c.faithful && c.epsilon.is_isomorphism());
        let two = named::arrow();
        let c = immediate_convergence_check(&Functor::identity(&two)).unwrap();
        assert!(c.faithful && c.epsilon.is_isomorphism());
    }
}
