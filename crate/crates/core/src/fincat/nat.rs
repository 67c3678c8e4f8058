use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::category::{FinCategory, Mor, Obj};
use super::functor::{compose_functors, same_category, Functor};
use crate::error::{Error, Result};

/// A natural transformation `from ⇒ to` between parallel functors.
#[derive(Clone, PartialEq, Eq)]
pub struct NatTransformation {
    from: Functor,
    to: Functor,
    components: Vec<Mor>,
}

impl fmt::Debug for NatTransformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, t) = (self.source_category(), self.target_category());
        let comps: Vec<String> = s
            .object_indices()
            .map(|o| format!("{}:{}", s.object_id(o), t.morphism_id(self.component(o))))
            .collect();
        write!(f, "Nat[{}]", comps.join(", "))
    }
}

/// Which side a functor is whiskered on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `h ∗ α`: postcompose, components become `h(α_a)`.
    Left,
    /// `α ∗ h`: precompose, components become `α_{h(c)}`.
    Right,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawComponents {
    pub components: BTreeMap<String, String>,
}

impl NatTransformation {
    pub fn new(from: Functor, to: Functor, components: Vec<Mor>) -> Result<NatTransformation> {
        if !same_category(from.source(), to.source()) || !same_category(from.target(), to.target())
        {
            return Err(Error::BoundaryMismatch("functors are not parallel".into()));
        }
        if components.len() != from.source().object_count() {
            return Err(Error::InvalidNatTransformation(
                "one component per object is required".into(),
            ));
        }
        let n = NatTransformation {
            from,
            to,
            components,
        };
        n.check()?;
        Ok(n)
    }

    pub(crate) fn new_unchecked(from: Functor, to: Functor, components: Vec<Mor>) -> Self {
        let n = NatTransformation {
            from,
            to,
            components,
        };
        debug_assert!(n.check().is_ok(), "{:?}", n.check());
        n
    }

    fn check(&self) -> Result<()> {
        let (s, t) = (self.source_category(), self.target_category());
        for a in s.object_indices() {
            let c = self.component(a);
            if c.0 >= t.morphism_count()
                || t.dom(c) != self.from.obj(a)
                || t.cod(c) != self.to.obj(a)
            {
                return Err(Error::InvalidNatTransformation(format!(
                    "component at {} has the wrong boundary",
                    s.object_id(a)
                )));
            }
        }
        for m in s.morphism_indices() {
            let (a, b) = (s.dom(m), s.cod(m));
            let lhs = t.compose(self.to.mor(m), self.component(a));
            let rhs = t.compose(self.component(b), self.from.mor(m));
            if lhs != rhs {
                return Err(Error::InvalidNatTransformation(format!(
                    "naturality square at {} does not commute",
                    s.morphism_id(m)
                )));
            }
        }
        Ok(())
    }

    pub fn from_raw(from: Functor, to: Functor, raw: &RawComponents) -> Result<Self> {
        let (s, t) = (from.source().clone(), from.target().clone());
        let mut components = Vec::with_capacity(s.object_count());
        for o in s.object_indices() {
            let id = s.object_id(o);
            let c = match raw.components.get(id) {
                Some(c) => t.morphism(c)?,
                None => match t.hom(from.obj(o), to.obj(o)) {
                    [only] => *only,
                    _ => {
                        return Err(Error::InvalidNatTransformation(format!(
                            "missing component at {id}"
                        )))
                    }
                },
            };
            components.push(c);
        }
        for k in raw.components.keys() {
            s.object(k)?;
        }
        NatTransformation::new(from, to, components)
    }

    pub fn to_raw(&self) -> RawComponents {
        let (s, t) = (self.source_category(), self.target_category());
        RawComponents {
            components: s
                .object_indices()
                .map(|o| {
                    (
                        s.object_id(o).to_string(),
                        t.morphism_id(self.component(o)).to_string(),
                    )
                })
                .collect(),
        }
    }

    pub fn identity(f: &Functor) -> NatTransformation {
        let t = f.target();
        let components = f
            .source()
            .object_indices()
            .map(|o| t.identity(f.obj(o)))
            .collect();
        NatTransformation {
            from: f.clone(),
            to: f.clone(),
            components,
        }
    }

    pub fn from(&self) -> &Functor {
        &self.from
    }

    pub fn to(&self) -> &Functor {
        &self.to
    }

    pub fn source_category(&self) -> &Arc<FinCategory> {
        self.from.source()
    }

    pub fn target_category(&self) -> &Arc<FinCategory> {
        self.from.target()
    }

    pub fn component(&self, a: Obj) -> Mor {
        self.components[a.0]
    }

    pub fn components(&self) -> &[Mor] {
        &self.components
    }

    pub fn is_identity(&self) -> bool {
        let t = self.target_category();
        self.components.iter().all(|&c| t.is_identity(c))
    }

    /// Inverse, when every component is invertible.
    pub fn inverse(&self) -> Option<NatTransformation> {
        let t = self.target_category();
        let components = self
            .components
            .iter()
            .map(|&c| t.inverse(c))
            .collect::<Option<Vec<_>>>()?;
        Some(NatTransformation::new_unchecked(
            self.to.clone(),
            self.from.clone(),
            components,
        ))
    }
}

/// Vertical composite `β · α` (first `α`, then `β`).
pub fn vcompose(beta: &NatTransformation, alpha: &NatTransformation) -> Result<NatTransformation> {
    if alpha.to != beta.from {
        return Err(Error::BoundaryMismatch(
            "target functor of the first 2-cell is not the source of the second".into(),
        ));
    }
    let t = alpha.target_category();
    let components = alpha
        .components
        .iter()
        .zip(&beta.components)
        .map(|(&a, &b)| t.compose(b, a))
        .collect();
    Ok(NatTransformation::new_unchecked(
        alpha.from.clone(),
        beta.to.clone(),
        components,
    ))
}

/// Whiskers `alpha` with `h` on the given side.
pub fn whisker(h: &Functor, alpha: &NatTransformation, side: Side) -> Result<NatTransformation> {
    match side {
        Side::Right => {
            if !same_category(h.target(), alpha.source_category()) {
                return Err(Error::BoundaryMismatch(
                    "functor does not land in the source of the 2-cell".into(),
                ));
            }
            let components = h
                .source()
                .object_indices()
                .map(|c| alpha.component(h.obj(c)))
                .collect();
            Ok(NatTransformation::new_unchecked(
                compose_functors(&alpha.from, h)?,
                compose_functors(&alpha.to, h)?,
                components,
            ))
        }
        Side::Left => {
            if !same_category(h.source(), alpha.target_category()) {
                return Err(Error::BoundaryMismatch(
                    "functor does not start at the target of the 2-cell".into(),
                ));
            }
            let components = alpha.components.iter().map(|&c| h.mor(c)).collect();
            Ok(NatTransformation::new_unchecked(
                compose_functors(h, &alpha.from)?,
                compose_functors(h, &alpha.to)?,
                components,
            ))
        }
    }
}

impl NatTransformation {
    /// `self ∗ h`.
    pub fn whisker_right(&self, h: &Functor) -> Result<NatTransformation> {
        whisker(h, self, Side::Right)
    }

    /// `h ∗ self`.
    pub fn whisker_left(&self, h: &Functor) -> Result<NatTransformation> {
        whisker(h, self, Side::Left)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{enumerate_nat_transformations, named};

    #[test]
    fn identity_is_a_unit_for_vertical_composition() {
        let two = named::arrow();
        let id = Functor::identity(&two);
        let b = two.object("b").unwrap();
        let to_b = Functor::constant(&two, &two, b);
        for alpha in enumerate_nat_transformations(&id, &to_b, Default::default()).unwrap() {
            let unit = NatTransformation::identity(&id);
            assert_eq!(vcompose(&alpha, &unit).unwrap(), alpha);
        }
    }

    #[test]
    fn identities_compose_to_identities() {
        let p = named::parallel();
        let unit = NatTransformation::identity(&Functor::identity(&p));
        let c = vcompose(&unit, &unit).unwrap();
        assert!(c.is_identity());
    }

    #[test]
    fn sigma_components_compose_to_the_unit_in_z2() {
        let z2 = named::z2();
        let id = Functor::identity(&z2);
        let s = z2.morphism("s").unwrap();
        let sigma = NatTransformation::new(id.clone(), id.clone(), vec![s]).unwrap();
        let twice = vcompose(&sigma, &sigma).unwrap();
        assert_eq!(twice.components(), &[z2.identity(Obj(0))]);
        assert_eq!(sigma.inverse().unwrap(), sigma);
    }

    #[test]
    fn whiskering_by_identity_is_trivial() {
        let two = named::arrow();
        let id = Functor::identity(&two);
        let to_b = Functor::constant(&two, &two, two.object("b").unwrap());
        let alpha = &enumerate_nat_transformations(&id, &to_b, Default::default()).unwrap()[0];
        assert_eq!(&whisker(&id, alpha, Side::Right).unwrap(), alpha);
        assert_eq!(&whisker(&id, alpha, Side::Left).unwrap(), alpha);
        let unit = NatTransformation::identity(&to_b);
        let e = named::collapse();
        let w = unit.whisker_right(&e).unwrap();
        assert_eq!(w, NatTransformation::identity(&compose_functors(&to_b, &e).unwrap()));
    }

    #[test]
    fn whiskering_along_the_collapse_reindexes_components() {
        let (two, p) = (named::arrow(), named::parallel());
        let e = named::collapse();
        let id = Functor::identity(&two);
        let to_b = Functor::constant(&two, &two, two.object("b").unwrap());
        let alpha = &enumerate_nat_transformations(&id, &to_b, Default::default()).unwrap()[0];
        let w = whisker(&e, alpha, Side::Right).unwrap();
        for o in p.object_indices() {
            assert_eq!(w.component(o), alpha.component(e.obj(o)));
        }
        let (a, b) = (two.object("a").unwrap(), two.object("b").unwrap());
        assert_eq!(w.component(p.object("a").unwrap()), two.hom(a, b)[0]);
    }

    #[test]
    fn non_natural_components_are_rejected() {
        let two = named::arrow();
        let id = Functor::identity(&two);
        let a = two.object("a").unwrap();
        let to_a = Functor::constant(&two, &two, a);
        // id ⇒ const_a would need a component b → a.
        assert!(NatTransformation::new(id, to_a, vec![two.identity(a), two.identity(a)]).is_err());
    }
}
