use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::category::{FinCategory, Mor, Obj};
use crate::error::{Error, Result};

/// Structural equality with a pointer fast path.
pub fn same_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// A functor between finite categories, stored as its object and morphism maps.
#[derive(Clone)]
pub struct Functor {
    source: Arc<FinCategory>,
    target: Arc<FinCategory>,
    on_objects: Vec<Obj>,
    on_morphisms: Vec<Mor>,
}

impl PartialEq for Functor {
    fn eq(&self, other: &Self) -> bool {
        self.on_objects == other.on_objects
            && self.on_morphisms == other.on_morphisms
            && same_category(&self.source, &other.source)
            && same_category(&self.target, &other.target)
    }
}

impl Eq for Functor {}

impl fmt::Debug for Functor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let objects: Vec<String> = self
            .source
            .object_indices()
            .map(|o| {
                format!(
                    "{}↦{}",
                    self.source.object_id(o),
                    self.target.object_id(self.obj(o))
                )
            })
            .collect();
        let morphisms: Vec<String> = self
            .source
            .morphism_indices()
            .filter(|&m| !self.source.is_identity(m))
            .map(|m| {
                format!(
                    "{}↦{}",
                    self.source.morphism_id(m),
                    self.target.morphism_id(self.mor(m))
                )
            })
            .collect();
        write!(f, "Functor[{}; {}]", objects.join(", "), morphisms.join(", "))
    }
}

/// Functor as read from JSON, with category references still unresolved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawFunctorMaps {
    pub on_objects: BTreeMap<String, String>,
    #[serde(default)]
    pub on_morphisms: BTreeMap<String, String>,
}

impl Functor {
    /// Validates the maps: dom/cod, identities and every composite are preserved.
    pub fn new(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        on_objects: Vec<Obj>,
        on_morphisms: Vec<Mor>,
    ) -> Result<Functor> {
        if on_objects.len() != source.object_count() || on_morphisms.len() != source.morphism_count()
        {
            return Err(Error::InvalidFunctor("maps do not cover the source".into()));
        }
        let f = Functor {
            source,
            target,
            on_objects,
            on_morphisms,
        };
        f.check()?;
        Ok(f)
    }

    pub(crate) fn new_unchecked(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        on_objects: Vec<Obj>,
        on_morphisms: Vec<Mor>,
    ) -> Functor {
        let f = Functor {
            source,
            target,
            on_objects,
            on_morphisms,
        };
        debug_assert!(f.check().is_ok(), "{:?}", f.check());
        f
    }

    fn check(&self) -> Result<()> {
        let (s, t) = (&*self.source, &*self.target);
        for &o in &self.on_objects {
            if o.0 >= t.object_count() {
                return Err(Error::InvalidFunctor("object image out of range".into()));
            }
        }
        for m in s.morphism_indices() {
            let fm = self.on_morphisms[m.0];
            if fm.0 >= t.morphism_count() {
                return Err(Error::InvalidFunctor("morphism image out of range".into()));
            }
            if t.dom(fm) != self.obj(s.dom(m)) || t.cod(fm) != self.obj(s.cod(m)) {
                return Err(Error::InvalidFunctor(format!(
                    "{} ↦ {} does not preserve dom/cod",
                    s.morphism_id(m),
                    t.morphism_id(fm)
                )));
            }
        }
        for o in s.object_indices() {
            if self.mor(s.identity(o)) != t.identity(self.obj(o)) {
                return Err(Error::InvalidFunctor(format!(
                    "identity of {} is not preserved",
                    s.object_id(o)
                )));
            }
        }
        for (g, f) in s.composable_pairs() {
            if self.mor(s.compose(g, f)) != t.compose(self.mor(g), self.mor(f)) {
                return Err(Error::InvalidFunctor(format!(
                    "composite {} ∘ {} is not preserved",
                    s.morphism_id(g),
                    s.morphism_id(f)
                )));
            }
        }
        Ok(())
    }

    pub fn from_raw(
        source: Arc<FinCategory>,
        target: Arc<FinCategory>,
        raw: &RawFunctorMaps,
    ) -> Result<Functor> {
        let mut on_objects = Vec::with_capacity(source.object_count());
        for o in source.object_ids() {
            let img = raw
                .on_objects
                .get(o)
                .ok_or_else(|| Error::InvalidFunctor(format!("object {o} is not mapped")))?;
            on_objects.push(target.object(img)?);
        }
        let mut on_morphisms = Vec::with_capacity(source.morphism_count());
        for m in source.morphism_indices() {
            let id = source.morphism_id(m);
            let img = match raw.on_morphisms.get(id) {
                Some(img) => target.morphism(img)?,
                // Identities may be omitted; they go to identities.
                None if source.is_identity(m) => target.identity(on_objects[source.dom(m).0]),
                // Morphisms between objects with singleton image hom-sets
                // are forced and may be omitted as well.
                None => {
                    let hom = target.hom(on_objects[source.dom(m).0], on_objects[source.cod(m).0]);
                    match hom {
                        [only] => *only,
                        _ => {
                            return Err(Error::InvalidFunctor(format!(
                                "morphism {id} is not mapped"
                            )))
                        }
                    }
                }
            };
            on_morphisms.push(img);
        }
        for k in raw.on_objects.keys() {
            source.object(k)?;
        }
        for k in raw.on_morphisms.keys() {
            source.morphism(k)?;
        }
        Functor::new(source, target, on_objects, on_morphisms)
    }

    pub fn to_raw(&self) -> RawFunctorMaps {
        RawFunctorMaps {
            on_objects: self
                .source
                .object_indices()
                .map(|o| {
                    (
                        self.source.object_id(o).to_string(),
                        self.target.object_id(self.obj(o)).to_string(),
                    )
                })
                .collect(),
            on_morphisms: self
                .source
                .morphism_indices()
                .map(|m| {
                    (
                        self.source.morphism_id(m).to_string(),
                        self.target.morphism_id(self.mor(m)).to_string(),
                    )
                })
                .collect(),
        }
    }

    pub fn identity(cat: &Arc<FinCategory>) -> Functor {
        Functor {
            source: cat.clone(),
            target: cat.clone(),
            on_objects: cat.object_indices().collect(),
            on_morphisms: cat.morphism_indices().collect(),
        }
    }

    /// The constant functor at `object`.
    pub fn constant(source: &Arc<FinCategory>, target: &Arc<FinCategory>, object: Obj) -> Functor {
        Functor {
            source: source.clone(),
            target: target.clone(),
            on_objects: vec![object; source.object_count()],
            on_morphisms: vec![target.identity(object); source.morphism_count()],
        }
    }

    pub fn source(&self) -> &Arc<FinCategory> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCategory> {
        &self.target
    }

    pub fn obj(&self, o: Obj) -> Obj {
        self.on_objects[o.0]
    }

    pub fn mor(&self, m: Mor) -> Mor {
        self.on_morphisms[m.0]
    }

    pub fn object_map(&self) -> &[Obj] {
        &self.on_objects
    }

    pub fn morphism_map(&self) -> &[Mor] {
        &self.on_morphisms
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Functor) -> Result<Functor> {
        compose_functors(self, first)
    }

    pub fn is_identity(&self) -> bool {
        same_category(&self.source, &self.target)
            && self.on_objects.iter().enumerate().all(|(i, o)| o.0 == i)
            && self.on_morphisms.iter().enumerate().all(|(i, m)| m.0 == i)
    }

    /// Bijective on objects and on morphisms.
    pub fn is_isomorphism(&self) -> bool {
        let c = super::classify(self);
        c.bo && c.ff
    }

    /// Inverse of an isomorphism of categories.
    pub fn inverse(&self) -> Option<Functor> {
        if !self.is_isomorphism() {
            return None;
        }
        let mut on_objects = vec![Obj(0); self.target.object_count()];
        for (i, o) in self.on_objects.iter().enumerate() {
            on_objects[o.0] = Obj(i);
        }
        let mut on_morphisms = vec![Mor(0); self.target.morphism_count()];
        for (i, m) in self.on_morphisms.iter().enumerate() {
            on_morphisms[m.0] = Mor(i);
        }
        if self.on_morphisms.len() != self.target.morphism_count() {
            return None;
        }
        Some(Functor::new_unchecked(
            self.target.clone(),
            self.source.clone(),
            on_objects,
            on_morphisms,
        ))
    }
}

/// `g ∘ f`, defined when the target of `f` is the source of `g`.
pub fn compose_functors(g: &Functor, f: &Functor) -> Result<Functor> {
    if !same_category(&f.target, &g.source) {
        return Err(Error::BoundaryMismatch(
            "target of the first functor is not the source of the second".into(),
        ));
    }
    Ok(Functor {
        source: f.source.clone(),
        target: g.target.clone(),
        on_objects: f.on_objects.iter().map(|&o| g.obj(o)).collect(),
        on_morphisms: f.on_morphisms.iter().map(|&m| g.mor(m)).collect(),
    })
}
