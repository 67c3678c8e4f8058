use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of an object inside a [`FinCategory`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Obj(pub usize);

/// Index of a morphism inside a [`FinCategory`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mor(pub usize);

const NO_COMPOSITE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismInfo {
    pub id: String,
    pub dom: Obj,
    pub cod: Obj,
}

/// Untyped category description, as read from JSON.
///
/// `composition` lists `[g, f, g∘f]` triples; composites with an identity
/// are implied and may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawCategory {
    pub objects: Vec<String>,
    pub morphisms: Vec<RawMorphism>,
    pub identities: BTreeMap<String, String>,
    #[serde(default)]
    pub composition: Vec<[String; 3]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RawMorphism {
    pub id: String,
    pub dom: String,
    pub cod: String,
}

/// A finite category with a fully tabulated composition.
#[derive(Clone)]
pub struct FinCategory {
    objects: Vec<String>,
    morphisms: Vec<MorphismInfo>,
    identities: Vec<Mor>,
    /// `table[g * n + f]` is `g ∘ f`, or `NO_COMPOSITE`.
    table: Vec<u32>,
    homs: Vec<Vec<Mor>>,
    obj_index: HashMap<String, Obj>,
    mor_index: HashMap<String, Mor>,
}

impl PartialEq for FinCategory {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.table == other.table
    }
}

impl Eq for FinCategory {}

impl fmt::Debug for FinCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCategory")
            .field("objects", &self.objects)
            .field(
                "morphisms",
                &self
                    .morphisms
                    .iter()
                    .map(|m| {
                        format!(
                            "{}: {} -> {}",
                            m.id, self.objects[m.dom.0], self.objects[m.cod.0]
                        )
                    })
                    .collect::<Vec<_>>(),
            )
            .finish()
    }
}

/// Validates an untyped description and returns the category, or the first
/// violated law with its witness.
pub fn validate_category(raw: &RawCategory) -> Result<FinCategory> {
    let mut obj_index = HashMap::new();
    for (i, o) in raw.objects.iter().enumerate() {
        if obj_index.insert(o.clone(), Obj(i)).is_some() {
            return Err(Error::DuplicateObject(o.clone()));
        }
    }
    let lookup_obj = |name: &str| {
        obj_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownObject(name.to_string()))
    };
    let mut morphisms = Vec::with_capacity(raw.morphisms.len());
    let mut mor_index = HashMap::new();
    for (i, m) in raw.morphisms.iter().enumerate() {
        if mor_index.insert(m.id.clone(), Mor(i)).is_some() {
            return Err(Error::DuplicateMorphism(m.id.clone()));
        }
        morphisms.push(MorphismInfo {
            id: m.id.clone(),
            dom: lookup_obj(&m.dom)?,
            cod: lookup_obj(&m.cod)?,
        });
    }
    let lookup_mor = |name: &str| {
        mor_index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownMorphism(name.to_string()))
    };

    let mut identities = Vec::with_capacity(raw.objects.len());
    for o in &raw.objects {
        let id = raw
            .identities
            .get(o)
            .ok_or_else(|| Error::MissingIdentity(o.clone()))?;
        let m = lookup_mor(id)?;
        let info = &morphisms[m.0];
        if info.dom != obj_index[o] || info.cod != obj_index[o] {
            return Err(Error::MissingIdentity(o.clone()));
        }
        identities.push(m);
    }
    for (name, _) in raw.identities.iter() {
        lookup_obj(name)?;
    }

    let n = morphisms.len();
    let mut table = vec![NO_COMPOSITE; n * n];
    // Composites with identities are implied; explicit entries override them.
    for (i, m) in morphisms.iter().enumerate() {
        table[identities[m.cod.0].0 * n + i] = i as u32;
        table[i * n + identities[m.dom.0].0] = i as u32;
    }
    let mut explicit = Vec::with_capacity(raw.composition.len());
    for [g, f, r] in &raw.composition {
        let (g, f, r) = (lookup_mor(g)?, lookup_mor(f)?, lookup_mor(r)?);
        table[g.0 * n + f.0] = r.0 as u32;
        explicit.push((g, f, r));
    }

    let cat = FinCategory::assemble(raw.objects.clone(), morphisms, identities, table);
    cat.check_laws(&explicit)?;
    Ok(cat)
}

impl FinCategory {
    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<MorphismInfo>,
        identities: Vec<Mor>,
        table: Vec<u32>,
    ) -> FinCategory {
        let no = objects.len();
        let mut homs = vec![Vec::new(); no * no];
        for (i, m) in morphisms.iter().enumerate() {
            homs[m.dom.0 * no + m.cod.0].push(Mor(i));
        }
        let obj_index = objects
            .iter()
            .enumerate()
            .map(|(i, o)| (o.clone(), Obj(i)))
            .collect();
        let mor_index = morphisms
            .iter()
            .enumerate()
            .map(|(i, m)| (m.id.clone(), Mor(i)))
            .collect();
        FinCategory {
            objects,
            morphisms,
            identities,
            table,
            homs,
            obj_index,
            mor_index,
        }
    }

    /// Builds a category from index-level data produced by a construction
    /// that guarantees the laws (products, quotients, kernels, ...). Identity
    /// and typing laws are still checked; associativity is inherited.
    pub(crate) fn from_parts(
        objects: Vec<String>,
        morphisms: Vec<MorphismInfo>,
        identities: Vec<Mor>,
        compose: impl Fn(Mor, Mor) -> Mor,
    ) -> FinCategory {
        let n = morphisms.len();
        let mut table = vec![NO_COMPOSITE; n * n];
        for g in 0..n {
            for f in 0..n {
                if morphisms[f].cod == morphisms[g].dom {
                    table[g * n + f] = compose(Mor(g), Mor(f)).0 as u32;
                }
            }
        }
        let cat = FinCategory::assemble(objects, morphisms, identities, table);
        debug_assert!(cat.check_identity_and_typing(&[]).is_ok());
        cat
    }

    fn check_identity_and_typing(&self, explicit: &[(Mor, Mor, Mor)]) -> Result<()> {
        let n = self.morphisms.len();
        for i in 0..n {
            let m = Mor(i);
            let info = &self.morphisms[i];
            let left = self.identities[info.cod.0];
            let right = self.identities[info.dom.0];
            for (id, r) in [(left, self.raw_compose(left, m)), (right, self.raw_compose(m, right))] {
                if r != Some(m) {
                    return Err(Error::IdentityLawViolation {
                        identity: self.morphisms[id.0].id.clone(),
                        morphism: info.id.clone(),
                        composite: r
                            .map(|r| self.morphisms[r.0].id.clone())
                            .unwrap_or_else(|| "nothing".into()),
                    });
                }
            }
        }
        for &(g, f, _) in explicit {
            if self.morphisms[f.0].cod != self.morphisms[g.0].dom {
                return Err(Error::IllTypedComposition {
                    g: self.morphisms[g.0].id.clone(),
                    f: self.morphisms[f.0].id.clone(),
                    reason: "cod(f) differs from dom(g)".into(),
                });
            }
        }
        for g in 0..n {
            for f in 0..n {
                let (gi, fi) = (&self.morphisms[g], &self.morphisms[f]);
                if fi.cod != gi.dom {
                    continue;
                }
                match self.raw_compose(Mor(g), Mor(f)) {
                    None => {
                        return Err(Error::MissingComposite {
                            g: gi.id.clone(),
                            f: fi.id.clone(),
                        })
                    }
                    Some(r) => {
                        let ri = &self.morphisms[r.0];
                        if ri.dom != fi.dom || ri.cod != gi.cod {
                            return Err(Error::IllTypedComposition {
                                g: gi.id.clone(),
                                f: fi.id.clone(),
                                reason: format!(
                                    "result {} is not a morphism {} -> {}",
                                    ri.id, self.objects[fi.dom.0], self.objects[gi.cod.0]
                                ),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    fn check_laws(&self, explicit: &[(Mor, Mor, Mor)]) -> Result<()> {
        self.check_identity_and_typing(explicit)?;
        for f in self.morphism_indices() {
            for g in self.morphisms_out_of(self.cod(f)) {
                let gf = self.compose(g, f);
                for h in self.morphisms_out_of(self.cod(g)) {
                    let lhs = self.compose(h, gf);
                    let rhs = self.compose(self.compose(h, g), f);
                    if lhs != rhs {
                        return Err(Error::AssociativityViolation {
                            h: self.morphism_id(h).to_string(),
                            g: self.morphism_id(g).to_string(),
                            f: self.morphism_id(f).to_string(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Re-runs every law check. Always succeeds on a constructed value.
    pub fn revalidate(&self) -> Result<()> {
        self.check_laws(&[])
    }

    fn raw_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        let r = self.table[g.0 * self.morphisms.len() + f.0];
        (r != NO_COMPOSITE).then_some(Mor(r as usize))
    }

    pub fn object_count(&self) -> usize {
        self.objects.len()
    }

    pub fn morphism_count(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_indices(&self) -> impl Iterator<Item = Obj> + '_ {
        (0..self.objects.len()).map(Obj)
    }

    pub fn morphism_indices(&self) -> impl Iterator<Item = Mor> + '_ {
        (0..self.morphisms.len()).map(Mor)
    }

    pub fn object_id(&self, o: Obj) -> &str {
        &self.objects[o.0]
    }

    pub fn morphism_id(&self, m: Mor) -> &str {
        &self.morphisms[m.0].id
    }

    pub fn object_ids(&self) -> &[String] {
        &self.objects
    }

    pub fn morphism_info(&self, m: Mor) -> &MorphismInfo {
        &self.morphisms[m.0]
    }

    pub fn find_object(&self, id: &str) -> Option<Obj> {
        self.obj_index.get(id).copied()
    }

    pub fn find_morphism(&self, id: &str) -> Option<Mor> {
        self.mor_index.get(id).copied()
    }

    pub fn object(&self, id: &str) -> Result<Obj> {
        self.find_object(id)
            .ok_or_else(|| Error::UnknownObject(id.to_string()))
    }

    pub fn morphism(&self, id: &str) -> Result<Mor> {
        self.find_morphism(id)
            .ok_or_else(|| Error::UnknownMorphism(id.to_string()))
    }

    pub fn dom(&self, m: Mor) -> Obj {
        self.morphisms[m.0].dom
    }

    pub fn cod(&self, m: Mor) -> Obj {
        self.morphisms[m.0].cod
    }

    pub fn identity(&self, o: Obj) -> Mor {
        self.identities[o.0]
    }

    pub fn is_identity(&self, m: Mor) -> bool {
        self.identities[self.dom(m).0] == m
    }

    /// `g ∘ f`; panics when the pair is not composable.
    pub fn compose(&self, g: Mor, f: Mor) -> Mor {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "morphisms {} and {} are not composable",
                self.morphism_id(g),
                self.morphism_id(f)
            )
        })
    }

    pub fn try_compose(&self, g: Mor, f: Mor) -> Option<Mor> {
        if self.cod(f) != self.dom(g) {
            return None;
        }
        self.raw_compose(g, f)
    }

    pub fn hom(&self, a: Obj, b: Obj) -> &[Mor] {
        &self.homs[a.0 * self.objects.len() + b.0]
    }

    pub fn morphisms_out_of(&self, a: Obj) -> impl Iterator<Item = Mor> + '_ {
        self.morphisms
            .iter()
            .enumerate()
            .filter(move |(_, m)| m.dom == a)
            .map(|(i, _)| Mor(i))
    }

    pub fn morphisms_into(&self, b: Obj) -> impl Iterator<Item = Mor> + '_ {
        self.morphisms
            .iter()
            .enumerate()
            .filter(move |(_, m)| m.cod == b)
            .map(|(i, _)| Mor(i))
    }

    pub fn parallel(&self, u: Mor, v: Mor) -> bool {
        self.dom(u) == self.dom(v) && self.cod(u) == self.cod(v)
    }

    pub fn inverse(&self, m: Mor) -> Option<Mor> {
        let (a, b) = (self.dom(m), self.cod(m));
        self.hom(b, a).iter().copied().find(|&n| {
            self.compose(n, m) == self.identity(a) && self.compose(m, n) == self.identity(b)
        })
    }

    pub fn is_discrete(&self) -> bool {
        self.morphisms.len() == self.objects.len()
    }

    /// All composable pairs `(g, f)` with `cod f = dom g`.
    pub fn composable_pairs(&self) -> Vec<(Mor, Mor)> {
        let mut out = Vec::new();
        for f in self.morphism_indices() {
            for g in self.morphisms_out_of(self.cod(f)) {
                out.push((g, f));
            }
        }
        out
    }

    pub fn to_raw(&self) -> RawCategory {
        let mut composition = Vec::new();
        for (g, f) in self.composable_pairs() {
            if self.is_identity(g) || self.is_identity(f) {
                continue;
            }
            composition.push([
                self.morphism_id(g).to_string(),
                self.morphism_id(f).to_string(),
                self.morphism_id(self.compose(g, f)).to_string(),
            ]);
        }
        RawCategory {
            objects: self.objects.clone(),
            morphisms: self
                .morphisms
                .iter()
                .map(|m| RawMorphism {
                    id: m.id.clone(),
                    dom: self.objects[m.dom.0].clone(),
                    cod: self.objects[m.cod.0].clone(),
                })
                .collect(),
            identities: self
                .objects
                .iter()
                .zip(&self.identities)
                .map(|(o, m)| (o.clone(), self.morphisms[m.0].id.clone()))
                .collect(),
            composition,
        }
    }
}

/// Convenience builder used by tests and the bundled constructions.
#[derive(Default, Clone, Debug)]
pub struct CategoryBuilder {
    raw: RawCategory,
}

impl CategoryBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds an object together with an identity named `id_<object>`.
    pub fn object(mut self, name: &str) -> Self {
        let id = format!("id_{name}");
        self.raw.objects.push(name.to_string());
        self.raw.morphisms.push(RawMorphism {
            id: id.clone(),
            dom: name.to_string(),
            cod: name.to_string(),
        });
        self.raw.identities.insert(name.to_string(), id);
        self
    }

    pub fn morphism(mut self, id: &str, dom: &str, cod: &str) -> Self {
        self.raw.morphisms.push(RawMorphism {
            id: id.to_string(),
            dom: dom.to_string(),
            cod: cod.to_string(),
        });
        self
    }

    pub fn compose(mut self, g: &str, f: &str, result: &str) -> Self {
        self.raw
            .composition
            .push([g.to_string(), f.to_string(), result.to_string()]);
        self
    }

    pub fn raw(self) -> RawCategory {
        self.raw
    }

    pub fn build(self) -> Result<FinCategory> {
        validate_category(&self.raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow() -> CategoryBuilder {
        CategoryBuilder::new().object("a").object("b").morphism("u", "a", "b")
    }

    #[test]
    fn terminal_category_is_valid() {
        let one = CategoryBuilder::new().object("*").build().unwrap();
        assert_eq!(one.object_count(), 1);
        assert_eq!(one.morphism_count(), 1);
    }

    #[test]
    fn arrow_category_is_valid() {
        let two = arrow().build().unwrap();
        let (a, b) = (two.object("a").unwrap(), two.object("b").unwrap());
        assert_eq!(two.hom(a, b).len(), 1);
        assert!(two.hom(b, a).is_empty());
    }

    #[test]
    fn overriding_an_identity_composite_is_an_identity_law_violation() {
        let err = arrow().compose("id_b", "u", "id_b").build().unwrap_err();
        assert!(matches!(err, Error::IdentityLawViolation { .. }), "{err:?}");
    }

    #[test]
    fn missing_identity_is_reported() {
        let mut raw = arrow().raw();
        raw.identities.remove("b");
        assert_eq!(
            validate_category(&raw).unwrap_err(),
            Error::MissingIdentity("b".into())
        );
    }

    #[test]
    fn ill_typed_entry_is_reported() {
        // u ∘ u is not composable in `2`.
        let err = arrow().compose("u", "u", "u").build().unwrap_err();
        assert!(matches!(err, Error::IllTypedComposition { .. }), "{err:?}");
    }

    #[test]
    fn missing_composite_is_reported() {
        let err = CategoryBuilder::new()
            .object("x")
            .morphism("e", "x", "x")
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::MissingComposite { .. }), "{err:?}");
    }

    #[test]
    fn associativity_failure_is_found() {
        // (b∘a)∘b = a∘b = b but b∘(a∘b) = b∘b = a.
        let err = CategoryBuilder::new()
            .object("x")
            .morphism("a", "x", "x")
            .morphism("b", "x", "x")
            .compose("a", "a", "a")
            .compose("a", "b", "b")
            .compose("b", "a", "a")
            .compose("b", "b", "a")
            .build()
            .unwrap_err();
        assert!(matches!(err, Error::AssociativityViolation { .. }), "{err:?}");
    }

    #[test]
    fn raw_round_trip_is_idempotent() {
        let z2 = CategoryBuilder::new()
            .object("*")
            .morphism("s", "*", "*")
            .compose("s", "s", "id_*")
            .build()
            .unwrap();
        let again = validate_category(&z2.to_raw()).unwrap();
        assert_eq!(z2, again);
        again.revalidate().unwrap();
        assert_eq!(z2.inverse(z2.morphism("s").unwrap()), z2.find_morphism("s"));
    }
}
