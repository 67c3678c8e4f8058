//! Congruences on finite categories and the quotients they induce.
//!
//! A congruence is stored as a representative map: every morphism points at
//! the lexicographically least id of its class. Closure is computed with a
//! union-find and a saturation loop that re-applies one-sided composition
//! contexts until nothing merges.

use std::sync::Arc;

use super::category::{FinCategory, MorphismInfo, Mor};
use super::functor::{same_category, Functor};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, i: usize) -> usize {
        let mut root = i;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = i;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Returns true when two distinct classes were merged.
    pub(crate) fn union(&mut self, i: usize, j: usize) -> bool {
        let (ri, rj) = (self.find(i), self.find(j));
        if ri == rj {
            return false;
        }
        self.parent[ri] = rj;
        true
    }
}

/// An equivalence relation on parallel morphisms, closed under composition.
#[derive(Clone, Debug)]
pub struct Congruence {
    base: Arc<FinCategory>,
    rep: Vec<Mor>,
}

impl PartialEq for Congruence {
    fn eq(&self, other: &Self) -> bool {
        self.rep == other.rep && super::same_category(&self.base, &other.base)
    }
}

impl Eq for Congruence {}

impl Congruence {
    pub fn discrete(base: &Arc<FinCategory>) -> Congruence {
        Congruence {
            base: base.clone(),
            rep: base.morphism_indices().collect(),
        }
    }

    /// Builds a congruence from a union-find over the morphisms. Callers are
    /// responsible for closure; `validate` checks it.
    pub(crate) fn from_union_find(base: &Arc<FinCategory>, uf: &mut UnionFind) -> Congruence {
        let n = base.morphism_count();
        let mut least: Vec<Option<Mor>> = vec![None; n];
        for m in base.morphism_indices() {
            let r = uf.find(m.0);
            match least[r] {
                Some(l) if base.morphism_id(l) <= base.morphism_id(m) => {}
                _ => least[r] = Some(m),
            }
        }
        let rep = (0..n)
            .map(|m| least[uf.find(m)].expect("every root has a member"))
            .collect();
        Congruence {
            base: base.clone(),
            rep,
        }
    }

    /// Builds a congruence from a representative-per-morphism labelling
    /// (any labels; classes are the fibres). Fails if it relates
    /// non-parallel morphisms or is not closed under composition.
    pub fn from_labels(base: &Arc<FinCategory>, labels: &[usize]) -> Result<Congruence> {
        let n = base.morphism_count();
        if labels.len() != n {
            return Err(Error::InvalidCongruence("one label per morphism is required".into()));
        }
        let mut uf = UnionFind::new(n);
        let mut first: std::collections::HashMap<usize, usize> = Default::default();
        for (m, &l) in labels.iter().enumerate() {
            if let Some(&f) = first.get(&l) {
                uf.union(f, m);
            } else {
                first.insert(l, m);
            }
        }
        let c = Congruence::from_union_find(base, &mut uf);
        c.validate()?;
        Ok(c)
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    /// Canonical representative (least id) of the class of `m`.
    pub fn representative(&self, m: Mor) -> Mor {
        self.rep[m.0]
    }

    pub fn related(&self, u: Mor, v: Mor) -> bool {
        self.rep[u.0] == self.rep[v.0]
    }

    pub fn class_count(&self) -> usize {
        self.rep.iter().enumerate().filter(|(i, r)| r.0 == *i).count()
    }

    pub fn is_discrete(&self) -> bool {
        self.class_count() == self.base.morphism_count()
    }

    /// Classes in order of their representatives' indices; members ascending.
    pub fn classes(&self) -> Vec<Vec<Mor>> {
        let mut out: Vec<Vec<Mor>> = Vec::new();
        let mut pos: Vec<Option<usize>> = vec![None; self.rep.len()];
        for m in self.base.morphism_indices() {
            let r = self.rep[m.0].0;
            let slot = *pos[r].get_or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[slot].push(m);
        }
        out
    }

    /// Classes with more than one member, as ids, for reports.
    pub fn describe(&self) -> Vec<Vec<String>> {
        self.classes()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                c.into_iter()
                    .map(|m| self.base.morphism_id(m).to_string())
                    .collect()
            })
            .collect()
    }

    /// Checks parallelism of classes and closure under composition.
    pub fn validate(&self) -> Result<()> {
        let cat = &self.base;
        for m in cat.morphism_indices() {
            let r = self.rep[m.0];
            if !cat.parallel(m, r) {
                return Err(Error::InvalidCongruence(format!(
                    "{} and {} are related but not parallel",
                    cat.morphism_id(m),
                    cat.morphism_id(r)
                )));
            }
        }
        if let Some((u, v)) = self.one_round(&mut UnionFind::new(0), false) {
            return Err(Error::InvalidCongruence(format!(
                "not closed under composition: {} ~ {} is forced",
                cat.morphism_id(u),
                cat.morphism_id(v)
            )));
        }
        Ok(())
    }

    /// One saturation round. With `merge`, applies every forced union to `uf`
    /// and returns the last forced pair; otherwise returns the first pair the
    /// current relation forces but does not contain.
    fn one_round(&self, uf: &mut UnionFind, merge: bool) -> Option<(Mor, Mor)> {
        let cat = &self.base;
        let mut forced = None;
        for u in cat.morphism_indices() {
            let r = self.rep[u.0];
            if r == u {
                continue;
            }
            let pre = cat.morphisms_into(cat.dom(u)).map(|p| (cat.compose(u, p), cat.compose(r, p)));
            let post = cat.morphisms_out_of(cat.cod(u)).map(|q| (cat.compose(q, u), cat.compose(q, r)));
            for (x, y) in pre.chain(post) {
                if self.related(x, y) {
                    continue;
                }
                if !merge {
                    return Some((x, y));
                }
                uf.union(x.0, y.0);
                forced = Some((x, y));
            }
        }
        forced
    }

    /// True when one more saturation round changes nothing.
    pub fn is_fixpoint(&self) -> bool {
        self.one_round(&mut UnionFind::new(0), false).is_none()
    }
}

/// Smallest congruence containing the generating pairs.
pub fn congruence_closure(base: &Arc<FinCategory>, generators: &[(Mor, Mor)]) -> Result<Congruence> {
    let mut uf = UnionFind::new(base.morphism_count());
    for &(u, v) in generators {
        if !base.parallel(u, v) {
            return Err(Error::NonParallelGenerator(
                base.morphism_id(u).to_string(),
                base.morphism_id(v).to_string(),
            ));
        }
        uf.union(u.0, v.0);
    }
    Ok(saturate(base, uf))
}

pub(crate) fn saturate(base: &Arc<FinCategory>, mut uf: UnionFind) -> Congruence {
    loop {
        let current = Congruence::from_union_find(base, &mut uf);
        if current.one_round(&mut uf, true).is_none() {
            return current;
        }
    }
}

/// The quotient category and its projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub category: Arc<FinCategory>,
    pub projection: Functor,
}

/// Objects are unchanged; morphisms are classes, named by their representatives.
pub fn quotient_by_congruence(cong: &Congruence) -> Quotient {
    let base = &cong.base;
    let mut index_of = vec![usize::MAX; base.morphism_count()];
    let mut morphisms = Vec::new();
    let mut members = Vec::new();
    for m in base.morphism_indices() {
        let r = cong.representative(m);
        if index_of[r.0] == usize::MAX {
            index_of[r.0] = morphisms.len();
            morphisms.push(MorphismInfo {
                id: base.morphism_id(r).to_string(),
                dom: base.dom(r),
                cod: base.cod(r),
            });
            members.push(r);
        }
    }
    let class_of = |m: Mor| Mor(index_of[cong.representative(m).0]);
    let identities = base.object_indices().map(|o| class_of(base.identity(o))).collect();
    let category = Arc::new(FinCategory::from_parts(
        base.object_ids().to_vec(),
        morphisms,
        identities,
        |g, f| class_of(base.compose(members[g.0], members[f.0])),
    ));
    let projection = Functor::new_unchecked(
        base.clone(),
        category.clone(),
        base.object_indices().collect(),
        base.morphism_indices().map(class_of).collect(),
    );
    Quotient {
        category,
        projection,
    }
}

impl Quotient {
    /// The functor `g` with `g ∘ projection = f`, defined when `f` is
    /// constant on every class.
    pub fn induced(&self, f: &Functor) -> Result<Functor> {
        let base = self.projection.source();
        if !same_category(base, f.source()) {
            return Err(Error::BoundaryMismatch(
                "functor does not start at the quotiented category".into(),
            ));
        }
        let mut on_morphisms: Vec<Option<Mor>> = vec![None; self.category.morphism_count()];
        for m in base.morphism_indices() {
            let k = self.projection.mor(m).0;
            match on_morphisms[k] {
                Some(img) if img != f.mor(m) => {
                    return Err(Error::InvalidFunctor(format!(
                        "{} is not constant on the class of {}",
                        f.target().morphism_id(f.mor(m)),
                        base.morphism_id(m)
                    )))
                }
                _ => on_morphisms[k] = Some(f.mor(m)),
            }
        }
        Ok(Functor::new_unchecked(
            self.category.clone(),
            f.target().clone(),
            f.object_map().to_vec(),
            on_morphisms.into_iter().map(|m| m.expect("projection is full")).collect(),
        ))
    }
}
