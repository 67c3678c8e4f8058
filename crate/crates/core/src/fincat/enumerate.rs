//! Exhaustive enumeration of functors and natural transformations.
//!
//! Every search runs against an explicit candidate budget and fails with
//! `SizeLimitExceeded` instead of returning a truncated list.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use super::category::{FinCategory, Mor, Obj};
use super::functor::Functor;
use super::nat::NatTransformation;
use crate::error::{Error, Result};

/// Upper bound on the number of candidate assignments a search may try.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimit(pub u64);

impl Default for SearchLimit {
    fn default() -> Self {
        SearchLimit(1_000_000)
    }
}

pub(crate) struct Budget<'a> {
    limit: u64,
    used: u64,
    context: &'a str,
}

impl<'a> Budget<'a> {
    pub(crate) fn new(limit: SearchLimit, context: &'a str) -> Self {
        Budget {
            limit: limit.0,
            used: 0,
            context,
        }
    }

    pub(crate) fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            return Err(Error::SizeLimitExceeded {
                limit: self.limit,
                context: self.context.to_string(),
            });
        }
        Ok(())
    }
}

/// All functors `a → b`.
pub fn enumerate_functors(
    a: &Arc<FinCategory>,
    b: &Arc<FinCategory>,
    limit: SearchLimit,
) -> Result<Vec<Functor>> {
    let mut out = Vec::new();
    search_functors(a, b, limit, |_, _| true, |_, _| true, |f| {
        out.push(f);
        true
    })?;
    Ok(out)
}

/// Backtracking functor search with per-object and per-morphism candidate
/// filters. `visit` returns `false` to stop early.
pub(crate) fn search_functors(
    a: &Arc<FinCategory>,
    b: &Arc<FinCategory>,
    limit: SearchLimit,
    object_ok: impl Fn(Obj, Obj) -> bool,
    morphism_ok: impl Fn(Mor, Mor) -> bool,
    mut visit: impl FnMut(Functor) -> bool,
) -> Result<()> {
    let mut budget = Budget::new(limit, "enumerating functors");
    let free: Vec<Mor> = a.morphism_indices().filter(|&m| !a.is_identity(m)).collect();
    // position of each morphism in the assignment order; identities are "assigned" up front
    let mut order = vec![None; a.morphism_count()];
    for (i, &m) in free.iter().enumerate() {
        order[m.0] = Some(i);
    }
    // constraints (g, f, g∘f) checked once the last of the three is assigned
    let mut checks: Vec<Vec<(Mor, Mor, Mor)>> = vec![Vec::new(); free.len()];
    for (g, f) in a.composable_pairs() {
        let r = a.compose(g, f);
        let last = [g, f, r].iter().filter_map(|m| order[m.0]).max();
        if let Some(k) = last {
            checks[k].push((g, f, r));
        }
    }

    struct State<'s> {
        a: &'s FinCategory,
        b: &'s FinCategory,
        objects: Vec<Obj>,
        morphisms: Vec<Mor>,
    }

    fn assign_objects<'s>(
        st: &mut State<'s>,
        i: usize,
        budget: &mut Budget,
        object_ok: &dyn Fn(Obj, Obj) -> bool,
        rest: &mut dyn FnMut(&mut State<'s>, &mut Budget) -> Result<bool>,
    ) -> Result<bool> {
        if i == st.a.object_count() {
            return rest(st, budget);
        }
        for t in st.b.object_indices() {
            budget.tick()?;
            if !object_ok(Obj(i), t) {
                continue;
            }
            st.objects[i] = t;
            if !assign_objects(st, i + 1, budget, object_ok, rest)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    let mut state = State {
        a,
        b,
        objects: vec![Obj(0); a.object_count()],
        morphisms: vec![Mor(0); a.morphism_count()],
    };

    let mut assign_morphisms = |st: &mut State, budget: &mut Budget| -> Result<bool> {
        for o in st.a.object_indices() {
            let id = st.a.identity(o);
            st.morphisms[id.0] = st.b.identity(st.objects[o.0]);
            if !morphism_ok(id, st.morphisms[id.0]) {
                return Ok(true);
            }
        }
        fn go(
            st: &mut State,
            k: usize,
            free: &[Mor],
            checks: &[Vec<(Mor, Mor, Mor)>],
            budget: &mut Budget,
            morphism_ok: &dyn Fn(Mor, Mor) -> bool,
            visit: &mut dyn FnMut(Functor) -> bool,
            source: &Arc<FinCategory>,
            target: &Arc<FinCategory>,
        ) -> Result<bool> {
            if k == free.len() {
                let f = Functor::new_unchecked(
                    source.clone(),
                    target.clone(),
                    st.objects.clone(),
                    st.morphisms.clone(),
                );
                return Ok(visit(f));
            }
            let m = free[k];
            let (d, c) = (st.objects[st.a.dom(m).0], st.objects[st.a.cod(m).0]);
            for &img in st.b.hom(d, c) {
                budget.tick()?;
                if !morphism_ok(m, img) {
                    continue;
                }
                st.morphisms[m.0] = img;
                let ok = checks[k].iter().all(|&(g, f, r)| {
                    st.b.compose(st.morphisms[g.0], st.morphisms[f.0]) == st.morphisms[r.0]
                });
                if ok
                    && !go(
                        st,
                        k + 1,
                        free,
                        checks,
                        budget,
                        morphism_ok,
                        visit,
                        source,
                        target,
                    )?
                {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        go(
            st,
            0,
            &free,
            &checks,
            budget,
            &morphism_ok,
            &mut visit,
            a,
            b,
        )
    };
    assign_objects(&mut state, 0, &mut budget, &object_ok, &mut assign_morphisms)?;
    Ok(())
}

/// Some isomorphism `a → b`, if the two are isomorphic.
pub fn find_isomorphism(
    a: &Arc<FinCategory>,
    b: &Arc<FinCategory>,
    limit: SearchLimit,
) -> Result<Option<Functor>> {
    if a.object_count() != b.object_count() || a.morphism_count() != b.morphism_count() {
        return Ok(None);
    }
    let mut found = None;
    search_functors(a, b, limit, |_, _| true, |_, _| true, |f| {
        if f.is_isomorphism() {
            found = Some(f);
            return false;
        }
        true
    })?;
    Ok(found)
}

/// All natural transformations `f ⇒ g`.
pub fn enumerate_nat_transformations(
    f: &Functor,
    g: &Functor,
    limit: SearchLimit,
) -> Result<Vec<NatTransformation>> {
    if !super::same_category(f.source(), g.source()) || !super::same_category(f.target(), g.target())
    {
        return Err(Error::BoundaryMismatch("functors are not parallel".into()));
    }
    let (s, t) = (f.source().clone(), f.target().clone());
    let mut budget = Budget::new(limit, "enumerating natural transformations");
    let n = s.object_count();
    let mut checks: Vec<Vec<Mor>> = vec![Vec::new(); n];
    for m in s.morphism_indices() {
        if s.is_identity(m) {
            continue;
        }
        checks[s.dom(m).0.max(s.cod(m).0)].push(m);
    }
    let mut out = Vec::new();
    let mut comps = vec![Mor(0); n];

    #[allow(clippy::too_many_arguments)]
    fn go(
        k: usize,
        s: &FinCategory,
        t: &FinCategory,
        f: &Functor,
        g: &Functor,
        checks: &[Vec<Mor>],
        comps: &mut Vec<Mor>,
        budget: &mut Budget,
        out: &mut Vec<NatTransformation>,
    ) -> Result<()> {
        if k == s.object_count() {
            out.push(NatTransformation::new_unchecked(f.clone(), g.clone(), comps.clone()));
            return Ok(());
        }
        for &c in t.hom(f.obj(Obj(k)), g.obj(Obj(k))) {
            budget.tick()?;
            comps[k] = c;
            let natural = checks[k].iter().all(|&m| {
                let (a, b) = (s.dom(m), s.cod(m));
                t.compose(g.mor(m), comps[a.0]) == t.compose(comps[b.0], f.mor(m))
            });
            if natural {
                go(k + 1, s, t, f, g, checks, comps, budget, out)?;
            }
        }
        Ok(())
    }
    go(0, &s, &t, f, g, &checks, &mut comps, &mut budget, &mut out)?;
    Ok(out)
}

/// Source of functor and 2-cell lists for the exhaustive checkers.
pub trait Enumerator: Sync {
    fn limit(&self) -> SearchLimit;
    fn functors(&self, a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> Result<Arc<Vec<Functor>>>;
    fn nats(&self, f: &Functor, g: &Functor) -> Result<Arc<Vec<NatTransformation>>>;
}

/// Enumerates afresh on every call.
#[derive(Clone, Copy, Debug, Default)]
pub struct Fresh(pub SearchLimit);

impl Enumerator for Fresh {
    fn limit(&self) -> SearchLimit {
        self.0
    }

    fn functors(&self, a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> Result<Arc<Vec<Functor>>> {
        enumerate_functors(a, b, self.0).map(Arc::new)
    }

    fn nats(&self, f: &Functor, g: &Functor) -> Result<Arc<Vec<NatTransformation>>> {
        enumerate_nat_transformations(f, g, self.0).map(Arc::new)
    }
}

type CatKey = (usize, usize);
type NatKey = (usize, usize, Vec<Obj>, Vec<Mor>, Vec<Obj>, Vec<Mor>);

/// Memoising enumerator keyed by category identity (pointer). Entries keep
/// their categories alive so keys are never reused.
#[derive(Default)]
pub struct Cached {
    limit: SearchLimit,
    functors: Mutex<HashMap<CatKey, (Arc<FinCategory>, Arc<FinCategory>, Arc<Vec<Functor>>)>>,
    nats: Mutex<HashMap<NatKey, (Arc<FinCategory>, Arc<FinCategory>, Arc<Vec<NatTransformation>>)>>,
}

impl Cached {
    pub fn new(limit: SearchLimit) -> Self {
        Cached {
            limit,
            ..Default::default()
        }
    }
}

fn ptr(c: &Arc<FinCategory>) -> usize {
    Arc::as_ptr(c) as usize
}

impl Enumerator for Cached {
    fn limit(&self) -> SearchLimit {
        self.limit
    }

    fn functors(&self, a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> Result<Arc<Vec<Functor>>> {
        let key = (ptr(a), ptr(b));
        if let Some((_, _, v)) = self.functors.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(enumerate_functors(a, b, self.limit)?);
        self.functors
            .lock()
            .unwrap()
            .insert(key, (a.clone(), b.clone(), v.clone()));
        Ok(v)
    }

    fn nats(&self, f: &Functor, g: &Functor) -> Result<Arc<Vec<NatTransformation>>> {
        let key = (
            ptr(f.source()),
            ptr(f.target()),
            f.object_map().to_vec(),
            f.morphism_map().to_vec(),
            g.object_map().to_vec(),
            g.morphism_map().to_vec(),
        );
        if let Some((_, _, v)) = self.nats.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(enumerate_nat_transformations(f, g, self.limit)?);
        self.nats
            .lock()
            .unwrap()
            .insert(key, (f.source().clone(), f.target().clone(), v.clone()));
        Ok(v)
    }
}
