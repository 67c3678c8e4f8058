//! Finite categories, functors, natural transformations and congruences.

mod category;
mod congruence;
mod constructions;
mod enumerate;
mod functor;
pub mod named;
mod nat;

pub use category::{
    validate_category, CategoryBuilder, FinCategory, Mor, MorphismInfo, Obj, RawCategory,
    RawMorphism,
};
pub(crate) use congruence::{saturate, UnionFind};
pub use congruence::{congruence_closure, quotient_by_congruence, Congruence, Quotient};
pub use constructions::{
    copair, coproduct_category, power_category, product_category, Coproduct, Power, Product,
};
pub(crate) use enumerate::{search_functors, Budget};
pub use enumerate::{
    enumerate_functors, enumerate_nat_transformations, find_isomorphism, Cached, Enumerator, Fresh, SearchLimit,
};
pub use functor::{compose_functors, same_category, Functor, RawFunctorMaps};
pub use nat::{vcompose, whisker, NatTransformation, RawComponents, Side};

use serde::Serialize;

/// Class-membership flags of a functor, each decided by inspection.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub bo: bool,
    pub full: bool,
    pub faithful: bool,
    pub so: bool,
    pub injective_on_objects: bool,
    pub ff: bool,
    pub bo_full: bool,
    pub ioff: bool,
}

impl Classification {
    /// Names of the flags that hold, in declaration order.
    pub fn holding(&self) -> Vec<&'static str> {
        [
            ("bo", self.bo),
            ("full", self.full),
            ("faithful", self.faithful),
            ("so", self.so),
            ("injective_on_objects", self.injective_on_objects),
            ("ff", self.ff),
            ("bo_full", self.bo_full),
            ("ioff", self.ioff),
        ]
        .into_iter()
        .filter_map(|(n, b)| b.then_some(n))
        .collect()
    }
}

pub fn classify(f: &Functor) -> Classification {
    let (s, t) = (f.source(), f.target());
    let mut hit = vec![false; t.object_count()];
    for &o in f.object_map() {
        hit[o.0] = true;
    }
    let so = hit.iter().all(|&h| h);
    let injective_on_objects = {
        let mut seen = vec![false; t.object_count()];
        f.object_map().iter().all(|o| !std::mem::replace(&mut seen[o.0], true))
    };
    let mut full = true;
    let mut faithful = true;
    let mut mark = vec![usize::MAX; t.morphism_count()];
    let mut stamp = 0;
    for a in s.object_indices() {
        for b in s.object_indices() {
            let hom = s.hom(a, b);
            let mut images = 0;
            for &m in hom {
                let fm = f.mor(m).0;
                if mark[fm] == stamp {
                    faithful = false;
                } else {
                    mark[fm] = stamp;
                    images += 1;
                }
            }
            if images < t.hom(f.obj(a), f.obj(b)).len() {
                full = false;
            }
            stamp += 1;
        }
    }
    let bo = so && injective_on_objects;
    let ff = full && faithful;
    Classification {
        bo,
        full,
        faithful,
        so,
        injective_on_objects,
        ff,
        bo_full: bo && full,
        ioff: injective_on_objects && ff,
    }
}
