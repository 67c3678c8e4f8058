use std::sync::Arc;

use birkhoff_core::fincat::{
    classify, compose_functors, congruence_closure, enumerate_functors, named,
    quotient_by_congruence, validate_category, FinCategory, Functor, Mor, Obj, SearchLimit,
};
use proptest::prelude::*;

fn small() -> Vec<Arc<FinCategory>> {
    vec![
        named::empty(),
        named::terminal(),
        named::arrow(),
        named::parallel(),
        named::discrete2(),
        named::z2(),
        named::z2_pair(),
        named::chain3(),
        named::idempotent(),
    ]
}

/// Naive recount: every object map, then every hom-respecting morphism map,
/// kept when `Functor::new` accepts it.
fn brute_force_count(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> usize {
    let (na, nb) = (a.object_count(), b.object_count());
    let mut count = 0;
    let maps = nb.pow(na as u32);
    for code in 0..maps {
        let mut k = code;
        let objects: Vec<Obj> = (0..na)
            .map(|_| {
                let o = Obj(k % nb);
                k /= nb;
                o
            })
            .collect();
        let choices: Vec<&[Mor]> = a
            .morphism_indices()
            .map(|m| b.hom(objects[a.dom(m).0], objects[a.cod(m).0]))
            .collect();
        if choices.iter().any(|c| c.is_empty()) {
            continue;
        }
        let total: usize = choices.iter().map(|c| c.len()).product();
        for mut code in 0..total {
            let morphisms: Vec<Mor> = choices
                .iter()
                .map(|c| {
                    let m = c[code % c.len()];
                    code /= c.len();
                    m
                })
                .collect();
            if Functor::new(a.clone(), b.clone(), objects.clone(), morphisms).is_ok() {
                count += 1;
            }
        }
    }
    count
}

#[test]
fn enumeration_agrees_with_brute_force_recount() {
    for a in small() {
        for b in small() {
            let found = enumerate_functors(&a, &b, SearchLimit::default()).unwrap();
            assert_eq!(found.len(), brute_force_count(&a, &b), "{a:?} -> {b:?}");
            for f in &found {
                Functor::new(a.clone(), b.clone(), f.object_map().to_vec(), f.morphism_map().to_vec())
                    .unwrap();
            }
        }
    }
}

#[test]
fn revalidation_is_idempotent() {
    for c in small() {
        c.revalidate().unwrap();
        assert_eq!(validate_category(&c.to_raw()).unwrap(), *c);
    }
}

#[test]
fn class_stability_under_composition() {
    let cats = small();
    let mut pairs = 0usize;
    for a in &cats {
        for b in &cats {
            let ab = enumerate_functors(a, b, SearchLimit::default()).unwrap();
            for c in &cats {
                let bc = enumerate_functors(b, c, SearchLimit::default()).unwrap();
                for f in &ab {
                    let cf = classify(f);
                    for g in &bc {
                        let cg = classify(g);
                        let h = classify(&compose_functors(g, f).unwrap());
                        if cf.bo_full && cg.bo_full {
                            assert!(h.bo_full);
                        }
                        if cf.faithful && cg.faithful {
                            assert!(h.faithful);
                        }
                        pairs += 1;
                    }
                }
            }
        }
    }
    assert!(pairs > 1000);
}

fn parallel_pairs(c: &FinCategory) -> Vec<(Mor, Mor)> {
    let mut out = Vec::new();
    for u in c.morphism_indices() {
        for v in c.morphism_indices() {
            if c.parallel(u, v) {
                out.push((u, v));
            }
        }
    }
    out
}

proptest! {
    #[test]
    fn closures_are_fixpoints_and_quotients_are_bo_full(
        which in 0usize..9,
        picks in proptest::collection::vec(any::<prop::sample::Index>(), 0..4),
    ) {
        let c = small().swap_remove(which);
        let pairs = parallel_pairs(&c);
        let gens: Vec<(Mor, Mor)> = if pairs.is_empty() {
            Vec::new()
        } else {
            picks.iter().map(|i| pairs[i.index(pairs.len())]).collect()
        };
        let cong = congruence_closure(&c, &gens).unwrap();
        prop_assert!(cong.is_fixpoint());
        cong.validate().unwrap();
        for &(u, v) in &gens {
            prop_assert!(cong.related(u, v));
        }
        let q = quotient_by_congruence(&cong);
        q.category.revalidate().unwrap();
        prop_assert!(classify(&q.projection).bo_full);
    }
}

#[test]
fn discrete_quotients_are_isomorphisms() {
    for c in small() {
        let q = quotient_by_congruence(&congruence_closure(&c, &[]).unwrap());
        assert!(q.projection.is_isomorphism());
    }
}
