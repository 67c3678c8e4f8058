//! Small algebras for the monoidal presentation, built in code.
//!
//! The bundled corpus files describe the same algebras; tests compare the two.

use std::sync::Arc;

use super::algebra::{all_tuples, Algebra, OpTable};
use super::syntax::{monoidal_presentation, pentagon, triangle, Extension, Presentation};
use crate::fincat::{named, FinCategory, Mor, Obj};

pub fn monoidal() -> Arc<Presentation> {
    Arc::new(monoidal_presentation())
}

/// The monoidal presentation with the pentagon and the triangle added.
pub fn coherence(base: &Arc<Presentation>) -> Extension {
    Extension::new(base.clone(), vec![pentagon(), triangle()]).expect("coherence is well formed")
}

pub fn pentagon_only(base: &Arc<Presentation>) -> Extension {
    Extension::new(base.clone(), vec![pentagon()]).expect("the pentagon is well formed")
}

/// Objects `0, 1` under xor with unit `0`; every endomorphism set is a
/// subgroup of Z/2 and the tensor multiplies in Z/2 at the xor.
fn xor_algebra(name: &str, pres: &Arc<Presentation>, carrier: Arc<FinCategory>, alpha_sigma: bool, unitors_sigma: bool) -> Algebra {
    let c = &carrier;
    let parity = |m: Mor| usize::from(!c.is_identity(m));
    let at = |o: usize, p: usize| {
        let id = c.identity(Obj(o));
        if p == 0 {
            id
        } else {
            *c.hom(Obj(o), Obj(o)).iter().find(|&&m| m != id).expect("a non-identity endomorphism")
        }
    };
    let tensor = OpTable {
        arity: 2,
        objects: all_tuples(2, 2).map(|t| Obj(t[0] ^ t[1])).collect(),
        morphisms: all_tuples(c.morphism_count(), 2)
            .map(|t| {
                let (f, g) = (Mor(t[0]), Mor(t[1]));
                at(c.dom(f).0 ^ c.dom(g).0, parity(f) ^ parity(g))
            })
            .collect(),
    };
    let unit = OpTable {
        arity: 0,
        objects: vec![Obj(0)],
        morphisms: vec![c.identity(Obj(0))],
    };
    let alpha = all_tuples(2, 3).map(|t| at(t[0] ^ t[1] ^ t[2], usize::from(alpha_sigma))).collect();
    let unitor: Vec<Mor> = (0..2).map(|x| at(x, usize::from(unitors_sigma))).collect();
    Algebra::new(name, pres.clone(), carrier.clone(), vec![tensor, unit], vec![alpha, unitor.clone(), unitor])
        .expect("catalog algebra is valid")
}

/// Discrete `{0, 1}` under xor, all structural cells identities.
pub fn strict_xor(pres: &Arc<Presentation>) -> Algebra {
    xor_algebra("strict_xor", pres, named::discrete(&["0", "1"]), false, false)
}

/// Xor on the two-object Z/2 category with every associator component the
/// non-identity automorphism; the unitors are identities.
pub fn sigma_assoc(pres: &Arc<Presentation>) -> Algebra {
    xor_algebra("sigma_assoc", pres, named::z2_pair(), true, false)
}

/// Xor on the two-object Z/2 category with identity structural cells.
pub fn strict_xor_z2(pres: &Arc<Presentation>) -> Algebra {
    xor_algebra("strict_xor_z2", pres, named::z2_pair(), false, false)
}

/// Identity associator, both unitors the non-identity automorphism.
pub fn sigma_unitors(pres: &Arc<Presentation>) -> Algebra {
    xor_algebra("sigma_unitors", pres, named::z2_pair(), false, true)
}

/// `a → b` under meet with unit `b`; every hom-set is a singleton.
pub fn meet2(pres: &Arc<Presentation>) -> Algebra {
    let c = named::arrow();
    let meet = |x: Obj, y: Obj| Obj(x.0.min(y.0));
    let tensor = OpTable {
        arity: 2,
        objects: all_tuples(2, 2).map(|t| meet(Obj(t[0]), Obj(t[1]))).collect(),
        morphisms: all_tuples(c.morphism_count(), 2)
            .map(|t| {
                let (f, g) = (Mor(t[0]), Mor(t[1]));
                c.hom(meet(c.dom(f), c.dom(g)), meet(c.cod(f), c.cod(g)))[0]
            })
            .collect(),
    };
    let b = c.object("b").expect("b");
    let unit = OpTable {
        arity: 0,
        objects: vec![b],
        morphisms: vec![c.identity(b)],
    };
    let ids = |n: usize| all_tuples(2, n).collect::<Vec<_>>();
    let alpha = ids(3)
        .iter()
        .map(|t| c.identity(t.iter().map(|&o| Obj(o)).fold(b, meet)))
        .collect();
    let unitor: Vec<Mor> = (0..2).map(|x| c.identity(Obj(x))).collect();
    Algebra::new("meet2", pres.clone(), c.clone(), vec![tensor, unit], vec![alpha, unitor.clone(), unitor])
        .expect("catalog algebra is valid")
}

/// The terminal algebra.
pub fn unit(pres: &Arc<Presentation>) -> Algebra {
    let c = named::terminal();
    let ops = pres
        .signature
        .operations
        .iter()
        .map(|op| OpTable {
            arity: op.arity,
            objects: vec![Obj(0)],
            morphisms: vec![Mor(0)],
        })
        .collect();
    let gens = pres.generators.iter().map(|_| vec![Mor(0)]).collect();
    Algebra::new("unit", pres.clone(), c, ops, gens).expect("catalog algebra is valid")
}

/// Every catalog algebra, in a fixed order.
pub fn all(pres: &Arc<Presentation>) -> Vec<Arc<Algebra>> {
    vec![
        Arc::new(unit(pres)),
        Arc::new(strict_xor(pres)),
        Arc::new(sigma_assoc(pres)),
        Arc::new(strict_xor_z2(pres)),
        Arc::new(sigma_unitors(pres)),
        Arc::new(meet2(pres)),
    ]
}
