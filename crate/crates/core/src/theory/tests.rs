use std::sync::Arc;

use proptest::prelude::*;

use super::catalog::{self, coherence, monoidal, pentagon_only};
use super::*;
use crate::fincat::{classify, named, vcompose, Congruence, Fresh, Functor, Mor, NatTransformation, Obj, RawFunctorMaps};
use crate::Error;

fn m(a: &Algebra, id: &str) -> Mor {
    a.carrier().morphism(id).unwrap()
}

fn x(i: usize) -> Term {
    Term::var(i)
}

fn t(a: Term, b: Term) -> Term {
    Term::op(TENSOR, vec![a, b])
}

#[test]
fn variables_interpret_as_projections() {
    let a = catalog::strict_xor(&monoidal());
    let f = interpret_term(&a, &x(1), 2).unwrap();
    let power = crate::fincat::power_category(a.carrier(), 2);
    assert_eq!(f.object_map(), power.projection(0).object_map());
    assert_eq!(f.morphism_map(), power.projection(0).morphism_map());
}

#[test]
fn tensor_terms_interpret_as_xor() {
    let a = catalog::strict_xor(&monoidal());
    let binary = interpret_term(&a, &t(x(1), x(2)), 2).unwrap();
    let ternary = interpret_term(&a, &t(t(x(1), x(2)), x(3)), 3).unwrap();
    for i in 0..2 {
        for j in 0..2 {
            assert_eq!(binary.obj(Obj(2 * i + j)), Obj(i ^ j));
            for k in 0..2 {
                assert_eq!(ternary.obj(Obj(4 * i + 2 * j + k)), Obj(i ^ j ^ k));
            }
        }
    }
}

#[test]
fn identity_and_inverse_cells() {
    let pres = monoidal();
    let a = catalog::sigma_assoc(&pres);
    let src = t(t(x(1), x(2)), x(3));
    let id = interpret_two_cell(&a, &TwoCellExpr::id(src.clone()), 3).unwrap();
    assert!(id.is_identity());
    let round = TwoCellExpr::gen(ALPHA).then(TwoCellExpr::inv(ALPHA));
    let r = interpret_two_cell(&a, &round, 3).unwrap();
    assert_eq!(r, id);
    let alpha = interpret_two_cell(&a, &TwoCellExpr::gen(ALPHA), 3).unwrap();
    let inv = interpret_two_cell(&a, &TwoCellExpr::inv(ALPHA), 3).unwrap();
    assert_eq!(alpha.inverse().unwrap(), inv);
    assert_eq!(vcompose(&inv, &alpha).unwrap(), id);
}

// Oracle: on the σ-associator algebra every component is a power of σ at
// the xor of the tuple, and each α contributes one factor.
fn sigma_power(a: &Algebra, tuple: &[usize], alphas: usize) -> Mor {
    let o = tuple.iter().fold(0, |acc, &v| acc ^ v);
    m(a, &if alphas % 2 == 0 { format!("id_{o}") } else { format!("s{o}") })
}

#[test]
fn pentagon_legs_on_the_sigma_associator() {
    let a = catalog::sigma_assoc(&monoidal());
    let p = pentagon();
    let lhs = interpret_two_cell(&a, &p.lhs, 4).unwrap();
    let rhs = interpret_two_cell(&a, &p.rhs, 4).unwrap();
    for tuple in all_tuples(2, 4) {
        let k = Obj(tuple.iter().fold(0, |acc, &v| acc * 2 + v));
        assert_eq!(lhs.component(k), sigma_power(&a, &tuple, 2));
        assert_eq!(rhs.component(k), sigma_power(&a, &tuple, 3));
    }
}

#[test]
fn satisfaction_of_the_flagships() {
    let pres = monoidal();
    let e = coherence(&pres);
    for a in catalog::all(&pres) {
        assert!(satisfies(&a, &Extension::empty(pres.clone())).unwrap().holds());
    }
    assert!(satisfies(&catalog::strict_xor(&pres), &e).unwrap().holds());
    let w = satisfies(&catalog::sigma_assoc(&pres), &pentagon_only(&pres)).unwrap();
    assert_eq!(
        w.witness().unwrap(),
        &EquationFailure {
            equation: "pentagon".into(),
            tuple: vec!["0".into(); 4],
            lhs: "id_0".into(),
            rhs: "s0".into(),
        }
    );
    for a in [catalog::sigma_unitors(&pres), catalog::strict_xor_z2(&pres), catalog::meet2(&pres), catalog::unit(&pres)] {
        assert!(satisfies(&a, &e).unwrap().holds(), "{}", a.name);
    }
}

#[test]
fn satisfaction_needs_the_same_base() {
    let pres = monoidal();
    let other = Arc::new(Presentation::new(Signature::default(), vec![], vec![], vec![]).unwrap());
    let r = satisfies(&catalog::strict_xor(&pres), &Extension::empty(other));
    assert!(matches!(r, Err(Error::SignatureMismatch(_))));
}

#[test]
fn raw_tables_round_trip() {
    let pres = monoidal();
    for a in catalog::all(&pres) {
        let raw = a.to_raw();
        let json = serde_json::to_string(&raw).unwrap();
        let back: RawTables = serde_json::from_str(&json).unwrap();
        let b = Algebra::from_raw(&a.name, pres.clone(), a.carrier().clone(), &back).unwrap();
        assert_eq!(*a, b);
    }
}

#[test]
fn forced_entries_may_be_omitted() {
    let pres = monoidal();
    let a = catalog::meet2(&pres);
    let mut raw = a.to_raw();
    for table in raw.operations.values_mut() {
        table.morphisms.clear();
    }
    raw.generators.clear();
    let b = Algebra::from_raw("meet2", pres, a.carrier().clone(), &raw).unwrap();
    assert_eq!(a, b);
}

#[test]
fn non_functorial_or_non_invertible_structure_is_rejected() {
    let pres = monoidal();
    let a = catalog::strict_xor_z2(&pres);
    let mut raw = a.to_raw();
    // s0 ⊗ s0 must be the identity for the tensor to preserve composites.
    let tensor = raw.operations.get_mut(TENSOR).unwrap();
    let entry = tensor.morphisms.iter_mut().find(|(t, _)| t == &["s0".to_string(), "s0".to_string()]).unwrap();
    entry.1 = "s0".into();
    let r = Algebra::from_raw("broken", pres.clone(), a.carrier().clone(), &raw);
    assert!(matches!(r, Err(Error::InvalidAlgebra(_))), "{r:?}");

    // On the idempotent monoid with e ⊗ anything = e, an associator e is
    // natural but not invertible.
    let idem = named::idempotent();
    let e = idem.morphism_indices().find(|&m| !idem.is_identity(m)).unwrap();
    let ops = vec![
        OpTable {
            arity: 2,
            objects: vec![Obj(0)],
            morphisms: (0..4).map(|k| if k == 0 { idem.identity(Obj(0)) } else { e }).collect(),
        },
        OpTable {
            arity: 0,
            objects: vec![Obj(0)],
            morphisms: vec![idem.identity(Obj(0))],
        },
    ];
    let gens = vec![vec![e], vec![idem.identity(Obj(0))], vec![idem.identity(Obj(0))]];
    let r = Algebra::new("idem", pres, idem, ops, gens);
    assert!(matches!(r, Err(Error::NonInvertibleComponent { .. })), "{r:?}");
}

#[test]
fn homomorphism_checks() {
    let pres = monoidal();
    let a = Arc::new(catalog::strict_xor(&pres));
    assert!(is_algebra_hom(&Functor::identity(a.carrier()), &a, &a).unwrap().holds());
    let b = Arc::new(catalog::meet2(&pres));
    let p = product_algebra(&a, &b).unwrap();
    assert!(is_algebra_hom(p.left.underlying(), &p.algebra, &a).unwrap().holds());
    assert!(is_algebra_hom(p.right.underlying(), &p.algebra, &b).unwrap().holds());
    let swap = Functor::new(a.carrier().clone(), a.carrier().clone(), vec![Obj(1), Obj(0)], vec![Mor(1), Mor(0)]).unwrap();
    let w = is_algebra_hom(&swap, &a, &a).unwrap();
    assert_eq!(
        w.witness().unwrap(),
        &HomFailure {
            structure: TENSOR.into(),
            tuple: vec!["0".into(), "0".into()],
            mapped: "1".into(),
            expected: "0".into(),
        }
    );
}

#[test]
fn products_with_the_unit_and_coherence() {
    let pres = monoidal();
    let en = Fresh::default();
    let e = coherence(&pres);
    let unit = Arc::new(catalog::unit(&pres));
    let algebras = catalog::all(&pres);
    for a in &algebras {
        let p = product_algebra(a, &unit).unwrap();
        assert!(find_algebra_isomorphism(&p.algebra, a, &en).unwrap().is_some(), "{}", a.name);
    }
    let s = Arc::new(catalog::sigma_unitors(&pres));
    let z = Arc::new(catalog::strict_xor_z2(&pres));
    assert!(satisfies(&product_algebra(&s, &z).unwrap().algebra, &e).unwrap().holds());
    let sigma = Arc::new(catalog::sigma_assoc(&pres));
    let x = Arc::new(catalog::strict_xor(&pres));
    let w = satisfies(&product_algebra(&sigma, &x).unwrap().algebra, &pentagon_only(&pres)).unwrap();
    let w = w.witness().unwrap();
    assert_eq!(w.equation, "pentagon");
    assert_eq!(w.tuple, vec!["(0,0)"; 4]);
}

#[test]
fn subalgebras_of_strict_xor() {
    let pres = monoidal();
    let a = Arc::new(catalog::strict_xor(&pres));
    let same = subalgebra_check(&Functor::identity(a.carrier()), &a).unwrap();
    assert_eq!(*same, *a);

    let point = named::discrete(&["p"]);
    let raw = |target: &str| RawFunctorMaps {
        on_objects: [("p".to_string(), target.to_string())].into(),
        on_morphisms: Default::default(),
    };
    let zero = Functor::from_raw(point.clone(), a.carrier().clone(), &raw("0")).unwrap();
    let sub = subalgebra_check(&zero, &a).unwrap();
    assert!(satisfies(&sub, &coherence(&pres)).unwrap().holds());
    let one = Functor::from_raw(point, a.carrier().clone(), &raw("1")).unwrap();
    assert!(matches!(
        subalgebra_check(&one, &a),
        Err(Error::NotClosedUnderOperations { operation, tuple }) if operation == TENSOR && tuple == "p, p"
    ));

    let z = Arc::new(catalog::strict_xor_z2(&pres));
    let collapse = Functor::new(z.carrier().clone(), a.carrier().clone(), vec![Obj(0), Obj(1)], vec![Mor(0), Mor(1), Mor(0), Mor(1)]).unwrap();
    assert!(matches!(subalgebra_check(&collapse, &a), Err(Error::NotFaithful(_))));
}

#[test]
fn escaping_generator_components() {
    let pres = monoidal();
    let a = Arc::new(catalog::sigma_assoc(&pres));
    // The discrete wide subcategory of the σ-associator carrier is closed
    // under the tensor but misses every associator component.
    let d = named::discrete(&["0", "1"]);
    let m = Functor::new(d, a.carrier().clone(), vec![Obj(0), Obj(1)], vec![Mor(0), Mor(1)]).unwrap();
    assert!(matches!(
        subalgebra_check(&m, &a),
        Err(Error::GeneratorComponentEscapes { generator, tuple }) if generator == ALPHA && tuple == "0, 0, 0"
    ));
}

fn sigma_collapse(a: &Algebra) -> Congruence {
    crate::fincat::congruence_closure(a.carrier(), &[(m(a, "s0"), m(a, "id_0")), (m(a, "s1"), m(a, "id_1"))]).unwrap()
}

#[test]
fn quotients_of_the_sigma_associator() {
    let pres = monoidal();
    let en = Fresh::default();
    let a = Arc::new(catalog::sigma_assoc(&pres));
    let (same, h) = quotient_algebra(&a, &Congruence::discrete(a.carrier())).unwrap();
    assert!(h.underlying().is_isomorphism());
    assert!(find_algebra_isomorphism(&same, &a, &en).unwrap().is_some());

    let (strict, h) = quotient_algebra(&a, &sigma_collapse(&a)).unwrap();
    assert!(classify(h.underlying()).bo_full);
    let x = Arc::new(catalog::strict_xor(&pres));
    assert!(find_algebra_isomorphism(&strict, &x, &en).unwrap().is_some());
    assert!(satisfies(&strict, &coherence(&pres)).unwrap().holds());

    let half = crate::fincat::congruence_closure(a.carrier(), &[(m(&a, "s0"), m(&a, "id_0"))]).unwrap();
    assert!(matches!(quotient_algebra(&a, &half), Err(Error::NotOperationClosed { operation, .. }) if operation == TENSOR));
}

#[test]
fn congruence_closure_with_operations() {
    let pres = monoidal();
    let a = catalog::sigma_assoc(&pres);
    assert!(algebra_congruence_closure(&a, &[]).unwrap().is_discrete());
    let p = pentagon();
    let zero = [Obj(0); 4];
    let l = a.cell_component(&p.lhs, &zero).unwrap();
    let r = a.cell_component(&p.rhs, &zero).unwrap();
    let c = algebra_congruence_closure(&a, &[(l, r)]).unwrap();
    assert_eq!(c, sigma_collapse(&a));
    assert!(c.is_fixpoint());
    let d = catalog::strict_xor(&pres);
    let ids: Vec<(Mor, Mor)> = d.carrier().morphism_indices().map(|m| (m, m)).collect();
    assert!(algebra_congruence_closure(&d, &ids).unwrap().is_discrete());
    let bad = algebra_congruence_closure(&a, &[(m(&a, "s0"), m(&a, "s1"))]);
    assert!(matches!(bad, Err(Error::NonParallelGenerator(..))));
}

#[test]
fn reflexive_coequifiers_of_kernels() {
    let pres = monoidal();
    let en = Fresh::default();
    let a = Arc::new(catalog::sigma_assoc(&pres));
    let id = AlgebraHom::identity(&a);
    let data = algebra_kernel(&id).unwrap();
    assert_eq!(data.phi, data.psi);
    let (same, q) = reflexive_coequifier_algebra(&data).unwrap();
    assert!(q.underlying().is_isomorphism());
    assert_eq!(*same.carrier().as_ref(), *a.carrier().as_ref());

    let (strict, h) = quotient_algebra(&a, &sigma_collapse(&a)).unwrap();
    let data = algebra_kernel(&h).unwrap();
    let (lifted, q) = reflexive_coequifier_algebra(&data).unwrap();
    assert_eq!(q.underlying().morphism_map(), h.underlying().morphism_map());
    assert!(find_algebra_isomorphism(&lifted, &strict, &en).unwrap().is_some());
}

#[test]
fn broken_sections_are_rejected() {
    let pres = monoidal();
    let a = Arc::new(catalog::sigma_assoc(&pres));
    let (_, h) = quotient_algebra(&a, &sigma_collapse(&a)).unwrap();
    let mut data = algebra_kernel(&h).unwrap();
    std::mem::swap(&mut data.phi, &mut data.psi);
    assert!(data.check().is_ok());
    data.section = data.s.clone().after(&data.section).unwrap().after(&AlgebraHom::identity(&a)).unwrap();
    assert!(matches!(reflexive_coequifier_algebra(&data), Err(Error::BoundaryMismatch(_))));
}

#[test]
fn substitution_into_cells_matches_whiskering() {
    // λ substituted at x1⊗x2 is λ whiskered by the tensor.
    let pres = monoidal();
    let a = catalog::sigma_unitors(&pres);
    let e = TwoCellExpr::subst(TwoCellExpr::gen(LAMBDA), vec![SubstArg::Term(t(x(1), x(2)))]);
    let cell = interpret_two_cell(&a, &e, 2).unwrap();
    let lambda = interpret_two_cell(&a, &TwoCellExpr::gen(LAMBDA), 1).unwrap();
    let tensor = interpret_term(&a, &t(x(1), x(2)), 2).unwrap();
    // carrier^1 has the carrier's object indexing.
    for o in tensor.source().object_indices() {
        assert_eq!(cell.component(o), lambda.component(tensor.obj(o)));
    }
}

fn arb_term(vars: usize) -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![(1..=vars).prop_map(Term::var), Just(Term::op(UNIT, vec![]))];
    leaf.prop_recursive(3, 16, 2, |inner| (inner.clone(), inner).prop_map(|(a, b)| t(a, b)))
}

proptest! {
    #[test]
    fn substitution_lemma(s in arb_term(3), args in proptest::collection::vec(arb_term(2), 3), which in 0usize..6) {
        let pres = monoidal();
        let a = &catalog::all(&pres)[which];
        let subst = s.substitute(&args).unwrap();
        let nm = a.carrier().morphism_count();
        for tuple in all_tuples(nm, 2) {
            let tuple: Vec<Mor> = tuple.into_iter().map(Mor).collect();
            let inner: Vec<Mor> = args.iter().map(|u| a.eval_mor(u, &tuple).unwrap()).collect();
            prop_assert_eq!(a.eval_mor(&subst, &tuple).unwrap(), a.eval_mor(&s, &inner).unwrap());
        }
    }

    #[test]
    fn vertical_composites_interpret_componentwise(which in 0usize..6, twice in any::<bool>()) {
        let pres = monoidal();
        let a = &catalog::all(&pres)[which];
        let g = if twice { TwoCellExpr::gen(RHO) } else { TwoCellExpr::inv(RHO).then(TwoCellExpr::gen(RHO)) };
        let first = interpret_two_cell(a, &TwoCellExpr::inv(RHO), 1).unwrap();
        let second = interpret_two_cell(a, &TwoCellExpr::gen(RHO), 1).unwrap();
        let composite = interpret_two_cell(a, &TwoCellExpr::gen(RHO).then(TwoCellExpr::inv(RHO)), 1).unwrap();
        prop_assert_eq!(composite, vcompose(&first, &second).unwrap());
        let inv = interpret_two_cell(a, &TwoCellExpr::inv(RHO), 1).unwrap();
        for o in a.carrier().object_indices() {
            let c = interpret_two_cell(a, &g, 1).unwrap().component(o);
            prop_assert!(a.carrier().inverse(c).is_some());
            prop_assert_eq!(a.carrier().compose(inv.component(o), second.component(o)), a.carrier().identity(o));
        }
    }
}

#[test]
fn interpreted_cells_are_natural() {
    let pres = monoidal();
    for a in catalog::all(&pres) {
        for eq in [pentagon(), triangle()] {
            let n = eq.arity(&pres).unwrap();
            let l: NatTransformation = interpret_two_cell(&a, &eq.lhs, n).unwrap();
            let r = interpret_two_cell(&a, &eq.rhs, n).unwrap();
            assert_eq!(l.from(), r.from());
        }
    }
}
