use std::sync::Arc;

use birkhoff_core::factor::{check_orthogonal_morphisms, comparison, transported, System};
use birkhoff_core::fincat::{classify, named, Cached, Enumerator, FinCategory, Functor, SearchLimit};
use rayon::prelude::*;

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

fn all_functors(en: &dyn Enumerator) -> Vec<Functor> {
    let cats = small();
    let mut out = Vec::new();
    for a in &cats {
        for b in &cats {
            out.extend(en.functors(a, b).unwrap().iter().cloned());
        }
    }
    out
}

#[test]
fn factorisations_compose_and_classify() {
    let en = Cached::new(SearchLimit::default());
    for f in all_functors(&en) {
        for sys in System::ALL {
            let fact = sys.factor(&f);
            fact.middle.revalidate().unwrap();
            assert!(fact.composes(), "{f:?} {sys:?}");
            assert!(sys.in_left(&fact.left) && sys.in_right(&fact.right), "{f:?} {sys:?}");
            let other = transported(&fact);
            let d = comparison(&fact, &other, &en).unwrap().expect("unique comparison");
            assert!(d.is_isomorphism());
        }
        let bof = System::Bof.factor(&f);
        assert_eq!(bof.left.is_identity(), classify(&f).faithful, "{f:?}");
    }
}

#[test]
fn bo_full_is_orthogonal_to_faithful() {
    let en = Cached::new(SearchLimit::default());
    let fs = all_functors(&en);
    let lefts: Vec<&Functor> = fs.iter().filter(|f| classify(f).bo_full).collect();
    let rights: Vec<&Functor> = fs.iter().filter(|f| classify(f).faithful).collect();
    let pairs: Vec<(&Functor, &Functor)> = lefts
        .iter()
        .flat_map(|&e| rights.iter().map(move |&m| (e, m)))
        .collect();
    eprintln!("{} x {} = {}", lefts.len(), rights.len(), pairs.len());
    let failures: Vec<String> = pairs
        .par_iter()
        .filter_map(|(e, m)| {
            let v = check_orthogonal_morphisms(e, m, &en).unwrap();
            v.witness().map(|w| format!("{e:?} vs {m:?}: {w}"))
        })
        .collect();
    assert!(failures.is_empty(), "{failures:#?}");
}
