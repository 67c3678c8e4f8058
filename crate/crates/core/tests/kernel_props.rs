use std::sync::Arc;

use birkhoff_core::fincat::{classify, enumerate_functors, named, FinCategory, SearchLimit};
use birkhoff_core::kernel::{bof_kernel, bof_kernel_indexed};

fn corpus() -> Vec<Arc<FinCategory>> {
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

#[test]
fn kernel_apexes_are_categories_and_legs_are_jointly_faithful() {
    let cats = corpus();
    let mut seen = 0;
    for a in &cats {
        for b in &cats {
            for f in enumerate_functors(a, b, SearchLimit::default()).unwrap() {
                let (kd, index) = bof_kernel_indexed(&f);
                kd.apex().revalidate().unwrap();
                // Objects are exactly the parallel pairs identified by f.
                let expected = a
                    .morphism_indices()
                    .flat_map(|u| a.morphism_indices().map(move |v| (u, v)))
                    .filter(|&(u, v)| a.parallel(u, v) && f.mor(u) == f.mor(v))
                    .count();
                assert_eq!(index.pairs.len(), expected);
                assert!(kd.coequified_by(&f));
                for m in kd.apex().morphism_indices() {
                    for n in kd.apex().morphism_indices() {
                        if m != n && kd.apex().parallel(m, n) {
                            assert!(kd.s.mor(m) != kd.s.mor(n) || kd.t.mor(m) != kd.t.mor(n));
                        }
                    }
                }
                seen += 1;
            }
        }
    }
    assert!(seen > 100);
}

#[test]
fn faithful_functors_have_diagonal_kernels() {
    let cats = corpus();
    for a in &cats {
        for b in &cats {
            for f in enumerate_functors(a, b, SearchLimit::default()).unwrap() {
                let kd = bof_kernel(&f);
                let diagonal = kd.phi == kd.psi;
                assert_eq!(diagonal, classify(&f).faithful);
            }
        }
    }
}
