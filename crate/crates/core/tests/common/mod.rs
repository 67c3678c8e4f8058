//! Independent oracle shared by the integration tests.

#![allow(dead_code)]

use birkhoff_core::fincat::Mor;
use birkhoff_core::theory::Algebra;

/// All set partitions of `0..n` as block labels.
pub fn partitions(n: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..n {
        let mut next = Vec::new();
        for p in out {
            let blocks = p.iter().copied().max().map_or(0, |b| b + 1);
            for b in 0..=blocks {
                let mut q = p.clone();
                q.push(b);
                next.push(q);
            }
        }
        out = next;
    }
    out
}

pub fn tuples(radix: usize, len: usize) -> Vec<Vec<usize>> {
    (0..len).fold(vec![vec![]], |acc, _| {
        acc.into_iter()
            .flat_map(|t| (0..radix).map(move |x| [t.clone(), vec![x]].concat()))
            .collect()
    })
}

/// Partitions of the whole morphism set that relate only parallel
/// morphisms, are closed under composition on both sides and under every
/// operation in every argument.
pub fn oracle_partitions(a: &Algebra) -> Vec<Vec<usize>> {
    let c = a.carrier();
    let n = c.morphism_count();
    let mut found = Vec::new();
    'next: for labels in partitions(n) {
        let rel = |u: Mor, v: Mor| labels[u.0] == labels[v.0];
        for u in c.morphism_indices() {
            for v in c.morphism_indices() {
                if !rel(u, v) {
                    continue;
                }
                if !c.parallel(u, v) {
                    continue 'next;
                }
                for w in c.morphism_indices() {
                    if let (Some(x), Some(y)) = (c.try_compose(w, u), c.try_compose(w, v)) {
                        if !rel(x, y) {
                            continue 'next;
                        }
                    }
                    if let (Some(x), Some(y)) = (c.try_compose(u, w), c.try_compose(v, w)) {
                        if !rel(x, y) {
                            continue 'next;
                        }
                    }
                }
                for (k, table) in a.op_tables().iter().enumerate() {
                    for t in tuples(n, table.arity) {
                        let t: Vec<Mor> = t.into_iter().map(Mor).collect();
                        for i in 0..table.arity {
                            if t[i] != u {
                                continue;
                            }
                            let mut s = t.clone();
                            s[i] = v;
                            if !rel(a.op_mor(k, &t), a.op_mor(k, &s)) {
                                continue 'next;
                            }
                        }
                    }
                }
            }
        }
        found.push(labels);
    }
    found
}

pub fn oracle_count(a: &Algebra) -> usize {
    oracle_partitions(a).len()
}
