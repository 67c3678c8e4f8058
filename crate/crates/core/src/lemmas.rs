//! Exhaustive lemma suites over a list of small categories.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::Result;
use crate::fincat::{classify, compose_functors, whisker, Enumerator, FinCategory, Functor, Mor, Side};
use crate::kernel::{
    bof_kernel, coequify, immediate_convergence_check, make_reflexive, quotient_isomorphism,
    verify_kernel_universal, KernelData,
};

/// Outcome of one exhaustive suite.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct LemmaReport {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl LemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn new(name: &str, checked: usize, failures: Vec<String>) -> Self {
        LemmaReport {
            name: name.into(),
            checked,
            failures,
        }
    }
}

/// Every functor between every pair of listed categories.
pub fn all_functors(cats: &[Arc<FinCategory>], en: &dyn Enumerator) -> Result<Vec<Functor>> {
    let mut out = Vec::new();
    for a in cats {
        for b in cats {
            out.extend(en.functors(a, b)?.iter().cloned());
        }
    }
    Ok(out)
}

/// Triples `(h: C → A, f, g: A → B)` with `h` accepted by `class`.
fn whiskering_triples(
    cats: &[Arc<FinCategory>],
    en: &dyn Enumerator,
    class: impl Fn(&Functor) -> bool,
) -> Result<Vec<(Functor, Functor, Functor)>> {
    let mut out = Vec::new();
    for h in all_functors(cats, en)?.into_iter().filter(|h| class(h)) {
        for b in cats {
            let fs = en.functors(h.target(), b)?;
            for f in fs.iter() {
                for g in fs.iter() {
                    out.push((h.clone(), f.clone(), g.clone()));
                }
            }
        }
    }
    Ok(out)
}

/// For b.o. full `h` every `β: f h ⇒ g h` is `α ∗ h` for exactly one `α`.
pub fn cancel_two_cells(cats: &[Arc<FinCategory>], en: &dyn Enumerator) -> Result<LemmaReport> {
    let triples = whiskering_triples(cats, en, |h| classify(h).bo_full)?;
    let results: Vec<Result<(usize, Vec<String>)>> = triples
        .par_iter()
        .map(|(h, f, g)| {
            let mut hits: HashMap<Vec<Mor>, usize> = HashMap::new();
            for alpha in en.nats(f, g)?.iter() {
                *hits.entry(whisker(h, alpha, Side::Right)?.components().to_vec()).or_default() += 1;
            }
            let betas = en.nats(&compose_functors(f, h)?, &compose_functors(g, h)?)?;
            let mut bad = Vec::new();
            for beta in betas.iter() {
                let n = hits.get(beta.components()).copied().unwrap_or(0);
                if n != 1 {
                    bad.push(format!("h = {h:?}, beta = {beta:?}: {n} preimages"));
                }
            }
            Ok((betas.len(), bad))
        })
        .collect();
    collect("cancel-2-cells", results)
}

/// For s.o. `h`, `α ∗ h = β ∗ h` forces `α = β`.
pub fn so_faithfulness(cats: &[Arc<FinCategory>], en: &dyn Enumerator) -> Result<LemmaReport> {
    let triples = whiskering_triples(cats, en, |h| classify(h).so)?;
    let results: Vec<Result<(usize, Vec<String>)>> = triples
        .par_iter()
        .map(|(h, f, g)| {
            let alphas = en.nats(f, g)?;
            let mut seen: HashMap<Vec<Mor>, usize> = HashMap::new();
            let mut bad = Vec::new();
            for (i, alpha) in alphas.iter().enumerate() {
                let w = whisker(h, alpha, Side::Right)?.components().to_vec();
                if let Some(&j) = seen.get(&w) {
                    bad.push(format!("h = {h:?}: {:?} and {alpha:?} whisker equally", alphas[j]));
                }
                seen.insert(w, i);
            }
            Ok((alphas.len(), bad))
        })
        .collect();
    collect("so-faithfulness", results)
}

/// Reflexivising coequifier data does not change the quotient.
pub fn coeq_refl(data: &[KernelData]) -> Result<LemmaReport> {
    let mut bad = Vec::new();
    for kd in data {
        let r = make_reflexive(kd)?;
        if !r.reflexivity_holds() {
            bad.push(format!("reflexivity equations fail for {:?}", kd.phi));
            continue;
        }
        let q1 = coequify(&kd.phi, &kd.psi)?;
        let q2 = coequify(&r.data.phi, &r.data.psi)?;
        if quotient_isomorphism(&q1, &q2).is_none() {
            bad.push(format!("quotients differ for {:?}", kd.phi));
        }
    }
    Ok(LemmaReport::new("coeq-refl", data.len(), bad))
}

/// `ε_f` is faithful for every functor.
pub fn immediate_convergence(cats: &[Arc<FinCategory>], en: &dyn Enumerator) -> Result<LemmaReport> {
    let fs = all_functors(cats, en)?;
    let results: Vec<Result<(usize, Vec<String>)>> = fs
        .par_iter()
        .map(|f| {
            let c = immediate_convergence_check(f)?;
            let bad = if c.faithful { vec![] } else { vec![format!("eps_f not faithful for {f:?}")] };
            Ok((1, bad))
        })
        .collect();
    collect("immediate-convergence", results)
}

/// The parallel-pair kernel of every functor is universal against `probes`.
pub fn kernel_universality(
    cats: &[Arc<FinCategory>],
    probes: &[Arc<FinCategory>],
    en: &dyn Enumerator,
) -> Result<LemmaReport> {
    let fs = all_functors(cats, en)?;
    let results: Vec<Result<(usize, Vec<String>)>> = fs
        .par_iter()
        .map(|f| {
            let kd = bof_kernel(f);
            let v = verify_kernel_universal(&kd, f, probes, en)?;
            Ok((1, v.witness().map(|w| format!("{f:?}: {w}")).into_iter().collect()))
        })
        .collect();
    collect("kernel-universality", results)
}

fn collect(name: &str, results: Vec<Result<(usize, Vec<String>)>>) -> Result<LemmaReport> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for r in results {
        let (n, bad) = r?;
        checked += n;
        failures.extend(bad);
    }
    Ok(LemmaReport::new(name, checked, failures))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{named, Cached, Obj, RawFunctorMaps, SearchLimit};

    #[test]
    fn suites_pass_on_a_few_categories() {
        let cats = vec![named::terminal(), named::arrow(), named::parallel(), named::z2()];
        let en = Cached::new(SearchLimit::default());
        for r in [
            cancel_two_cells(&cats, &en).unwrap(),
            so_faithfulness(&cats, &en).unwrap(),
            immediate_convergence(&cats, &en).unwrap(),
            kernel_universality(&cats, &cats[..2], &en).unwrap(),
        ] {
            assert!(r.passed(), "{r:?}");
            assert!(r.checked > 0);
        }
    }

    #[test]
    fn cancellation_needs_fullness() {
        // D2 → 2 is b.o. but not full. With f, g: 2 → P sending u to u and
        // to v, the identity components on D2 form a 2-cell f h ⇒ g h that
        // is not natural on 2.
        let (d2, two, p) = (named::discrete2(), named::arrow(), named::parallel());
        let h = Functor::new(d2, two.clone(), vec![Obj(0), Obj(1)], vec![two.identity(Obj(0)), two.identity(Obj(1))]).unwrap();
        assert!(classify(&h).bo && !classify(&h).full);
        let to = |m: &str| {
            let maps = RawFunctorMaps {
                on_objects: [("a".into(), "a".into()), ("b".into(), "b".into())].into(),
                on_morphisms: [("u".into(), m.into())].into(),
            };
            Functor::from_raw(two.clone(), p.clone(), &maps).unwrap()
        };
        let (f, g) = (to("u"), to("v"));
        let en = Cached::new(SearchLimit::default());
        assert!(en.nats(&f, &g).unwrap().is_empty());
        let betas = en.nats(&f.after(&h).unwrap(), &g.after(&h).unwrap()).unwrap();
        assert_eq!(betas.len(), 1);
    }
}
