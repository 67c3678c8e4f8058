//! Products, powers and coproducts of finite categories.

use std::sync::Arc;

use super::category::{FinCategory, Mor, MorphismInfo, Obj};
use super::functor::{same_category, Functor};
use super::nat::NatTransformation;
use crate::error::{Error, Result};

/// `A × B` with its projections.
#[derive(Clone, Debug)]
pub struct Product {
    pub category: Arc<FinCategory>,
    pub left: Functor,
    pub right: Functor,
}

/// `A^n`, tuples indexed in mixed radix with the first entry most significant.
#[derive(Clone, Debug)]
pub struct Power {
    pub category: Arc<FinCategory>,
    pub base: Arc<FinCategory>,
    pub arity: usize,
}

/// `A + B` with its injections.
#[derive(Clone, Debug)]
pub struct Coproduct {
    pub category: Arc<FinCategory>,
    pub left: Functor,
    pub right: Functor,
}

fn tuple_name<'a>(parts: impl Iterator<Item = &'a str>) -> String {
    format!("({})", parts.collect::<Vec<_>>().join(","))
}

/// The product of a family of categories, indexed in mixed radix.
fn product_of(factors: &[&FinCategory]) -> FinCategory {
    let obj_radix: Vec<usize> = factors.iter().map(|c| c.object_count()).collect();
    let mor_radix: Vec<usize> = factors.iter().map(|c| c.morphism_count()).collect();
    let objects: Vec<String> = tuples(&obj_radix)
        .map(|t| tuple_name(t.iter().zip(factors).map(|(&o, c)| c.object_id(Obj(o)))))
        .collect();
    let rank = |radix: &[usize], t: &[usize]| t.iter().zip(radix).fold(0, |acc, (&x, &r)| acc * r + x);
    let morphisms: Vec<MorphismInfo> = tuples(&mor_radix)
        .map(|t| {
            let dom: Vec<usize> = t.iter().zip(factors).map(|(&m, c)| c.dom(Mor(m)).0).collect();
            let cod: Vec<usize> = t.iter().zip(factors).map(|(&m, c)| c.cod(Mor(m)).0).collect();
            MorphismInfo {
                id: tuple_name(t.iter().zip(factors).map(|(&m, c)| c.morphism_id(Mor(m)))),
                dom: Obj(rank(&obj_radix, &dom)),
                cod: Obj(rank(&obj_radix, &cod)),
            }
        })
        .collect();
    let identities = tuples(&obj_radix)
        .map(|t| {
            let ids: Vec<usize> = t.iter().zip(factors).map(|(&o, c)| c.identity(Obj(o)).0).collect();
            Mor(rank(&mor_radix, &ids))
        })
        .collect();
    let decode = |mut k: usize| {
        let mut out = vec![0; mor_radix.len()];
        for i in (0..mor_radix.len()).rev() {
            out[i] = k % mor_radix[i];
            k /= mor_radix[i];
        }
        out
    };
    FinCategory::from_parts(objects, morphisms, identities, |g, f| {
        let (gs, fs) = (decode(g.0), decode(f.0));
        let r: Vec<usize> = factors
            .iter()
            .enumerate()
            .map(|(i, c)| c.compose(Mor(gs[i]), Mor(fs[i])).0)
            .collect();
        Mor(rank(&mor_radix, &r))
    })
}

/// All tuples below `radix`, in lexicographic order.
pub(crate) fn tuples(radix: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    let total: usize = radix.iter().product();
    (0..total).map(move |mut k| {
        let mut out = vec![0; radix.len()];
        for i in (0..radix.len()).rev() {
            out[i] = k % radix[i];
            k /= radix[i];
        }
        out
    })
}

pub fn product_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> Product {
    let category = Arc::new(product_of(&[a, b]));
    let (na, nb) = (a.object_count(), b.object_count());
    let (ma, mb) = (a.morphism_count(), b.morphism_count());
    let left = Functor::new_unchecked(
        category.clone(),
        a.clone(),
        (0..na * nb).map(|k| Obj(k / nb)).collect(),
        (0..ma * mb).map(|k| Mor(k / mb)).collect(),
    );
    let right = Functor::new_unchecked(
        category.clone(),
        b.clone(),
        (0..na * nb).map(|k| Obj(k % nb)).collect(),
        (0..ma * mb).map(|k| Mor(k % mb)).collect(),
    );
    Product {
        category,
        left,
        right,
    }
}

pub fn power_category(base: &Arc<FinCategory>, arity: usize) -> Power {
    let factors: Vec<&FinCategory> = std::iter::repeat(&**base).take(arity).collect();
    Power {
        category: Arc::new(product_of(&factors)),
        base: base.clone(),
        arity,
    }
}

impl Power {
    pub fn encode_objects(&self, t: &[Obj]) -> Obj {
        let n = self.base.object_count();
        Obj(t.iter().fold(0, |acc, o| acc * n + o.0))
    }

    pub fn encode_morphisms(&self, t: &[Mor]) -> Mor {
        let n = self.base.morphism_count();
        Mor(t.iter().fold(0, |acc, m| acc * n + m.0))
    }

    pub fn decode_object(&self, o: Obj) -> Vec<Obj> {
        decode(o.0, self.base.object_count(), self.arity).into_iter().map(Obj).collect()
    }

    pub fn decode_morphism(&self, m: Mor) -> Vec<Mor> {
        decode(m.0, self.base.morphism_count(), self.arity).into_iter().map(Mor).collect()
    }

    /// The `i`-th projection (0-based).
    pub fn projection(&self, i: usize) -> Functor {
        Functor::new_unchecked(
            self.category.clone(),
            self.base.clone(),
            self.category.object_indices().map(|o| self.decode_object(o)[i]).collect(),
            self.category.morphism_indices().map(|m| self.decode_morphism(m)[i]).collect(),
        )
    }
}

fn decode(mut k: usize, radix: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut().rev() {
        *slot = k % radix;
        k /= radix;
    }
    out
}

/// Disjoint union; ids are tagged `l.` and `r.` so they stay distinct.
pub fn coproduct_category(a: &Arc<FinCategory>, b: &Arc<FinCategory>) -> Coproduct {
    let (na, ma) = (a.object_count(), a.morphism_count());
    let objects = a
        .object_ids()
        .iter()
        .map(|o| format!("l.{o}"))
        .chain(b.object_ids().iter().map(|o| format!("r.{o}")))
        .collect();
    let morphisms = a
        .morphism_indices()
        .map(|m| MorphismInfo {
            id: format!("l.{}", a.morphism_id(m)),
            dom: a.dom(m),
            cod: a.cod(m),
        })
        .chain(b.morphism_indices().map(|m| MorphismInfo {
            id: format!("r.{}", b.morphism_id(m)),
            dom: Obj(b.dom(m).0 + na),
            cod: Obj(b.cod(m).0 + na),
        }))
        .collect();
    let identities = a
        .object_indices()
        .map(|o| a.identity(o))
        .chain(b.object_indices().map(|o| Mor(b.identity(o).0 + ma)))
        .collect();
    let category = Arc::new(FinCategory::from_parts(objects, morphisms, identities, |g, f| {
        if g.0 < ma {
            a.compose(g, f)
        } else {
            Mor(b.compose(Mor(g.0 - ma), Mor(f.0 - ma)).0 + ma)
        }
    }));
    let left = Functor::new_unchecked(
        a.clone(),
        category.clone(),
        a.object_indices().collect(),
        a.morphism_indices().collect(),
    );
    let right = Functor::new_unchecked(
        b.clone(),
        category.clone(),
        b.object_indices().map(|o| Obj(o.0 + na)).collect(),
        b.morphism_indices().map(|m| Mor(m.0 + ma)).collect(),
    );
    Coproduct {
        category,
        left,
        right,
    }
}

/// `[f, g]: A + B → C`.
pub fn copair(coproduct: &Coproduct, f: &Functor, g: &Functor) -> Result<Functor> {
    if !same_category(f.source(), coproduct.left.source())
        || !same_category(g.source(), coproduct.right.source())
        || !same_category(f.target(), g.target())
    {
        return Err(Error::BoundaryMismatch("copair legs do not match the coproduct".into()));
    }
    Ok(Functor::new_unchecked(
        coproduct.category.clone(),
        f.target().clone(),
        f.object_map().iter().chain(g.object_map()).copied().collect(),
        f.morphism_map().iter().chain(g.morphism_map()).copied().collect(),
    ))
}

impl Coproduct {
    /// `[α, β]` between copairs of the boundaries of `α` and `β`.
    pub fn copair_nat(&self, alpha: &NatTransformation, beta: &NatTransformation) -> Result<NatTransformation> {
        let from = copair(self, alpha.from(), beta.from())?;
        let to = copair(self, alpha.to(), beta.to())?;
        let components = alpha.components().iter().chain(beta.components()).copied().collect();
        Ok(NatTransformation::new_unchecked(from, to, components))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{classify, named};

    #[test]
    fn product_with_the_point_is_trivial() {
        for a in [named::arrow(), named::parallel(), named::chain3()] {
            let p = product_category(&a, &named::terminal());
            assert_eq!(p.category.object_count(), a.object_count());
            assert_eq!(p.category.morphism_count(), a.morphism_count());
            assert!(p.left.is_isomorphism());
        }
    }

    #[test]
    fn arrow_squared_has_nine_morphisms() {
        let two = named::arrow();
        let p = product_category(&two, &two);
        assert_eq!(p.category.object_count(), 4);
        assert_eq!(p.category.morphism_count(), 9);
        p.category.revalidate().unwrap();
    }

    #[test]
    fn discrete_products_stay_discrete() {
        let d = named::discrete2();
        let p = product_category(&d, &d);
        assert!(p.category.is_discrete());
        assert_eq!(p.category.object_count(), 4);
    }

    #[test]
    fn coproduct_counts() {
        let one = named::terminal();
        let c = coproduct_category(&one, &one);
        assert!(c.category.is_discrete());
        assert_eq!(c.category.object_count(), 2);
        let e = coproduct_category(&named::chain3(), &named::empty());
        assert!(e.left.is_isomorphism());
        let s = coproduct_category(&named::arrow(), &named::parallel());
        assert_eq!(s.category.object_count(), 4);
        let non_identity = s.category.morphism_indices().filter(|&m| !s.category.is_identity(m)).count();
        assert_eq!(non_identity, 3);
        assert!(classify(&s.left).ioff && classify(&s.right).ioff);
    }

    #[test]
    fn power_indexing_is_lexicographic() {
        let z = named::z2_pair();
        let p = power_category(&z, 3);
        assert_eq!(p.category.object_count(), 8);
        assert_eq!(p.category.morphism_count(), 64);
        let t = [Obj(1), Obj(0), Obj(1)];
        assert_eq!(p.encode_objects(&t), Obj(5));
        assert_eq!(p.decode_object(Obj(5)), t);
        assert_eq!(p.category.object_id(Obj(5)), "(1,0,1)");
        assert_eq!(p.projection(2).obj(Obj(5)), Obj(1));
        p.category.revalidate().unwrap();
        let zero = power_category(&z, 0);
        assert_eq!(zero.category.object_count(), 1);
    }

    #[test]
    fn copair_of_injections_is_the_identity() {
        let c = coproduct_category(&named::arrow(), &named::z2());
        assert!(copair(&c, &c.left, &c.right).unwrap().is_identity());
    }
}
