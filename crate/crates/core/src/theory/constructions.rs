//! Products, subalgebras, quotients and reflexive coequifiers of algebras.

use std::sync::Arc;

use super::algebra::{all_tuples, rank, Algebra, OpTable};
use super::hom::{is_algebra_two_cell, AlgebraHom};
use crate::error::{Error, Result};
use crate::fincat::{
    classify, congruence_closure, product_category, quotient_by_congruence, same_category,
    saturate, whisker, Congruence, Functor, Mor, NatTransformation, Obj, Side, UnionFind,
};
use crate::kernel::{bof_kernel_indexed, coequify};

fn objs(t: Vec<usize>) -> Vec<Obj> {
    t.into_iter().map(Obj).collect()
}

fn mors(t: Vec<usize>) -> Vec<Mor> {
    t.into_iter().map(Mor).collect()
}

#[derive(Clone, Debug)]
pub struct ProductAlgebra {
    pub algebra: Arc<Algebra>,
    pub left: AlgebraHom,
    pub right: AlgebraHom,
}

/// Componentwise structure on the product of the carriers.
pub fn product_algebra(a: &Arc<Algebra>, b: &Arc<Algebra>) -> Result<ProductAlgebra> {
    if **a.presentation() != **b.presentation() {
        return Err(Error::SignatureMismatch(format!(
            "{} and {} are algebras for different presentations",
            a.name, b.name
        )));
    }
    let product = product_category(a.carrier(), b.carrier());
    let (ca, cb) = (a.carrier(), b.carrier());
    let (no, nm) = (product.category.object_count(), product.category.morphism_count());
    let (nbo, nbm) = (cb.object_count(), cb.morphism_count());
    let split_o = |t: &[usize]| -> (Vec<Obj>, Vec<Obj>) {
        (t.iter().map(|&k| Obj(k / nbo)).collect(), t.iter().map(|&k| Obj(k % nbo)).collect())
    };
    let split_m = |t: &[usize]| -> (Vec<Mor>, Vec<Mor>) {
        (t.iter().map(|&k| Mor(k / nbm)).collect(), t.iter().map(|&k| Mor(k % nbm)).collect())
    };
    let ops = (0..a.op_tables().len())
        .map(|k| {
            let arity = a.op_tables()[k].arity;
            let objects = all_tuples(no, arity)
                .map(|t| {
                    let (l, r) = split_o(&t);
                    Obj(a.op_obj(k, &l).0 * nbo + b.op_obj(k, &r).0)
                })
                .collect();
            let morphisms = all_tuples(nm, arity)
                .map(|t| {
                    let (l, r) = split_m(&t);
                    Mor(a.op_mor(k, &l).0 * nbm + b.op_mor(k, &r).0)
                })
                .collect();
            OpTable {
                arity,
                objects,
                morphisms,
            }
        })
        .collect();
    let gens = a
        .presentation()
        .generators
        .iter()
        .enumerate()
        .map(|(k, g)| {
            all_tuples(no, g.arity)
                .map(|t| {
                    let (l, r) = split_o(&t);
                    Mor(a.component(k, &l).0 * nbm + b.component(k, &r).0)
                })
                .collect()
        })
        .collect();
    debug_assert_eq!(ca.morphism_count() * nbm, nm);
    let algebra = Arc::new(Algebra::new_unchecked(
        &format!("{}×{}", a.name, b.name),
        a.presentation().clone(),
        product.category.clone(),
        ops,
        gens,
    ));
    Ok(ProductAlgebra {
        left: AlgebraHom::new_unchecked(algebra.clone(), a.clone(), product.left),
        right: AlgebraHom::new_unchecked(algebra.clone(), b.clone(), product.right),
        algebra,
    })
}

/// Transfers the structure of `a` along a faithful `m` into its carrier,
/// when the operations and generator components restrict. Where `m` is not
/// injective on objects the least object of the fibre is chosen.
pub fn subalgebra_check(m: &Functor, a: &Arc<Algebra>) -> Result<Arc<Algebra>> {
    if !same_category(m.target(), a.carrier()) {
        return Err(Error::BoundaryMismatch(format!(
            "functor does not land in the carrier of {}",
            a.name
        )));
    }
    if !classify(m).faithful {
        return Err(Error::NotFaithful(format!("the inclusion into {} is not faithful", a.name)));
    }
    let s = m.source();
    let (no, nm) = (s.object_count(), s.morphism_count());
    let names_o = |t: &[Obj]| t.iter().map(|&o| s.object_id(o)).collect::<Vec<_>>().join(", ");
    let names_m = |t: &[Mor]| t.iter().map(|&f| s.morphism_id(f)).collect::<Vec<_>>().join(", ");
    let preimage_obj = |y: Obj| s.object_indices().find(|&x| m.obj(x) == y);
    let mut ops = Vec::new();
    for (k, op) in a.presentation().signature.operations.iter().enumerate() {
        let mut objects = Vec::new();
        for t in all_tuples(no, op.arity) {
            let t = objs(t);
            let image: Vec<Obj> = t.iter().map(|&o| m.obj(o)).collect();
            objects.push(preimage_obj(a.op_obj(k, &image)).ok_or_else(|| {
                Error::NotClosedUnderOperations {
                    operation: op.name.clone(),
                    tuple: names_o(&t),
                }
            })?);
        }
        let mut morphisms = Vec::new();
        for t in all_tuples(nm, op.arity) {
            let t = mors(t);
            let image: Vec<Mor> = t.iter().map(|&f| m.mor(f)).collect();
            let target = a.op_mor(k, &image);
            let dom = objects[rank(no, t.iter().map(|&f| s.dom(f).0))];
            let cod = objects[rank(no, t.iter().map(|&f| s.cod(f).0))];
            let found = s.hom(dom, cod).iter().copied().find(|&f| m.mor(f) == target);
            morphisms.push(found.ok_or_else(|| Error::NotClosedUnderOperations {
                operation: op.name.clone(),
                tuple: names_m(&t),
            })?);
        }
        ops.push(OpTable {
            arity: op.arity,
            objects,
            morphisms,
        });
    }
    let partial = Algebra::partial(a.presentation().clone(), s.clone(), ops.clone());
    let mut gens = Vec::new();
    for (k, g) in a.presentation().generators.iter().enumerate() {
        let mut comps = Vec::new();
        for t in all_tuples(no, g.arity) {
            let t = objs(t);
            let image: Vec<Obj> = t.iter().map(|&o| m.obj(o)).collect();
            let c = a.component(k, &image);
            let (dom, cod) = (partial.eval_obj(&g.source, &t)?, partial.eval_obj(&g.target, &t)?);
            let found = s.hom(dom, cod).iter().copied().find(|&f| m.mor(f) == c);
            comps.push(found.ok_or_else(|| Error::GeneratorComponentEscapes {
                generator: g.name.clone(),
                tuple: names_o(&t),
            })?);
        }
        gens.push(comps);
    }
    let sub = Arc::new(Algebra::new(
        &format!("sub({})", a.name),
        a.presentation().clone(),
        s.clone(),
        ops,
        gens,
    )?);
    // The inclusion is a homomorphism by construction.
    AlgebraHom::new(sub.clone(), a.clone(), m.clone())?;
    Ok(sub)
}

/// First pair `op(.., u, ..)`, `op(.., v, ..)` with `u ~ v` whose images are
/// not related.
fn operation_violation(a: &Algebra, cong: &Congruence) -> Option<(usize, Vec<Mor>, Vec<Mor>)> {
    let c = a.carrier();
    let nm = c.morphism_count();
    let classes = cong.classes();
    for (k, table) in a.op_tables().iter().enumerate() {
        for t in all_tuples(nm, table.arity) {
            let t = mors(t);
            for i in 0..table.arity {
                let class = classes.iter().find(|cl| cl.contains(&t[i])).expect("classes cover");
                for &v in class {
                    if v == t[i] {
                        continue;
                    }
                    let mut u = t.clone();
                    u[i] = v;
                    if !cong.related(a.op_mor(k, &t), a.op_mor(k, &u)) {
                        return Some((k, t, u));
                    }
                }
            }
        }
    }
    None
}

/// Quotient of `a` by a congruence that is closed under every operation.
pub fn quotient_algebra(a: &Arc<Algebra>, cong: &Congruence) -> Result<(Arc<Algebra>, AlgebraHom)> {
    if !same_category(cong.base(), a.carrier()) {
        return Err(Error::BoundaryMismatch(format!(
            "congruence is not on the carrier of {}",
            a.name
        )));
    }
    cong.validate()?;
    if let Some((k, t, u)) = operation_violation(a, cong) {
        let name = &a.presentation().signature.operations[k].name;
        let c = a.carrier();
        return Err(Error::NotOperationClosed {
            operation: name.clone(),
            detail: format!(
                "{name}({}) = {} and {name}({}) = {} are not related",
                a.mor_names(&t),
                c.morphism_id(a.op_mor(k, &t)),
                a.mor_names(&u),
                c.morphism_id(a.op_mor(k, &u))
            ),
        });
    }
    let q = quotient_by_congruence(cong);
    let p = &q.projection;
    let base = a.carrier();
    let nm = q.category.morphism_count();
    let mut section = vec![Mor(0); nm];
    for m in (0..base.morphism_count()).rev().map(Mor) {
        section[p.mor(m).0] = m;
    }
    let ops = a
        .op_tables()
        .iter()
        .enumerate()
        .map(|(k, table)| OpTable {
            arity: table.arity,
            objects: table.objects.clone(),
            morphisms: all_tuples(nm, table.arity)
                .map(|t| {
                    let lifted: Vec<Mor> = t.into_iter().map(|m| section[m]).collect();
                    p.mor(a.op_mor(k, &lifted))
                })
                .collect(),
        })
        .collect();
    let gens = a
        .generator_tables()
        .iter()
        .map(|comps| comps.iter().map(|&m| p.mor(m)).collect())
        .collect();
    let quotient = Arc::new(Algebra::new(
        &format!("{}/~", a.name),
        a.presentation().clone(),
        q.category.clone(),
        ops,
        gens,
    )?);
    let h = AlgebraHom::new(a.clone(), quotient.clone(), q.projection.clone())?;
    Ok((quotient, h))
}

/// Smallest congruence containing the pairs and closed under composition
/// and under every operation, by alternating the two closure rules.
pub fn algebra_congruence_closure(a: &Algebra, generators: &[(Mor, Mor)]) -> Result<Congruence> {
    let c = a.carrier();
    let mut cong = congruence_closure(c, generators)?;
    loop {
        let Some((k, t, u)) = operation_violation(a, &cong) else {
            return Ok(cong);
        };
        let mut uf = UnionFind::new(c.morphism_count());
        for m in c.morphism_indices() {
            uf.union(m.0, cong.representative(m).0);
        }
        uf.union(a.op_mor(k, &t).0, a.op_mor(k, &u).0);
        // Merge every pending violation of this round, not just the first.
        let nm = c.morphism_count();
        for (j, table) in a.op_tables().iter().enumerate() {
            for x in all_tuples(nm, table.arity) {
                let x = mors(x);
                for i in 0..table.arity {
                    for y in c.hom(c.dom(x[i]), c.cod(x[i])) {
                        if cong.related(*y, x[i]) {
                            let mut z = x.clone();
                            z[i] = *y;
                            uf.union(a.op_mor(j, &x).0, a.op_mor(j, &z).0);
                        }
                    }
                }
            }
        }
        cong = saturate(c, uf);
    }
}

/// A reflexive pair of algebra 2-cells `phi, psi: s ⇒ t` between
/// homomorphisms `K → A`, with a common section `A → K`.
#[derive(Clone, Debug)]
pub struct ReflexiveAlgebraData {
    pub apex: Arc<Algebra>,
    pub s: AlgebraHom,
    pub t: AlgebraHom,
    pub phi: NatTransformation,
    pub psi: NatTransformation,
    pub section: AlgebraHom,
}

impl ReflexiveAlgebraData {
    pub fn base(&self) -> &Arc<Algebra> {
        self.s.target()
    }

    /// `s i = t i = 1` and `phi ∗ i = psi ∗ i = 1`, with both 2-cells
    /// algebra 2-cells.
    pub fn check(&self) -> Result<()> {
        let i = &self.section;
        let bad = |msg: &str| Err(Error::BoundaryMismatch(format!("reflexive pair: {msg}")));
        if !self.s.after(i)?.underlying().is_identity() || !self.t.after(i)?.underlying().is_identity() {
            return bad("the section is not a common section of s and t");
        }
        for (name, cell) in [("phi", &self.phi), ("psi", &self.psi)] {
            if !is_algebra_two_cell(cell, &self.s, &self.t)? {
                return bad(&format!("{name} is not an algebra 2-cell s ⇒ t"));
            }
            if !whisker(i.underlying(), cell, Side::Right)?.is_identity() {
                return bad(&format!("{name} does not restrict to the identity along the section"));
            }
        }
        Ok(())
    }
}

/// The kernel of a homomorphism `h: A → B` as reflexive algebra data: the
/// apex has the parallel pairs identified by `h` as objects, with the
/// structure of `A` applied to both legs.
pub fn algebra_kernel(h: &AlgebraHom) -> Result<ReflexiveAlgebraData> {
    let a = h.source();
    let (kd, index) = bof_kernel_indexed(h.underlying());
    let kc = kd.apex().clone();
    let (no, nm) = (kc.object_count(), kc.morphism_count());
    let lost = || Error::InvalidAlgebra("kernel is not closed under the operations".into());
    let mut ops = Vec::new();
    for (k, table) in a.op_tables().iter().enumerate() {
        let mut objects = Vec::new();
        for t in all_tuples(no, table.arity) {
            let (us, vs): (Vec<Mor>, Vec<Mor>) = t.iter().map(|&x| index.pairs[x]).unzip();
            objects.push(index.object(a.op_mor(k, &us), a.op_mor(k, &vs)).ok_or_else(lost)?);
        }
        let mut morphisms = Vec::new();
        for t in all_tuples(nm, table.arity) {
            let t = mors(t);
            let ps: Vec<Mor> = t.iter().map(|&m| kd.s.mor(m)).collect();
            let qs: Vec<Mor> = t.iter().map(|&m| kd.t.mor(m)).collect();
            let dom = objects[rank(no, t.iter().map(|&m| kc.dom(m).0))];
            let cod = objects[rank(no, t.iter().map(|&m| kc.cod(m).0))];
            morphisms.push(
                index
                    .morphism(dom, cod, a.op_mor(k, &ps), a.op_mor(k, &qs))
                    .ok_or_else(lost)?,
            );
        }
        ops.push(OpTable {
            arity: table.arity,
            objects,
            morphisms,
        });
    }
    let partial = Algebra::partial(a.presentation().clone(), kc.clone(), ops.clone());
    let mut gens = Vec::new();
    for (k, g) in a.presentation().generators.iter().enumerate() {
        let mut comps = Vec::new();
        for t in all_tuples(no, g.arity) {
            let t = objs(t);
            let doms: Vec<Obj> = t.iter().map(|&x| kd.s.obj(x)).collect();
            let cods: Vec<Obj> = t.iter().map(|&x| kd.t.obj(x)).collect();
            let (x, y) = (partial.eval_obj(&g.source, &t)?, partial.eval_obj(&g.target, &t)?);
            comps.push(
                index
                    .morphism(x, y, a.component(k, &doms), a.component(k, &cods))
                    .ok_or_else(lost)?,
            );
        }
        gens.push(comps);
    }
    let apex = Arc::new(Algebra::new(
        &format!("ker({})", a.name),
        a.presentation().clone(),
        kc.clone(),
        ops,
        gens,
    )?);
    let base = a.carrier();
    let section = Functor::new(
        a.carrier().clone(),
        kc.clone(),
        base.object_indices()
            .map(|x| {
                let one = base.identity(x);
                index.object(one, one).ok_or_else(lost)
            })
            .collect::<Result<_>>()?,
        base.morphism_indices()
            .map(|g| {
                let one = |o| index.object(base.identity(o), base.identity(o));
                let (x, y) = (one(base.dom(g)).ok_or_else(lost)?, one(base.cod(g)).ok_or_else(lost)?);
                index.morphism(x, y, g, g).ok_or_else(lost)
            })
            .collect::<Result<_>>()?,
    )?;
    let data = ReflexiveAlgebraData {
        s: AlgebraHom::new(apex.clone(), a.clone(), kd.s.clone())?,
        t: AlgebraHom::new(apex.clone(), a.clone(), kd.t.clone())?,
        section: AlgebraHom::new(a.clone(), apex.clone(), section)?,
        phi: kd.phi,
        psi: kd.psi,
        apex,
    };
    data.check()?;
    Ok(data)
}

/// Coequifies the carriers and lifts the structure of the base along the
/// quotient. The lift exists and is unique; a failure is a bug.
pub fn reflexive_coequifier_algebra(data: &ReflexiveAlgebraData) -> Result<(Arc<Algebra>, AlgebraHom)> {
    data.check()?;
    let a = data.base();
    let gens: Vec<(Mor, Mor)> = data
        .apex
        .carrier()
        .object_indices()
        .map(|k| (data.phi.component(k), data.psi.component(k)))
        .collect();
    let cong = congruence_closure(a.carrier(), &gens)?;
    let carrier_level = coequify(&data.phi, &data.psi)?;
    let lifted = quotient_algebra(a, &cong).map_err(|e| Error::LiftFailure(e.to_string()))?;
    if *lifted.0.carrier().as_ref() != *carrier_level.category {
        return Err(Error::LiftFailure("lifted carrier differs from the coequifier".into()));
    }
    Ok(lifted)
}
