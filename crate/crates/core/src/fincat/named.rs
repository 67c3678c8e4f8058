//! The small named categories the corpus is built from.

use std::sync::Arc;

use super::category::{CategoryBuilder, FinCategory};
use super::functor::Functor;

fn build(b: CategoryBuilder) -> Arc<FinCategory> {
    Arc::new(b.build().expect("named category is valid"))
}

/// `∅`.
pub fn empty() -> Arc<FinCategory> {
    build(CategoryBuilder::new())
}

/// `1`: one object `*`.
pub fn terminal() -> Arc<FinCategory> {
    build(CategoryBuilder::new().object("*"))
}

/// `2`: a single arrow `u: a → b`.
pub fn arrow() -> Arc<FinCategory> {
    arrow_named("a", "b", "u")
}

pub fn arrow_named(a: &str, b: &str, u: &str) -> Arc<FinCategory> {
    build(CategoryBuilder::new().object(a).object(b).morphism(u, a, b))
}

/// `P`: two parallel arrows `u, v: a → b`.
pub fn parallel() -> Arc<FinCategory> {
    build(
        CategoryBuilder::new()
            .object("a")
            .object("b")
            .morphism("u", "a", "b")
            .morphism("v", "a", "b"),
    )
}

/// `D2`: two objects, identities only.
pub fn discrete2() -> Arc<FinCategory> {
    discrete(&["a", "b"])
}

pub fn discrete(objects: &[&str]) -> Arc<FinCategory> {
    build(
        objects
            .iter()
            .fold(CategoryBuilder::new(), |b, o| b.object(o)),
    )
}

/// `Z2`: one object `*` with an involution `s`.
pub fn z2() -> Arc<FinCategory> {
    build(
        CategoryBuilder::new()
            .object("*")
            .morphism("s", "*", "*")
            .compose("s", "s", "id_*"),
    )
}

/// Two objects `0`, `1`, each with an involution (`s0`, `s1`), no cross arrows.
pub fn z2_pair() -> Arc<FinCategory> {
    build(
        CategoryBuilder::new()
            .object("0")
            .object("1")
            .morphism("s0", "0", "0")
            .morphism("s1", "1", "1")
            .compose("s0", "s0", "id_0")
            .compose("s1", "s1", "id_1"),
    )
}

/// `3`: the chain `a → b → c`.
pub fn chain3() -> Arc<FinCategory> {
    build(
        CategoryBuilder::new()
            .object("a")
            .object("b")
            .object("c")
            .morphism("f", "a", "b")
            .morphism("g", "b", "c")
            .morphism("gf", "a", "c")
            .compose("g", "f", "gf"),
    )
}

/// One object with an idempotent `e`.
pub fn idempotent() -> Arc<FinCategory> {
    build(
        CategoryBuilder::new()
            .object("*")
            .morphism("e", "*", "*")
            .compose("e", "e", "e"),
    )
}

/// The collapse `P ↠ 2` sending both `u` and `v` to `u`.
pub fn collapse() -> Functor {
    let (p, two) = (parallel(), arrow());
    let u = two.morphism("u").unwrap();
    let on_morphisms = p
        .morphism_indices()
        .map(|m| match p.morphism_id(m) {
            "u" | "v" => u,
            id => two.morphism(id).unwrap(),
        })
        .collect();
    Functor::new(p, two, vec![super::Obj(0), super::Obj(1)], on_morphisms).unwrap()
}
