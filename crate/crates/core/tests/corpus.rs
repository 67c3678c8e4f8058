use std::fs;
use std::path::PathBuf;

use birkhoff_core::fincat::named;
use birkhoff_core::theory::catalog;
use birkhoff_core::workspace::*;
use birkhoff_core::Error;

fn corpus() -> PathBuf {
    corpus_dir()
}

#[test]
fn categories_match_the_named_builders() {
    let mut ws = Workspace::new(corpus());
    let expected = [
        ("chain3", named::chain3()),
        ("discrete2", named::discrete2()),
        ("empty", named::empty()),
        ("idem", named::idempotent()),
        ("one", named::terminal()),
        ("parallel", named::parallel()),
        ("two", named::arrow()),
        ("z2", named::z2()),
        ("z2_pair", named::z2_pair()),
    ];
    let loaded = ws.categories_in("categories").unwrap();
    assert_eq!(loaded.len(), expected.len());
    for ((name, c), (n, e)) in loaded.iter().zip(&expected) {
        assert_eq!(name, n);
        assert_eq!(**c, **e, "{name}");
    }
}

#[test]
fn catalog_matches_the_builders() {
    let mut ws = Workspace::new(corpus());
    let pres = catalog::monoidal();
    assert_eq!(*ws.presentation("theory/monoidal.json").unwrap(), *pres);
    assert_eq!(ws.extension("theory/coherence.json").unwrap(), catalog::coherence(&pres));
    assert_eq!(ws.extension("theory/pentagon.json").unwrap(), catalog::pentagon_only(&pres));
    let loaded = ws.catalog("monoidal").unwrap();
    let mut built = catalog::all(&pres);
    built.sort_by(|a, b| a.name.cmp(&b.name));
    assert_eq!(loaded.len(), built.len());
    for (l, b) in loaded.iter().zip(&built) {
        assert_eq!(l.name, b.name);
        assert_eq!(**l, **b, "{}", l.name);
    }
}

#[test]
fn references_are_shared() {
    let mut ws = Workspace::new(corpus());
    let a = ws.algebra("monoidal/sigma_assoc.json").unwrap();
    let b = ws.algebra("monoidal/strict_xor_z2.json").unwrap();
    assert!(std::sync::Arc::ptr_eq(a.carrier(), b.carrier()));
    assert!(std::sync::Arc::ptr_eq(a.presentation(), b.presentation()));
}

#[test]
fn every_file_round_trips() {
    let root = corpus();
    let mut ws = Workspace::new(&root);
    let dir = tempfile::tempdir().unwrap();
    let tmp = dir.path().to_path_buf();
    for (name, c) in ws.categories_in("categories").unwrap() {
        let out = tmp.join(format!("{name}.json"));
        write_json(&out, &category_json(&c)).unwrap();
        assert_eq!(*Workspace::new(&tmp).category(&out).unwrap(), *c);
    }
    let collapse = ws.functor("functors/collapse.json").unwrap();
    let out = tmp.join("collapse.json");
    write_json(&out, &functor_json(&collapse, "parallel.json", "two.json")).unwrap();
    assert_eq!(Workspace::new(&tmp).functor(&out).unwrap(), collapse);
    for a in ws.catalog("monoidal").unwrap() {
        let text = fs::read_to_string(root.join(format!("monoidal/{}.json", a.name))).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        let again = algebra_json(&a, v["presentation"].as_str().unwrap(), v["carrier"].as_str().unwrap());
        assert_eq!(v, again, "{}", a.name);
    }
    let (phi, psi) = ws.coequifier("coequifiers/parallel_pair.json").unwrap();
    assert_eq!(phi.source_category().object_count(), 1);
    assert_ne!(phi, psi);
}

#[test]
fn audit_inputs_load() {
    let mut ws = Workspace::new(corpus());
    let subs = ws.sub_witnesses("audit/subs.json").unwrap();
    assert_eq!(subs.len(), 7);
    let refl = ws.refl_specs("audit/refl.json").unwrap();
    assert_eq!(refl.len(), 5);
    assert!(refl[2].generators.is_empty());
}

#[test]
fn broken_files_are_reported_with_their_path() {
    let dir = tempfile::tempdir().unwrap();
    let tmp = dir.path().to_path_buf();
    let bad = tmp.join("bad.json");
    fs::write(&bad, "{\"objects\": [\"a\"], \"morphisms\": [], \"identities\": {}}").unwrap();
    match Workspace::new(&tmp).category(&bad) {
        Err(Error::Parse { path, message }) => {
            assert!(path.ends_with("bad.json"));
            assert!(message.contains("identity"), "{message}");
        }
        other => panic!("{other:?}"),
    }
    assert!(matches!(Workspace::new(&tmp).category("missing.json"), Err(Error::Io { .. })));
}
