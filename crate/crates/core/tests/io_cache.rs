mod common;

use std::fs;

use kkhecke::hecke::{double_coset_reps, SearchOptions};
use kkhecke::io::cache::{ArtifactKind, Cache, CacheEntry, Lookup, MissReason};
use kkhecke::io::format::{load_hecke, load_subgroup};
use serde_json::json;

use common::data;

fn rewrite_entry(cache: &Cache, kind: ArtifactKind, key: &str, edit: impl FnOnce(&mut CacheEntry)) {
    let path = cache.path_for(kind, key);
    let mut entry: CacheEntry = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    edit(&mut entry);
    fs::write(&path, serde_json::to_string(&entry).unwrap()).unwrap();
}

#[test]
fn coset_table_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let sub = load_subgroup(&data("gamma0_11.json")).unwrap();
    let table = sub.model.table();
    assert!(matches!(cache.load_coset_table(&sub.fingerprint, sub.model.ambient()), Lookup::Miss(MissReason::Absent)));
    cache.store_coset_table(&sub.fingerprint, table).unwrap();
    let back = cache.load_coset_table(&sub.fingerprint, sub.model.ambient()).hit().unwrap();
    assert_eq!(&back, table);
    assert_eq!(back.index(), 12);
}

#[test]
fn edited_payload_is_a_hash_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let sub = load_subgroup(&data("gamma0_11.json")).unwrap();
    cache.store_coset_table(&sub.fingerprint, sub.model.table()).unwrap();
    rewrite_entry(&cache, ArtifactKind::CosetTable, &sub.fingerprint, |e| {
        let old = e.payload[0][0].as_u64().unwrap();
        e.payload[0][0] = json!(old % 12 + 1);
    });
    let got = cache.load_coset_table(&sub.fingerprint, sub.model.ambient());
    assert!(matches!(got, Lookup::Miss(MissReason::HashMismatch)), "{got:?}");
}

#[test]
fn consistent_but_wrong_table_fails_revalidation() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let sub = load_subgroup(&data("gamma0_11.json")).unwrap();
    let mut perms = sub.model.table().to_one_based();
    // Swap two images of the first generator: still a permutation, but the
    // relators no longer close.
    let p = &mut perms[0];
    let (a, b) = (0, p.iter().position(|&x| x != p[0]).unwrap());
    p.swap(a, b);
    cache.store_raw(ArtifactKind::CosetTable, &sub.fingerprint, json!(perms)).unwrap();
    let got = cache.load_coset_table(&sub.fingerprint, sub.model.ambient());
    assert!(matches!(got, Lookup::Miss(MissReason::Invalid(_))), "{got:?}");

    cache.store_raw(ArtifactKind::CosetTable, &sub.fingerprint, json!([[1, 1, 2]])).unwrap();
    let got = cache.load_coset_table(&sub.fingerprint, sub.model.ambient());
    assert!(matches!(got, Lookup::Miss(MissReason::Invalid(_))), "{got:?}");
}

#[test]
fn stale_version_recomputes_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let sub = load_subgroup(&data("gamma0_11.json")).unwrap();
    cache.store_coset_table(&sub.fingerprint, sub.model.table()).unwrap();
    rewrite_entry(&cache, ArtifactKind::CosetTable, &sub.fingerprint, |e| {
        e.tool_version = "0.0.0-old".into();
    });
    match cache.load_coset_table(&sub.fingerprint, sub.model.ambient()) {
        Lookup::Miss(MissReason::VersionMismatch(v)) => assert_eq!(v, "0.0.0-old"),
        other => panic!("expected a version miss, got {other:?}"),
    }
    let again = load_subgroup(&data("gamma0_11.json")).unwrap();
    cache.store_coset_table(&again.fingerprint, again.model.table()).unwrap();
    let back = cache.load_coset_table(&again.fingerprint, again.model.ambient()).hit().unwrap();
    assert_eq!(&back, sub.model.table());
}

#[test]
fn decomposition_reload_passes_disjointness() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let sub = load_subgroup(&data("gamma0_11.json")).unwrap();
    let t2 = load_hecke(&data("t2.json")).unwrap();
    let d = double_coset_reps(&sub.model, &t2, &SearchOptions::default()).unwrap();
    cache.store_decomposition(&sub.fingerprint, &d).unwrap();
    let back = cache.load_decomposition(&sub.fingerprint, &sub.model, &t2).hit().unwrap();
    assert_eq!(back.deltas, d.deltas);
    assert_eq!(back.degree(), 3);

    // A repeated representative is stored with a valid hash but is rejected.
    let mut dup = d.deltas.clone();
    dup[1] = dup[0].clone();
    let entries: Vec<_> = dup.iter().map(|m| kkhecke::io::format::matrix_to_entries(m).unwrap()).collect();
    let key = format!("{}|{}", sub.fingerprint, kkhecke::io::format::hecke_to_json(&t2).unwrap());
    cache.store_raw(ArtifactKind::Decomposition, &key, json!(entries)).unwrap();
    let got = cache.load_decomposition(&sub.fingerprint, &sub.model, &t2);
    assert!(matches!(got, Lookup::Miss(MissReason::Invalid(_))), "{got:?}");
}

#[test]
fn presentation_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let cache = Cache::open(dir.path()).unwrap();
    let sub = load_subgroup(&data("gamma0_11.json")).unwrap();
    let p = sub.model.reduced_presentation();
    cache.store_presentation("reduced", &p).unwrap();
    let back = cache.load_presentation("reduced").hit().unwrap();
    assert_eq!(back, p);
    assert!(matches!(cache.load_presentation("other"), Lookup::Miss(MissReason::Absent)));
}
