use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name)
}

fn kkhecke(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kkhecke"))
        .args(args)
        .env_remove("WORKBENCH_CACHE")
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn verify_gamma0_11() {
    let out = kkhecke(&["verify", "all", path(&data("gamma0_11.json"))]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    let hecke = report["sections"].as_array().unwrap().iter().find(|s| s["name"] == "hecke").unwrap();
    let t2 = hecke["data"]["operators"].as_array().unwrap().iter().find(|o| o["label"] == "T_2").unwrap();
    let mut ev: Vec<i64> = t2["integer_eigenvalues"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    ev.sort();
    assert_eq!(ev, vec![-2, -2, 3]);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("report.json");
    let out = kkhecke(&["group", "analyze", path(&data("gamma0_11.json")), "--out", path(&file)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = fs::read_to_string(&file).unwrap();
    assert!(text.contains("\"command\": \"group analyze\""));
}

#[test]
fn malformed_presentation_exits_two_with_location() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("pres.json"),
        r#"{"discriminant": 0, "generators": [{"name": "S", "matrix": [[0, 1], [-1, 1], [1, 1], [0, 1]]}], "relators": ["S^2 Q"]}"#,
    )
    .unwrap();
    let sub = dir.path().join("sub.json");
    fs::write(&sub, r#"{"ambient": "pres.json", "kind": "gamma0", "level": 11}"#).unwrap();
    let out = kkhecke(&["group", "analyze", path(&sub)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("pres.json") && err.contains("relators[0] column 6"), "{err}");
}

#[test]
fn small_cap_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("t97.json");
    fs::write(&h, r#"{"label": "T_97", "matrix": [[1, 1], [0, 1], [0, 1], [97, 1]], "discriminant": 0}"#).unwrap();
    let out = kkhecke(&["--cap", "5", "hecke", "matrix", path(&data("gamma0_11.json")), path(&h)]);
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn cache_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_kkhecke"))
            .args(["hecke", "matrix", path(&data("gamma0_11.json"))])
            .env("WORKBENCH_CACHE", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert_eq!(first.status.code(), Some(0));
    assert!(fs::read_dir(dir.path()).unwrap().count() > 0);
    let second = run();
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn bad_tolerance_exits_two() {
    let out = kkhecke(&["--tol", "0", "group", "analyze", path(&data("gamma0_11.json"))]);
    assert_eq!(out.status.code(), Some(2));
}
