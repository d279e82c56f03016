mod common;

use std::fs;

use kkhecke::error::Error;
use kkhecke::io::job::{exit_code, run, Command, JobSpec};
use serde_json::Value;

use common::data;

fn verify_job() -> JobSpec {
    let mut job = JobSpec::new(Command::VerifyAll);
    job.subgroup = Some(data("gamma0_11.json"));
    job
}

fn eigenvalues(report: &Value, label: &str) -> Vec<i64> {
    let ops = report["sections"]
        .as_array()
        .unwrap()
        .iter()
        .find(|s| s["name"] == "hecke")
        .map(|s| s["data"]["operators"].as_array().unwrap().clone())
        .unwrap();
    let op = ops.iter().find(|o| o["label"] == label).unwrap();
    let mut v: Vec<i64> = op["integer_eigenvalues"].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect();
    v.sort();
    v
}

#[test]
fn verify_gamma0_11_exits_zero() {
    let outcome = run(&verify_job());
    assert_eq!(exit_code(&outcome), 0);
    let report: Value = serde_json::from_str(&outcome.unwrap().to_json()).unwrap();
    assert_eq!(eigenvalues(&report, "T_2"), vec![-2, -2, 3]);
    assert_eq!(eigenvalues(&report, "T_3"), vec![-1, -1, 4]);
}

#[test]
fn reports_are_byte_identical() {
    let a = run(&verify_job()).unwrap().to_json();
    let b = run(&verify_job()).unwrap().to_json();
    assert_eq!(a, b);

    let mut job = JobSpec::new(Command::PairIndex);
    job.subgroup = Some(data("gamma0_11.json"));
    job.seed = Some(7);
    let c = run(&job).unwrap().to_json();
    let d = run(&job).unwrap().to_json();
    assert_eq!(c, d);
}

#[test]
fn cached_run_matches_fresh_run() {
    let dir = tempfile::tempdir().unwrap();
    let fresh = run(&verify_job()).unwrap().to_json();
    let mut job = verify_job();
    job.cache_dir = Some(dir.path().to_path_buf());
    let first = run(&job).unwrap().to_json();
    let stored = fs::read_dir(dir.path()).unwrap().count();
    assert!(stored >= 4, "expected table, presentation and two decompositions, found {stored}");
    let second = run(&job).unwrap().to_json();
    assert_eq!(first, fresh);
    assert_eq!(second, fresh);
}

#[test]
fn missing_and_malformed_inputs_exit_two() {
    let mut job = verify_job();
    job.subgroup = Some(data("does_not_exist.json"));
    assert_eq!(exit_code(&run(&job)), 2);

    let dir = tempfile::tempdir().unwrap();
    let pres = dir.path().join("pres.json");
    fs::write(
        &pres,
        r#"{"discriminant": 0, "generators": [{"name": "S", "matrix": [[0, 1], [-1, 1], [1, 1], [0, 1]]}], "relators": ["S^2 Q"]}"#,
    )
    .unwrap();
    let sub = dir.path().join("sub.json");
    fs::write(&sub, r#"{"ambient": "pres.json", "kind": "gamma0", "level": 11}"#).unwrap();
    let mut job = JobSpec::new(Command::GroupAnalyze);
    job.subgroup = Some(sub);
    let outcome = run(&job);
    assert_eq!(exit_code(&outcome), 2);
    match outcome {
        Err(Error::Parse { location, message }) => {
            assert!(location.contains("pres.json") && location.contains("relators[0] column 6"), "{location}");
            assert!(message.contains("unknown generator"), "{message}");
        }
        other => panic!("expected a parse error, got {other:?}"),
    }

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"ambient\": ").unwrap();
    job.subgroup = Some(bad);
    match run(&job) {
        Err(Error::Parse { location, .. }) => assert!(location.contains("bad.json:1:"), "{location}"),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn small_cap_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let h = dir.path().join("t97.json");
    fs::write(&h, r#"{"label": "T_97", "matrix": [[1, 1], [0, 1], [0, 1], [97, 1]], "discriminant": 0}"#).unwrap();
    let mut job = JobSpec::new(Command::HeckeMatrix);
    job.subgroup = Some(data("gamma0_11.json"));
    job.hecke = vec![h];
    job.cap = 5;
    let outcome = run(&job);
    assert!(matches!(outcome, Err(Error::CapExceeded { .. })), "{outcome:?}");
    assert_eq!(exit_code(&outcome), 3);
}

#[test]
fn bianchi_kgroups_cross_check() {
    let mut job = JobSpec::new(Command::KgroupsAssemble);
    job.subgroup = Some(data("bianchi_d1_gamma2.json"));
    job.hecke = vec![data("t_2pi.json"), data("t_2mi.json")];
    let report = run(&job).unwrap();
    assert!(report.passed());
    assert!(report.checks.iter().any(|c| c.name == "boundary_rank_equals_twice_rank_h1" && c.passed));
    assert!(report.flags.iter().any(|f| f.id == "h2_euler_correction"));
}

#[test]
fn invalid_tolerance_is_a_parse_error() {
    let mut job = JobSpec::new(Command::BoundarySuite);
    job.tol = Some(-1.0);
    assert_eq!(exit_code(&run(&job)), 2);
}
