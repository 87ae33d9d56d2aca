use std::process::{Command, Output};

use serde_json::Value;

fn qproj(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qproj"))
        .args(args)
        .env_remove("QEP_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

const PLUS: &str = r#"{"matrix":{"dim":2,"re":[[0.5,0.5],[0.5,0.5]]}}"#;
const COMPUTATIONAL: &str = r#"{"basis":{"dim":2,"re":[[1,0],[0,1]]},"groups":[[1],[2]]}"#;

fn matrix_re(v: &Value) -> Vec<Vec<f64>> {
    serde_json::from_value(v["matrix"]["re"].clone()).unwrap()
}

#[test]
fn weak_lueders_of_plus_is_maximally_mixed() {
    let input = format!(r#"{{"state":{PLUS},"resolution":{COMPUTATIONAL}}}"#);
    let out = qproj(&["update", "--rule", "weak-lueders", "--json", &input]);
    assert_eq!(out.status.code(), Some(0));
    let re = matrix_re(&stdout_json(&out));
    assert_eq!(re, vec![vec![0.5, 0.0], vec![0.0, 0.5]]);
}

#[test]
fn quantum_jeffrey_weights_flag() {
    let input = format!(r#"{{"state":{PLUS},"resolution":{COMPUTATIONAL}}}"#);
    let out = qproj(&["update", "--rule", "quantum-jeffrey", "--weights", "0.25,0.75", "--json", &input]);
    assert_eq!(out.status.code(), Some(0));
    let re = matrix_re(&stdout_json(&out));
    assert_eq!(re, vec![vec![0.25, 0.0], vec![0.0, 0.75]]);
}

#[test]
fn strong_lueders_on_zero_probability_event_exits_4() {
    let input = format!(r#"{{"state":{{"matrix":{{"dim":2,"re":[[1,0],[0,0]]}}}},"resolution":{COMPUTATIONAL},"event":2}}"#);
    let out = qproj(&["update", "--rule", "strong-lueders", "--json", &input]);
    assert_eq!(out.status.code(), Some(4));
    assert!(!out.stderr.is_empty());
}

#[test]
fn d1_of_pure_against_mixed_is_ln2() {
    let input = r#"{"first":{"matrix":{"dim":2,"re":[[1,0],[0,0]]}},"second":{"matrix":{"dim":2,"re":[[0.5,0],[0,0.5]]}}}"#;
    let out = qproj(&["distance", "--kind", "d1-umegaki", "--json", input]);
    assert_eq!(out.status.code(), Some(0));
    let v: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!((v - std::f64::consts::LN_2).abs() < 1e-10);
}

#[test]
fn infinite_divergence_prints_inf_or_exits_4() {
    let input = r#"{"first":{"matrix":{"dim":2,"re":[[0.5,0],[0,0.5]]}},"second":{"matrix":{"dim":2,"re":[[1,0],[0,0]]}}}"#;
    let out = qproj(&["distance", "--kind", "d1-umegaki", "--json", input]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "\"inf\"");
    let out = qproj(&["distance", "--kind", "d1-umegaki", "--require-finite", "--json", input]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn malformed_input_exits_2() {
    assert_eq!(qproj(&["distance", "--kind", "d0", "--json", "{not json"]).status.code(), Some(2));
    let ragged = r#"{"first":{"matrix":{"dim":2,"re":[[1,0]]}},"second":{"matrix":{"dim":2,"re":[[1,0],[0,0]]}}}"#;
    assert_eq!(qproj(&["distance", "--kind", "d0", "--json", ragged]).status.code(), Some(2));
    let unnormalized = r#"{"first":{"matrix":{"dim":1,"re":[[2]]}},"second":{"matrix":{"dim":1,"re":[[1]]}}}"#;
    assert_eq!(qproj(&["distance", "--kind", "d0", "--json", unnormalized]).status.code(), Some(2));
    assert_eq!(qproj(&["verify", "--theorem", "T12"]).status.code(), Some(2));
    assert_eq!(qproj(&["update", "--rule", "weak-lueders"]).status.code(), Some(2));
}

#[test]
fn non_convergence_exits_3() {
    let input = r#"{"state":{"matrix":{"dim":3,"re":[[0.4,0.1,0.05],[0.1,0.35,-0.08],[0.05,-0.08,0.25]]}},
        "resolution":{"basis":{"dim":3,"re":[[1,0,0],[0,1,0],[0,0,1]]},"groups":[[1,2],[3]]}}"#;
    let out = qproj(&["project", "--kind", "d-half", "--constraint", "ql", "--max-iter", "1", "--json", input]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(stdout_json(&out)["converged"], Value::Bool(false));
}

#[test]
fn projection_matches_weak_lueders_and_round_trips() {
    let input = r#"{"state":{"matrix":{"dim":3,"re":[[0.4,0.1,0.05],[0.1,0.35,-0.08],[0.05,-0.08,0.25]]}},
        "resolution":{"basis":{"dim":3,"re":[[1,0,0],[0,1,0],[0,0,1]]},"groups":[[1,2],[3]]}}"#;
    let out = qproj(&["project", "--kind", "d0", "--constraint", "ql", "--json", input]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let re = matrix_re(&v["minimizer"]);
    assert!((re[0][2]).abs() < 1e-12 && (re[0][1] - 0.1).abs() < 1e-9);

    // the emitted state re-validates and updates identically
    let again = format!(r#"{{"state":{},"resolution":{{"basis":{{"dim":3,"re":[[1,0,0],[0,1,0],[0,0,1]]}},"groups":[[1,2],[3]]}}}}"#, v["minimizer"]);
    let out = qproj(&["update", "--rule", "weak-lueders", "--json", &again]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(matrix_re(&stdout_json(&out)), re);
}

#[test]
fn classical_hand_example() {
    let input = r#"{"table":[[0.4,0.2],[0.1,0.3]],"observation":1}"#;
    let out = qproj(&["classical", "--evidence", "sharp", "--json", input]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let post: Vec<f64> = serde_json::from_value(v["mre_posterior"].clone()).unwrap();
    assert!((post[0] - 2.0 / 3.0).abs() < 1e-12 && (post[1] - 1.0 / 3.0).abs() < 1e-12);

    let input = r#"{"table":[[0.4,0.2],[0.1,0.3]],"evidence":[0.25,0.75]}"#;
    let out = qproj(&["classical", "--evidence", "soft", "--json", input]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout_json(&out)["total_variation"].as_f64().unwrap() < 1e-12);
}

#[test]
fn verify_t1_csv_within_tolerance() {
    let out = qproj(&["verify", "--theorem", "T1", "--dims", "2,3", "--trials", "20", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    for col in ["theorem", "dim", "seed", "deviation", "iterations", "converged"] {
        assert!(header.contains(&col), "missing {col}");
    }
    let dev = header.iter().position(|&c| c == "deviation").unwrap();
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 40);
    for row in rows {
        let d: f64 = row.split(',').nth(dev).unwrap().parse().unwrap();
        assert!(d <= 1e-6);
    }
}

#[test]
fn verify_is_byte_identical_and_seed_env_is_overridden() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let run = |path: &std::path::Path, jobs: &str| {
        let out = qproj(&["verify", "--theorem", "T2", "--trials", "4", "--seed", "11", "--jobs", jobs, "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    };
    run(&a, "1");
    run(&b, "3");
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let from_env = Command::new(env!("CARGO_BIN_EXE_qproj"))
        .args(["verify", "--theorem", "T8", "--trials", "2"])
        .env("QEP_SEED", "5")
        .output()
        .unwrap();
    let from_flag = qproj(&["verify", "--theorem", "T8", "--trials", "2", "--seed", "5"]);
    assert_eq!(from_env.stdout, from_flag.stdout);
    let overridden = Command::new(env!("CARGO_BIN_EXE_qproj"))
        .args(["verify", "--theorem", "T8", "--trials", "2", "--seed", "6"])
        .env("QEP_SEED", "5")
        .output()
        .unwrap();
    assert_ne!(from_env.stdout, overridden.stdout);
}

#[test]
fn input_file_and_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("in.json");
    std::fs::write(&path, format!(r#"{{"first":{PLUS},"second":{PLUS}}}"#)).unwrap();
    let out = qproj(&["distance", "--kind", "bures", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!(v.abs() < 1e-7);

    let out = qproj(&["verify", "--theorem", "T10", "--trials", "2", "--report", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["theorem"], "T10");
    assert_eq!(v["rows"].as_array().unwrap().len(), 2);
}
