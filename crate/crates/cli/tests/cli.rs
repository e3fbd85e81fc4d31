use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_equimap")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn fold_reports_folded_types() {
    assert_eq!(json(&["fold", "--scenario", "S2"])["folded_type"], "C2");
    let s3 = json(&["fold", "--scenario", "S3"]);
    assert_eq!(s3["folded_type"], "A1");
    assert_eq!(s3["kappa"], serde_json::json!([2]));
    assert_eq!(json(&["fold", "--scenario", "S4"])["folded_type"], "G2");
}

#[test]
fn local_weyl_dimension() {
    let v = json(&["local-weyl", "--scenario", "S1", "--psi", r#"{"1": [2]}"#]);
    assert_eq!(v["dimension"], 4);
    assert_eq!(v["lambda"], serde_json::json!([2]));
    let v = json(&["local-weyl", "--scenario", "S3", "--psi", r#"{"1": [1, 0]}"#, "--check-stability"]);
    assert_eq!(v["dimension"], 3);
    assert_eq!(v["stable"], true);
    assert_eq!(v["psi_completed"]["-1"], serde_json::json!([0, 1]));
}

#[test]
fn module_commands() {
    let v = json(&["simple", "--scenario", "S1", "--psi", r#"{"1": [2]}"#]);
    assert_eq!((v["dimension"].as_u64(), v["local_weyl_dimension"].as_u64()), (Some(3), Some(4)));
    let v = json(&["char", "--scenario", "S1", "--psi", r#"{"1": [1]}"#]);
    assert_eq!(v["character"], serde_json::json!([[[1], 1], [[-1], 1]]));
    let v = json(&["tensor", "--scenario", "S3", "--psi", r#"{"1": [1, 0]}"#, r#"{"2": [1, 0]}"#]);
    assert_eq!(v["dimension"], 9);
    let v = json(&["annihilator", "--scenario", "S1", "--psi", r#"{"1": [2]}"#]);
    assert_eq!((v["exponent"].as_u64(), v["bound"].as_u64()), (Some(2), Some(2)));
    let v = json(&["bba", "--scenario", "S3", "--lambda", "[4]"]);
    assert_eq!(v["algebra"]["factors"][0]["r"], 2);
}

#[test]
fn suites_pass() {
    let v = json(&["verify", "--suite", "all", "--scenario", "S1"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["suites"].as_array().unwrap().len(), 5);
    assert_eq!(json(&["verify", "--suite", "weylalg", "--threads", "2"])["passed"], true);
    assert_eq!(json(&["bba-check", "--samples", "20"])["passed"], true);
}

#[test]
fn output_is_byte_stable() {
    let args = ["local-weyl", "--scenario", "S2", "--psi", r#"{"1": [1, 0, 1]}"#];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn usage_errors_exit_2() {
    let cases: [&[&str]; 6] = [
        &["fold", "--scenario", "S9"],
        &["local-weyl", "--scenario", "S1", "--psi", "not json"],
        &["local-weyl", "--scenario", "S3", "--psi", r#"{"1": [1, 0], "-1": [1, 0]}"#],
        &["verify", "--suite", "nope"],
        &["bba", "--scenario", "S2", "--lambda", "[1]"],
        &["frobnicate"],
    ];
    for args in cases {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}
