use std::process::{Command, Output};

use serde_json::Value;

fn verify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_verify")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = verify(args);
    serde_json::from_slice(&out.stdout).expect("valid json")
}

#[test]
fn single_case_passes() {
    let out = verify(&["mc-affine"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("pass"), "{text}");
    assert!(text.contains("summary: 1 pass, 0 fail, 0 documented"));
}

#[test]
fn macaulay_table_is_printed() {
    let out = verify(&["macaulay-dims"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Spencer 8/24/24/8"));
    assert!(text.contains("Janet   27/60/46/12"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(verify(&["unknown-xyz"]).status.code(), Some(2));
    assert_eq!(verify(&[]).status.code(), Some(2));
    assert_eq!(verify(&["--tag", "bogus"]).status.code(), Some(2));
    assert_eq!(verify(&["--all", "--format", "yaml"]).status.code(), Some(2));
    assert_eq!(verify(&["--all", "--jobs", "0"]).status.code(), Some(2));
    assert_eq!(verify(&["mc-affine", "--all"]).status.code(), Some(2));
}

#[test]
fn divergence_tag_selects_at_least_five_cases() {
    let v = json(&["--tag", "divergence", "--format", "json"]);
    let cases = v["cases"].as_array().unwrap();
    assert!(cases.len() >= 5);
    for c in cases {
        assert!(c["id"].as_str().unwrap().starts_with("divergence"));
        assert!(c["paper_ref"].as_str().is_some_and(|s| !s.is_empty()));
        assert_eq!(c["millis"], 0);
    }
    let s = &v["summary"];
    assert_eq!(s["fail"], 0);
    assert_eq!(s["documented"], 1);
    assert_eq!(s["pass"].as_u64().unwrap() as usize + 1, cases.len());
}

#[test]
fn json_contract_and_determinism() {
    let args = ["--tag", "cohomology", "--format", "json", "--samples", "3"];
    let a = verify(&args);
    let b = verify(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    let ids: Vec<&str> = v["cases"].as_array().unwrap().iter().map(|c| c["id"].as_str().unwrap()).collect();
    let mut sorted = ids.clone();
    sorted.sort();
    assert_eq!(ids, sorted);
    for c in v["cases"].as_array().unwrap() {
        let keys: Vec<&String> = c.as_object().unwrap().keys().collect();
        assert!(keys.iter().all(|k| ["id", "status", "paper_ref", "witness", "millis"].contains(&k.as_str())), "{keys:?}");
        assert_eq!(c["status"], "pass");
    }
}

#[test]
fn documented_case_reports_its_witness() {
    let v = json(&["parametrization-killing-plane", "--format", "json"]);
    let c = &v["cases"][0];
    assert_eq!(c["status"], "discrepancy-documented");
    assert!(c["witness"].as_str().unwrap().contains("phi3"));
    assert_eq!(verify(&["parametrization-killing-plane"]).status.code(), Some(0));
}

#[test]
fn seed_and_jobs_flags() {
    let a = verify(&["--tag", "lie", "--format", "json", "--seed", "7", "--samples", "2", "--jobs", "3"]);
    let b = verify(&["--tag", "lie", "--format", "json", "--seed", "7", "--samples", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let t = verify(&["jet-dim-table", "--timing"]);
    assert!(String::from_utf8(t.stdout).unwrap().contains(" ms)"));
}
