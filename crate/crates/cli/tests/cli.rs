use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solvshear")).args(args).env_remove("SOLVSHEAR_TOL").output().expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let out = run(&a);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)));
    (out.status.code().unwrap(), v)
}

fn assert_schema(v: &Value) {
    for key in ["command", "inputs", "conditions", "algebra_out", "forms_out", "checks", "chain"] {
        assert!(v.get(key).is_some(), "missing key {key} in {v}");
    }
}

#[test]
fn reproduce_all_passes() {
    let (code, v) = json(&["reproduce", "all"]);
    assert_eq!(code, 0);
    assert_schema(&v);
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(ids.len(), 12);
    assert_eq!(ids[0], "cocal.a.i");
    assert_eq!(ids[11], "abelianize.demo");
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    let text = String::from_utf8(run(&["reproduce", "all", "--sequential"]).stdout).unwrap();
    assert!(text.contains("12/12 passed"));
}

#[test]
fn reproduce_single_and_unknown() {
    let (code, v) = json(&["reproduce", "cocal.b"]);
    assert_eq!(code, 0);
    assert_eq!(v["algebra_out"], "(a1.17+46,a2.27,-2a1.37,-a1.47,-47-a2.57,2a1.67,0)");
    assert_eq!(run(&["reproduce", "nope"]).status.code(), Some(1));
}

#[test]
fn shear_builtins() {
    let (code, v) = json(&["shear", "--example", "cocal.a.i"]);
    assert_eq!(code, 0);
    assert_eq!(v["algebra_out"], "(25-36,a2.27,a3.37,0,-a2.57,-a3.67,0)");
    let (code, v) = json(&["shear", "--example", "cal.c"]);
    assert_eq!(code, 0);
    assert_eq!(v["algebra_out"], "(-a.17-4a.36,-3a.27,b.37,(2a+b).47,(a-b).57,-(a+b).67,0)");
}

#[test]
fn trivial_data_echoes_input() {
    let (code, v) = json(&["validate", "--alg", "(0,0,0,0,0,0,0)", "--a-sub", "7"]);
    assert_eq!(code, 0);
    assert!(v["conditions"].as_array().unwrap().iter().all(|c| c["passed"] == true));
    let (code, v) = json(&["shear", "--alg", "(0,0,12)", "--a-sub", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["algebra_out"], "(0,0,12)");
}

#[test]
fn corrupted_nu_names_the_condition() {
    let (code, v) = json(&["validate", "--example", "cocal.a.i"]);
    assert_eq!(code, 0);
    let (code, v2) = json(&["validate", "--example", "cocal.a.i", "--nu", "1:-2*a1*e1;4:a1*e4"]);
    assert_eq!(code, 2);
    let failed: Vec<&str> =
        v2["conditions"].as_array().unwrap().iter().filter(|c| c["passed"] == false).map(|c| c["name"].as_str().unwrap()).collect();
    assert_eq!(failed, ["dN_omega_zero"]);
    assert_eq!(v["inputs"]["example"], "cocal.a.i");
}

#[test]
fn transferred_forms() {
    let (code, v) = json(&["shear", "--alg", "(0,0,0)", "--a-sub", "3", "--omega0", "-12@3", "--form", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["algebra_out"], "(0,0,12)");
    assert_eq!(v["forms_out"][0]["d_h"], "12");
    assert_eq!(v["forms_out"][0]["d_g"], "0");
}

#[test]
fn invert_round_trip() {
    let (code, v) = json(&["invert", "--example", "cocal.a.i"]);
    assert_eq!(code, 0);
    assert_eq!(v["algebra_out"], "(a1.17,a2.27,a3.37,-a1.47,-a2.57,-a3.67,0)");
}

#[test]
fn abelianize_chain_and_parametric_refusal() {
    let (code, v) = json(&["abelianize", "--example", "cocal.a.i", "--set", "a2=1,a3=2"]);
    assert_eq!(code, 0);
    let chain = v["chain"].as_array().unwrap();
    assert_eq!(chain.len(), 2);
    assert_eq!(chain[0]["derived_length_before"], 3);
    assert_eq!(v["algebra_out"], "(0,0,0,0,0,0,0)");
    let out = run(&["abelianize", "--example", "cocal.a.i"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--set"));
}

#[test]
fn geometric_checks() {
    let out = run(&["check", "h3r3", "--example", "cal.b", "--set", "a=1,b=1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("case (i): conditions hold, dphi=0"));
    assert_eq!(json(&["check", "cocal", "--example", "cocal.b"]).0, 0);
    assert_eq!(json(&["check", "cal", "--example", "cal.a.i"]).0, 0);
    assert_eq!(json(&["check", "ask", "--example", "ask.basic"]).0, 0);
    assert_eq!(json(&["check", "cal", "--alg", "(0,0,0,0,0,12,0)"]).0, 2);
    let (code, v) = json(&["check", "g2", "--form", "126-135-147+234-257-367-456"]);
    assert_eq!(code, 0);
    assert_eq!(v["forms_out"][0]["value"], "1237-1245-1346-1567-2356+2467-3457");
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["shear"]).status.code(), Some(1));
    assert_eq!(run(&["shear", "--alg", "(0,0,1"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    let out = Command::new(env!("CARGO_BIN_EXE_solvshear"))
        .args(["check", "cocal", "--example", "cocal.b"])
        .env("SOLVSHEAR_TOL", "abc")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}
