use std::process::Command;

use holocert::cli::{run, EXIT_BOUND, EXIT_INPUT, EXIT_OK, EXIT_VERIFY};
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("holocert").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn expand_examples() {
    let (code, out, _) = call(&["expand", "f2", "--T", "4"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out), serde_json::json!(["1", "-4", "-12", "-80"]));
    let (_, out, _) = call(&["expand", "apery", "--T", "4", "--format", "csv"]);
    assert_eq!(out, "n,coefficient\n0,1\n1,5\n2,73\n3,1445\n");
    let (code, _, err) = call(&["expand", "nosuch"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("unknown series 'nosuch'"));
    let (_, out, _) = call(&["expand", "f2", "--T", "4", "--mod", "5"]);
    assert_eq!(json(&out), serde_json::json!(["1", "1", "3", "0"]));
}

#[test]
fn opinfo_examples() {
    let dir = tempfile::tempdir().unwrap();
    let op = dir.path().join("op.json");
    std::fs::write(&op, r#"{"basis":"d","coeffs":[{"num":[0,1,-16]},{"num":[1,-16]},{"num":[4]}]}"#).unwrap();
    let (code, out, err) = call(&["opinfo", op.to_str().unwrap(), "-p", "3,5"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(err.trim(), "MOM: yes; indicial: x^2; finite singular factors: z, z - 1/16");
    let v = json(&out);
    assert_eq!(v["exponents_at_zero"], serde_json::json!(["0", "0"]));
    assert_eq!(v["p_curvature"][0]["nilpotent"], true);

    let (_, _, err) = call(&["opinfo", "--series", "apery", "-p", "5"]);
    assert!(err.starts_with("MOM: yes; indicial: x^3;"), "{err}");

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"basis":"q","coeffs":[]}"#).unwrap();
    let (code, _, err) = call(&["opinfo", bad.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("parse error"), "{err}");
}

#[test]
fn certify_and_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("certs.json");
    let (code, _, _) = call(&["certify", "f1", "f2", "-p", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let v = json(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(v[0]["series"], "f1");
    assert_eq!(v[0]["level"], 1);
    assert_eq!((v[0]["A_num"].clone(), v[0]["A_den"].clone()), (serde_json::json!([1, 1]), serde_json::json!([1])));
    assert_eq!((v[1]["level"].as_u64(), v[1]["height"].as_u64()), (Some(2), Some(12)));

    let (code, out, _) = call(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(json(&out).as_array().unwrap().iter().all(|r| r["result"] == "pass"));

    // tamper with A: the identity no longer holds
    let mut bad = v.clone();
    bad[0]["A_num"] = serde_json::json!([1, 2]);
    let tampered = dir.path().join("bad.json");
    std::fs::write(&tampered, bad.to_string()).unwrap();
    let (code, out, _) = call(&["verify", tampered.to_str().unwrap()]);
    assert_eq!(code, EXIT_VERIFY);
    assert_eq!(json(&out)[0]["result"], "fail");
}

#[test]
fn certify_errors_map_to_exit_codes() {
    let (code, _, err) = call(&["certify", "f2", "-p", "2"]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("bad prime 2"));
    assert_eq!(call(&["certify", "f2", "-p", "3", "--T", "10"]).0, EXIT_INPUT);
    assert_eq!(call(&["certify", "f2", "-p", "4"]).0, EXIT_INPUT);
    assert_eq!(call(&["certify", "nosuch"]).0, EXIT_INPUT);
    assert_eq!(call(&["frobnicate"]).0, EXIT_INPUT);
    assert_eq!(holocert::cli::exit_code(&holocert::Error::HeightBoundViolated { height: 5, bound: 4 }), EXIT_BOUND);
}

#[test]
fn casebook_examples() {
    let (code, out, _) = call(&["casebook", "2f1", "-p", "3,5"]);
    assert_eq!(code, EXIT_OK);
    let v = json(&out);
    assert_eq!((v["passed"].as_u64(), v["failed"].as_u64()), (Some(2), Some(0)));

    let (code, out, err) = call(&["casebook", "210", "-p", "2", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    assert!(err.starts_with("warning: case 210 excluded at p = 2"));
    assert_eq!(out.lines().nth(1).unwrap().split(',').nth(2), Some("excluded"));

    let (code, out, _) = call(&["casebook", "all", "-p", "3,5,7", "--jmax-210", "10", "--jmax-26", "10", "--T", "200"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out)["rows"].as_array().unwrap().len(), 15);

    assert_eq!(call(&["casebook", "nope"]).0, EXIT_INPUT);
}

#[test]
fn user_catalog() {
    let dir = tempfile::tempdir().unwrap();
    let cat = dir.path().join("cat.json");
    std::fs::write(&cat, r#"[{"name":"h4","kind":"binom_power","r":4}]"#).unwrap();
    let (code, out, _) = call(&["expand", "h4", "--T", "3", "--catalog", cat.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(json(&out), serde_json::json!(["1", "16", "1296"]));
    std::fs::write(&cat, r#"[{"name":"h4","kind":"nope"}]"#).unwrap();
    let (code, _, err) = call(&["list", "--catalog", cat.to_str().unwrap()]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("$[0].kind"), "{err}");
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_holocert");
    let ok = Command::new(bin).args(["expand", "g1", "--T", "5"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&String::from_utf8(ok.stdout).unwrap()), serde_json::json!(["1", "2", "6", "20", "70"]));
    let bad = Command::new(bin).args(["certify", "f2", "-p", "2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
