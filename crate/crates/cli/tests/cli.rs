//! The binary end to end: exit codes, JSON shape, files and the precision variable.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn flopkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flopkit")).args(args).env_remove("FLOPKIT_PRECISION").output().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = flopkit(args);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("flopkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn orbit_classes_in_json() {
    let (code, v) = json(&["lattice", "orbit", "--kind", "rho", "--count", "3", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["classes"], serde_json::json!([[3, -2], [7, -4], [29, -16]]));
    assert_eq!(v["command"], "lattice orbit");
    assert!(v.get("timings").is_none());
}

#[test]
fn fano_degrees() {
    let (code, v) = json(&["schubert", "deg-fano", "--ambient", "5", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["data"]["degree"], 45);
    let (_, v) = json(&["schubert", "deg-fano", "--ambient", "4", "--json"]);
    assert_eq!(v["data"]["degree"], 27);
    assert_eq!(flopkit(&["schubert", "deg-fano", "--ambient", "6"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(flopkit(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(flopkit(&["lattice", "orbit", "--kind", "beta"]).status.code(), Some(2));
    assert_eq!(flopkit(&["instance", "check", "--instance", "/nonexistent/i.json"]).status.code(), Some(2));
    assert_eq!(flopkit(&["instance", "project", "--node", "0"]).status.code(), Some(2));
    assert_eq!(flopkit(&["reproduce"]).status.code(), Some(2));
    assert_eq!(flopkit(&["lattice", "svg", "--k", "0"]).status.code(), Some(2));
}

#[test]
fn failed_check_exits_one() {
    let (code, v) = json(&["segre", "identity", "--variant", "printed", "--json"]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
    let (code, _) = json(&["segre", "identity", "--variant", "cyclic", "--json"]);
    assert_eq!(code, 0);
}

#[test]
fn instance_file_roundtrip() {
    let path = scratch("seed5.json");
    let p = path.to_str().unwrap();
    let (code, v) = json(&["instance", "new", "--seed", "5", "--out", p, "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["artifacts"][0], p);
    let first = std::fs::read(&path).unwrap();
    let (code, v) = json(&["instance", "check", "--instance", p, "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["seed"], 5);
    let (code, _) = json(&["instance", "project", "--instance", p, "--node", "6", "--json"]);
    assert_eq!(code, 0);
    json(&["instance", "new", "--seed", "5", "--out", p, "--json"]);
    assert_eq!(std::fs::read(&path).unwrap(), first);
}

#[test]
fn lines_and_jmap() {
    let (code, v) = json(&["instance", "lines", "--seed", "2", "--seed-point", "3", "--json"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["data"]["points"][0]["lines"].as_array().unwrap().len(), 6);
    let (code, v) = json(&["segre", "jmap", "--seed", "2", "--samples", "2", "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn fourfold_extend_then_iota() {
    let path = scratch("x1.json");
    let p = path.to_str().unwrap();
    let (code, _) = json(&["fourfold", "extend", "--seed", "1", "--out", p, "--json"]);
    assert_eq!(code, 0);
    let (code, v) = json(&[
        "fourfold",
        "iota",
        "--fourfold",
        p,
        "--line-seed",
        "3",
        "--check-involution",
        "--check-scroll",
        "2,-1,5",
        "--json",
    ]);
    assert_eq!(code, 0, "{v}");
    assert!(v["data"]["involution_distance"].as_f64().unwrap() < 1e-30);
    assert_eq!(v["data"]["scroll"]["invariant"], true);
    assert_eq!(flopkit(&["fourfold", "iota", "--check-scroll", "0,0,0"]).status.code(), Some(2));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_flopkit"))
        .args(["instance", "lines", "--seed-point", "1", "--json"])
        .env("FLOPKIT_PRECISION", "160")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["precision"], 160);
    assert_eq!(out.status.code(), Some(0));
    let (_, v) = json(&["instance", "lines", "--seed-point", "1", "--precision", "320", "--json"]);
    assert_eq!(v["precision"], 320);
}

#[test]
fn svg_file_and_text() {
    let path = scratch("cone.svg");
    let p = path.to_str().unwrap();
    assert_eq!(flopkit(&["lattice", "svg", "--k", "3", "--out", p]).status.code(), Some(0));
    let svg = std::fs::read_to_string(&path).unwrap();
    assert!(svg.starts_with("<svg") && svg.matches("class=\"chamber\"").count() == 6);
}

#[test]
fn every_group_speaks_json() {
    for args in [
        &["lattice", "chamber", "--x", "12", "--y", "-5", "--model", "0", "--json"][..],
        &["lattice", "represent", "--n", "-2", "--json"],
        &["lattice", "transfer", "--a", "3", "--t", "7", "--json"],
        &["surf27", "enumerate", "--format", "json"],
        &["segre", "identity", "--json"],
    ] {
        let (code, v) = json(args);
        assert_eq!(code, 0, "{args:?}");
        assert!(v["checks"].is_array() && v["data"].is_object(), "{args:?}");
    }
    let (_, v) = json(&["lattice", "chamber", "--x", "0", "--y", "1", "--json"]);
    assert_eq!(v["data"]["location"]["k"], -1);
}

#[test]
fn text_mode_lists_checks() {
    let out = flopkit(&["lattice", "transfer", "--a", "3", "--t", "7"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS determinant_identity") && text.trim_end().ends_with("ok"));
}
