//! End-to-end runs of the `dpn` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/corpus").join(name)
}

fn dpn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = dpn(args);
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> (i32, Value) {
    let (code, out, _) = run(args);
    (code, serde_json::from_str(&out).unwrap_or_else(|e| panic!("{e}: {out}")))
}

#[test]
fn check_e1_live() {
    let e1 = corpus("e1.dpn");
    let (code, out, err) = run(&["check", e1.to_str().unwrap(), "--dims", "f=1", "--method", "branch-ilp"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().next(), Some("LIVE (branch-ilp)"));
}

#[test]
fn check_e1_unknown_dumps_witness() {
    let e1 = corpus("e1.dpn");
    let (code, out, _) = run(&["check", e1.to_str().unwrap(), "--dims", "f=0", "--dump-witness"]);
    assert_eq!(code, 10);
    assert!(out.starts_with("UNKNOWN (branch-ilp)"));
    assert!(out.contains("n[A.t0] = 0") && out.contains("n[B.t0] = 0"), "{out}");
}

#[test]
fn dimension_json() {
    let (code, v) = json(&["dimension", corpus("e2.dpn").to_str().unwrap(), "--json"]);
    assert_eq!(code, 10);
    assert_eq!(v["z_ip"], "unbounded");
    assert_eq!(v["result"], "unbounded");

    let (code, v) = json(&["dimension", corpus("e1.dpn").to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["z_ip"], 0);
    assert_eq!(v["z_lp"], 0);
    assert_eq!(v["recommended_dims"], serde_json::json!({"f": 1}));

    let (code, v) = json(&["dimension", corpus("e3.dpn").to_str().unwrap(), "--json"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"], "live-for-all-valid");
}

#[test]
fn json_key_order_is_stable() {
    let (_, out, _) = run(&["dimension", corpus("e1.dpn").to_str().unwrap(), "--json"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(
        keys,
        ["command", "network", "result", "method", "z_ip", "z_lp", "recommended_dims", "branches", "stats"]
    );
}

#[test]
fn every_command_emits_json() {
    let e1 = corpus("e1.dpn");
    let e1 = e1.to_str().unwrap();
    for args in [
        vec!["check", e1, "--dims", "f=1", "--json"],
        vec!["check", e1, "--dims", "f=0", "--json", "--method", "big-m-lp"],
        vec!["dimension", e1, "--json", "--method", "branch-lp"],
        vec!["explore", e1, "--z-uniform", "0", "--json"],
        vec!["mirror", e1, "--dims", "f=2", "--json"],
        vec!["validate", e1, "--json"],
    ] {
        let (_, v) = json(&args);
        assert_eq!(v["command"], args[0]);
        assert_eq!(v["network"], "e1");
    }
}

#[test]
fn explore_exit_codes() {
    let e1 = corpus("e1.dpn");
    let e1 = e1.to_str().unwrap();
    let (code, out, _) = run(&["explore", e1, "--dims", "f=1"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("NO-DEADLOCK"));
    let (code, out, _) = run(&["explore", e1, "--dims", "f=0"]);
    assert_eq!(code, 10);
    assert!(out.starts_with("BLOCKED"));
    let (code, _, _) = run(&["explore", e1, "--dims", "f=3", "--max-configs", "2"]);
    assert_eq!(code, 11);
}

#[test]
fn inconclusive_exit_code() {
    let (code, out, _) = run(&["check", corpus("e1.dpn").to_str().unwrap(), "--dims", "f=0", "--max-pivots", "0"]);
    assert_eq!(code, 11);
    assert!(out.starts_with("INCONCLUSIVE"));
}

#[test]
fn errors_exit_2() {
    let e1 = corpus("e1.dpn");
    let e1 = e1.to_str().unwrap();
    let bad = corpus("errors/undeclared_channel.dpn");
    let bad = bad.to_str().unwrap();
    for args in [
        vec!["check", e1],
        vec!["check", e1, "--dims", "g=1"],
        vec!["check", e1, "--dims", "f=1", "--z-uniform", "1"],
        vec!["check", e1, "--dims", "f=1", "--method", "simplex"],
        vec!["dimension", e1, "--method", "big-m-lp"],
        vec!["dimension", e1, "--z-uniform", "2"],
        vec!["check", bad, "--dims", "f=1"],
        vec!["check", "/nonexistent/file.dpn", "--dims", "f=1"],
        vec!["frobnicate"],
        vec![],
    ] {
        let (code, out, err) = run(&args);
        assert_eq!(code, 2, "{args:?}");
        assert!(out.is_empty() && !err.is_empty(), "{args:?}");
    }
    let (code, out, err) = run(&["check", bad, "--dims", "f=1"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("undeclared_channel.dpn:9:18: unknown reference"), "{err}");

    let (code, out, _) = run(&["validate", bad]);
    assert_eq!(code, 2);
    assert!(out.starts_with("INVALID: 1 errors"));
}

#[test]
fn output_is_deterministic() {
    for file in ["e1.dpn", "e2.dpn", "pipeline.dpn", "fork_join.dpn"] {
        let path = corpus(file);
        let path = path.to_str().unwrap();
        let base = dpn(&["dimension", path, "--json", "--dump-cuts", "--dump-constraints"]);
        for parallel in ["0", "1", "4"] {
            let again = dpn(&["dimension", path, "--json", "--dump-cuts", "--dump-constraints", "--parallel", parallel]);
            assert_eq!(base.stdout, again.stdout, "{file} with --parallel {parallel}");
        }
        let a = dpn(&["check", path, "--z-uniform", "2", "--parallel", "3"]);
        let b = dpn(&["check", path, "--z-uniform", "2"]);
        assert_eq!(a.stdout, b.stdout, "{file}");
    }
}

#[test]
fn timing_adds_millis() {
    let (_, v) = json(&["check", corpus("e1.dpn").to_str().unwrap(), "--dims", "f=1", "--json", "--timing"]);
    assert!(v["stats"]["millis"].is_u64());
    let (_, v) = json(&["check", corpus("e1.dpn").to_str().unwrap(), "--dims", "f=1", "--json"]);
    assert!(v["stats"].get("millis").is_none());
}

#[test]
fn mirror_output_parses_back() {
    let (code, out, _) = run(&["mirror", corpus("e1.dpn").to_str().unwrap(), "--dims", "f=1"]);
    assert_eq!(code, 0);
    let m = dpnlive::textio::parse(&out).unwrap();
    assert!(m.channel("f_mirror").is_some());
    assert_eq!(m.initial_tokens(&"f_mirror".into()), 1);
}

#[test]
fn help_exits_0() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    assert!(out.contains("dimension"));
}
