use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctxgame"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn report(args: &[&str]) -> (Value, i32) {
    let out = run(args);
    (serde_json::from_str(&stdout(&out)).unwrap(), out.status.code().unwrap())
}

fn check<'a>(report: &'a Value, quantity: &str) -> &'a Value {
    report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["quantity"] == quantity)
        .unwrap_or_else(|| panic!("no check named {quantity}"))
}

#[test]
fn curve_rows_at_anchor_points() {
    let out = run(&["curve", "--alpha0", "2/3,1,0"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        stdout(&out),
        "alpha0,p_q,p_nc\n0.666667,0.622008,0.500000\n1.000000,0.583333,0.583333\n0.000000,0.583333,0.583333\n"
    );
}

#[test]
fn curve_with_classical_column() {
    let out = run(&["curve", "--alpha0", "0.5", "--classical"]);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha0,p_q,p_nc,p_c"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(row[0], "0.500000");
    assert_eq!(row[3], "0.583333");
}

#[test]
fn empty_grid_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.csv");
    let out = run(&["curve", "--grid", "0.5:0.2:0.1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "alpha0,p_q,p_nc\n");
}

fn run_to(path: &Path, args: &[&str]) -> Vec<u8> {
    let mut all = args.to_vec();
    all.extend(["--out", path.to_str().unwrap()]);
    assert_eq!(run(&all).status.code(), Some(0));
    std::fs::read(path).unwrap()
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["curve", "--grid", "0:1:0.125", "--seed", "3", "--restarts", "8"][..],
        &["bounds", "--alpha0", "0.4", "--seed", "9"][..],
        &["incompat", "--polygon-k", "32"][..],
    ] {
        let a = run_to(&dir.path().join("a"), args);
        let b = run_to(&dir.path().join("b"), args);
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn bounds_report_at_equal_weights() {
    let (r, code) = report(&["bounds"]);
    assert_eq!(code, 0);
    assert_eq!(r["pass"], true);
    let p_q = check(&r, "p_q")["value"].as_f64().unwrap();
    assert!((p_q - 0.622008).abs() < 1e-6);
    assert_eq!(check(&r, "p_nc")["value"].as_f64().unwrap(), 0.5);
    assert!((check(&r, "p_c")["value"].as_f64().unwrap() - 7.0 / 12.0).abs() < 1e-12);
    for c in r["checks"].as_array().unwrap() {
        for field in ["quantity", "value", "paper_reference_value", "tolerance", "pass"] {
            assert!(c.get(field).is_some(), "{c} lacks {field}");
        }
    }
}

#[test]
fn simulate_report() {
    let (r, code) = report(&["simulate", "--n", "5"]);
    assert_eq!(code, 0);
    assert!(check(&r, "element_residual")["value"].as_f64().unwrap() < 1e-12);
    assert_eq!(check(&r, "extremal_target")["value"], false);
    assert_eq!(check(&r, "extremal_simulators")["value"], serde_json::json!(vec![true; 5]));
}

#[test]
fn incompat_report() {
    let (r, code) = report(&["incompat"]);
    assert_eq!(code, 0);
    assert!((check(&r, "p_prior")["value"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-12);
    assert!(check(&r, "p_post_upper")["value"].as_f64().unwrap() < 0.64);
    assert!(check(&r, "witness_margin")["value"].as_f64().unwrap() > 0.02);
    assert_eq!(check(&r, "pairs_incompatible")["value"], 10);
}

#[test]
fn coherence_report() {
    let (r, code) = report(&["coherence"]);
    assert_eq!(code, 0);
    assert_eq!(check(&r, "trine_free_in_any_basis")["value"], false);
    assert_eq!(check(&r, "alpha0_1_povm_free")["value"], true);
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["curve", "--grid", "0:1"][..],
        &["curve", "--grid", "0:1:0"][..],
        &["curve", "--alpha0", "1.5"][..],
        &["bounds", "--format", "xml"][..],
        &["simulate", "--n", "4"][..],
        &["incompat", "--polygon-k", "2"][..],
        &["bounds", "--restarts", "0"][..],
        &["frobnicate"][..],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn unwritable_output_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("out.csv");
    let out = run(&["curve", "--alpha0", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot write"));
}

#[test]
fn csv_reports() {
    let out = run(&["coherence", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("quantity,value,paper_reference_value,tolerance,pass\n"));
}
