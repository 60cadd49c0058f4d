//! Black-box tests of the command-line contract: exit codes, output
//! formats, determinism of repeated invocations, and file output.

use std::process::{Command, Output};

fn blochlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_blochlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn successful_campaigns_exit_zero() {
    for args in [
        vec!["cliques", "--n", "1"],
        vec!["charges", "--samples", "20"],
        vec!["logic"],
        vec!["monogamy", "--seed", "5"],
        vec!["evolve", "--t-grid", "0:2:5"],
        vec!["tomography", "--n", "1", "--samples", "500", "--grid", "100,1000"],
    ] {
        let output = blochlab(&args);
        assert_eq!(output.status.code(), Some(0), "{args:?}: {output:?}");
        assert!(!output.stdout.is_empty(), "{args:?} produced no output");
    }
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["cliques", "--bogus"],
        vec!["no-such-command"],
        vec!["charges", "--format", "dot"],
        vec!["evolve", "--t-grid", "1:2"],
        vec!["evolve", "--t-grid", "abc"],
        vec!["tomography", "--grid", "10,abc"],
        vec!["charges", "--samples", "0"],
    ] {
        let output = blochlab(&args);
        assert_eq!(output.status.code(), Some(2), "{args:?}: {output:?}");
    }
}

#[test]
fn failed_checks_exit_one() {
    // An impossible tolerance forces the charge campaign to fail honestly.
    let output = blochlab(&["charges", "--samples", "20", "--tol", "1e-18"]);
    assert_eq!(output.status.code(), Some(1));
    // The report is still emitted, with pass = false.
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(false));
}

#[test]
fn repeated_invocations_are_byte_identical() {
    for args in [
        vec!["charges", "--samples", "60", "--seed", "9"],
        vec!["cliques", "--n", "2"],
        vec!["tomography", "--n", "1", "--samples", "300", "--grid", "100,1000", "--seed", "4"],
        vec!["evolve", "--seed", "3", "--t-grid", "0:4:9"],
    ] {
        let first = blochlab(&args);
        let second = blochlab(&args);
        assert_eq!(first.stdout, second.stdout, "{args:?} output varies");
    }
}

#[test]
fn out_flag_writes_the_report_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let output = blochlab(&["monogamy", "--out", path.to_str().unwrap()]);
    assert_eq!(output.status.code(), Some(0));
    assert!(output.stdout.is_empty());
    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written["command"], "monogamy");
    assert_eq!(written["pass"], serde_json::Value::Bool(true));
}

#[test]
fn alternative_formats_are_raw_documents() {
    let dot = blochlab(&["cliques", "--format", "dot"]);
    assert_eq!(dot.status.code(), Some(0));
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("graph"), "not a dot document: {text:.60}");

    let logic_dot = blochlab(&["logic", "--format", "dot"]);
    let text = String::from_utf8(logic_dot.stdout).unwrap();
    assert_eq!(text.matches("color=red").count(), 9);

    let csv = blochlab(&["evolve", "--format", "csv", "--t-grid", "0:1:3"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("t,pent1,"), "unexpected header: {text:.60}");
    assert_eq!(text.lines().count(), 4);

    let csv = blochlab(&["tomography", "--format", "csv", "--n", "1", "--grid", "100,1000"]);
    let text = String::from_utf8(csv.stdout).unwrap();
    assert!(text.starts_with("samples,max_abs_error\n"));
}

#[test]
fn json_reports_parse_and_carry_the_envelope() {
    let output = blochlab(&["logic"]);
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["command"], "logic");
    assert_eq!(report["results"]["quantum_hidden_variable_count"], 0);
    assert_eq!(report["results"]["all_even_hidden_variable_count"], 32);
    assert_eq!(
        report["results"]["correlation_table"].as_array().unwrap().len(),
        15
    );
}
