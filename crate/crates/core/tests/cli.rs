use std::io::Write;
use std::process::Command;

use clap::Parser;
use serde_json::Value;

use sympencil::blocks::CanonicalStructure;
use sympencil::cli::{run, Cli, Outcome, EXIT_ERROR, EXIT_FAILED_CHECK};
use sympencil::patterns::{assemble_pattern, PatternJson, PatternPair};

fn invoke(args: &[&str]) -> Outcome {
    let cli = Cli::try_parse_from(std::iter::once("sympencil").chain(args.iter().copied())).unwrap();
    run(&cli)
}

fn json(o: &Outcome) -> Value {
    serde_json::from_str(&o.report).unwrap()
}

fn temp_file(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn verify_single_block() {
    let o = invoke(&["verify", "--structure", "H(1,2)", "--format", "json"]);
    assert_eq!(o.status, 0);
    let v = json(&o);
    assert_eq!(v["codim"], 1);
    assert_eq!(v["pattern_params"], 1);
    assert_eq!(v["direct_sum"], true);
    assert_eq!(v["ledger"], Value::Array(vec![]));
}

#[test]
fn verify_empty_structure_passes() {
    let o = invoke(&["verify", "--structure", "[]"]);
    assert_eq!(o.status, 0);
    assert!(o.report.contains("pass"));
}

#[test]
fn small_sweep_has_empty_ledger() {
    let o = invoke(&["sweep", "--max-total", "4", "--format", "json"]);
    assert_eq!(o.status, 0);
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["ledger"], Value::Array(vec![]));
    assert!(v["structures"].as_array().unwrap().len() > 100);
}

#[test]
fn parse_errors_report_a_position() {
    let o = invoke(&["sweep", "--lambdas", "0,1,1/0"]);
    assert_eq!(o.status, EXIT_ERROR);
    assert!(o.report.contains("position 6"), "{}", o.report);

    let o = invoke(&["codim", "--structure", "H(2,1),Q(3)"]);
    assert_eq!(o.status, EXIT_ERROR);
    assert!(o.report.contains("parse error at position"), "{}", o.report);
}

#[test]
fn nonpositive_sweep_bounds_are_rejected() {
    assert_eq!(invoke(&["sweep", "--max-total", "0"]).status, EXIT_ERROR);
}

#[test]
fn pattern_json_round_trips_and_verifies() {
    let s = "H(2,1),H(1,1),L(1)";
    let o = invoke(&["pattern", "--structure", s, "--format", "json"]);
    assert_eq!(o.status, 0);
    let parsed: PatternJson = serde_json::from_str(&o.report).unwrap();
    let expected = assemble_pattern(&s.parse::<CanonicalStructure>().unwrap()).unwrap();
    assert_eq!(PatternPair::from_json(&parsed).unwrap(), expected);

    let file = temp_file(&o.report);
    let o = invoke(&["verify", "--structure", s, "--pattern", file.path().to_str().unwrap()]);
    assert_eq!(o.status, 0, "{}", o.report);
}

#[test]
fn a_bad_pattern_fails_with_its_minimal_structure() {
    let s = "H(1,0),K(1)";
    let mut p = serde_json::to_value(assemble_pattern(&s.parse().unwrap()).unwrap().to_json()).unwrap();
    // Remove the star of the K(1) summand.
    p["maskA"][1][1] = Value::String("0".into());
    p["params"] = 1.into();
    let file = temp_file(&p.to_string());
    let o = invoke(&["verify", "--structure", s, "--pattern", file.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status, EXIT_FAILED_CHECK);
    let v = json(&o);
    assert_eq!(v["direct_sum"], false);
    assert_eq!(v["ledger"][0]["minimal_failing"], "[K(1)]");
}

#[test]
fn structure_file_in_both_formats() {
    let j = temp_file(r#"{"blocks":[{"kind":"H","n":2,"lambda":"1/2"},{"kind":"L","n":1}]}"#);
    let t = temp_file("H(2,1/2), L(1)\n");
    let a = invoke(&["codim", "--input", j.path().to_str().unwrap()]);
    let b = invoke(&["codim", "--input", t.path().to_str().unwrap()]);
    assert_eq!(a.status, 0);
    assert_eq!(a, b);

    let bad = temp_file(r#"{"blocks":[{"kind":"H","n":2}]}"#);
    assert_eq!(invoke(&["codim", "--input", bad.path().to_str().unwrap()]).status, EXIT_ERROR);
}

#[test]
fn project_reports_parameters_and_reducer() {
    let e = temp_file(r#"{"a": [["4"]], "b": [["6"]]}"#);
    let o = invoke(&["project", "--structure", "H(1,0)", "--perturbation", e.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status, 0);
    let v = json(&o);
    assert_eq!(v["d_values"][0]["value"], "6");
    assert_eq!(v["reducer"], serde_json::json!([["-2"]]));
    assert_eq!(v["residual_check"], true);

    let asym = temp_file(r#"{"a": [["1","2"],["3","1"]], "b": [["0","0"],["0","0"]]}"#);
    let o = invoke(&["project", "--structure", "H(2,0)", "--perturbation", asym.path().to_str().unwrap()]);
    assert_eq!(o.status, EXIT_ERROR);
}

#[test]
fn construct_reports_greedy_and_assembled_patterns() {
    let o = invoke(&["construct", "--structure", "H(2,0)", "--format", "json"]);
    assert_eq!(o.status, 0);
    let v = json(&o);
    assert_eq!(v["codim"], 2);
    assert_eq!(v["greedy"]["params"], 2);
    assert_eq!(v["assembled"]["params"], 2);
}

#[test]
fn binary_exit_status() {
    let bin = env!("CARGO_BIN_EXE_sympencil");
    let ok = Command::new(bin).args(["verify", "--structure", "K(2),L(0)"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("pass"));
    let bad = Command::new(bin).args(["verify", "--structure", "H(0,1)"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(EXIT_ERROR));
    assert!(!bad.stderr.is_empty());
}
