use std::process::Command;

use oc_verifier::chevalley::WindowPolicy;
use oc_verifier::cli::{run_with, sweep, SweepResult};
use oc_verifier::partitions::Shape;
use oc_verifier::spectrum::{analyze, Mode, PropertyOReport, Tolerances};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("oc-verifier").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

#[test]
fn verify_ig25_passes_with_json() {
    let (code, out, _) = run(&["verify", "--k", "2", "--n", "2", "--mode", "both", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exact"]["holds"], true);
    assert_eq!(v["exact"]["period"], 4);
    assert_eq!(v["numeric"]["condition1"], true);
    assert_eq!(v["numeric"]["condition2"], true);
    assert_eq!(v["numeric"]["delta0_provenance"], "implementation-derived");
}

#[test]
fn lagrangian_shape_is_rejected() {
    let (code, _, err) = run(&["verify", "--k", "3", "--n", "2"]);
    assert_eq!(code, 2);
    assert!(err.contains("Lagrangian"), "{err}");
}

#[test]
fn invalid_shapes_exit_2() {
    assert_eq!(run(&["enumerate", "--k", "0", "--n", "2"]).0, 2);
    assert_eq!(run(&["enumerate", "--k", "5", "--n", "2"]).0, 2);
    assert_eq!(run(&["enumerate", "--k", "-1", "--n", "2"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
}

#[test]
fn malformed_partitions_exit_2() {
    for bad in ["3,x", "4,0", "2,-1", "1,2", "1"] {
        let (code, _, _) = run(&["chevalley", "--k", "2", "--n", "2", "--partition", bad]);
        assert_eq!(code, 2, "partition {bad}");
    }
}

#[test]
fn chevalley_lists_quantum_terms() {
    let (code, out, _) = run(&["chevalley", "--k", "2", "--n", "2", "--partition", "3,2", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert!(v["classical"].as_array().unwrap().is_empty());
    assert_eq!(v["quantum"].as_array().unwrap().len(), 2);
}

#[test]
fn sweep_to_five_passes() {
    let (code, out, _) = run(&["sweep", "--max-n", "5", "--mode", "both", "--json", "--jobs", "2"]);
    assert_eq!(code, 0);
    let res: SweepResult = serde_json::from_str(&out).unwrap();
    assert_eq!(res.rows.len(), 15);
    assert!(res.all_pass);
    assert_eq!(res.window_disagreements, 0);
    assert!(res.rows.iter().all(|r| r.report.verdict && r.report.paths_agree == Some(true)));
}

#[test]
fn sweep_with_paper_literal_window_completes() {
    let (code, out, _) = run(&["sweep", "--max-n", "3", "--window", "paper-literal", "--json"]);
    assert_eq!(code, 0);
    let res: SweepResult = serde_json::from_str(&out).unwrap();
    assert!(res.rows.iter().all(|r| r.report.window == WindowPolicy::PaperLiteral));
}

#[test]
fn chains_report_the_worked_example() {
    let (code, out, _) = run(&["chains", "--k", "4", "--n", "5", "--kind", "point-to-zero", "--json"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["accumulated_coefficient"], 8);
    assert_eq!(v["chain"]["vertices"].as_array().unwrap().len(), 11);
    let (code, _, _) = run(&["chains", "--k", "2", "--n", "2", "--kind", "zero-to", "--target", "3,-1"]);
    assert_eq!(code, 0);
}

#[test]
fn graph_writes_dot_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ig25.dot");
    let (code, out, _) = run(&["graph", "--k", "2", "--n", "2", "--json", "--dot", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["edges"], 13);
    let dot = std::fs::read_to_string(&path).unwrap();
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("->").count(), 13);
}

#[test]
fn spectrum_writes_csv_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p4.csv");
    let (code, _, _) = run(&["spectrum", "--k", "1", "--n", "2", "--csv", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("re,im,modulus"));
    let rows: Vec<f64> = lines.map(|l| l.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(rows.len(), 5);
    assert!(rows.iter().all(|m| (m - 5.0).abs() < 1e-9));
}

#[test]
fn unwritable_output_path_exits_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("missing").join("x.dot");
    let (code, _, _) = run(&["graph", "--k", "2", "--n", "2", "--dot", path.to_str().unwrap()]);
    assert_eq!(code, 1);
}

#[test]
fn reports_round_trip_through_json() {
    let report = analyze(Shape::new(2, 3).unwrap(), Mode::Both, Tolerances::default(), WindowPolicy::Standard).unwrap();
    let back: PropertyOReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(back, report);
    let res = sweep(1, 3, Mode::Both, Tolerances::default(), WindowPolicy::Standard, 1).unwrap();
    let back: SweepResult = serde_json::from_str(&serde_json::to_string_pretty(&res).unwrap()).unwrap();
    assert_eq!(back, res);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_oc-verifier");
    let ok = Command::new(bin).args(["verify", "--k", "1", "--n", "1"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("PASS"));
    let bad = Command::new(bin).args(["verify", "--k", "3", "--n", "2"]).output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
    let help = Command::new(bin).arg("--help").output().unwrap();
    assert_eq!(help.status.code(), Some(0));
}
