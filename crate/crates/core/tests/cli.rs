use std::path::Path;
use std::process::{Command, Output};

use lct_uncertainty::harness::{Status, VerificationReport};
use serde_json::Value;

fn lctur(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lctur")).current_dir(dir).args(args).output().expect("spawn lctur")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn verify_from_flags_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = lctur(dir.path(), &["verify", "--relation", "theorem1", "--N", "2"]);
    assert_eq!(code(&out), 0);
    let report: VerificationReport = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report.status, Status::Pass);
    assert!(report.slack_f64().abs() < 1e-9);
}

#[test]
fn verify_from_spec_file_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let spec = r#"{"relation":"guanlei","state":{"kind":"squeezed","s":[0.3]},"theta":1.0,"phi":0.2}"#;
    std::fs::write(dir.path().join("spec.json"), spec).unwrap();
    let out = lctur(dir.path(), &["verify", "--spec", "spec.json", "--format", "csv", "--out", "r.csv"]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], VerificationReport::CSV_HEADER);
    assert!(lines[1].starts_with("guanlei,1,1,analytic,"));
}

#[test]
fn violations_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    // Five samples cannot resolve the vacuum: the grid entropies fall below the bound.
    let out = lctur(dir.path(), &["prepare", "--grid-points", "5", "--grid-extent", "1.2", "--out", "coarse.json"]);
    assert_eq!(code(&out), 0);
    let spec = r#"{"relation":"theorem1","state":{"kind":"file","path":"coarse.json"}}"#;
    std::fs::write(dir.path().join("spec.json"), spec).unwrap();
    let out = lctur(dir.path(), &["verify", "--spec", "spec.json"]);
    assert_eq!(code(&out), 2);
    let report: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["status"], "violation");
}

#[test]
fn bad_input_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["verify", "--relation", "bogus"][..],
        &["verify", "--relation", "theorem2"],
        &["verify", "--spec", "missing.json"],
        &["verify", "--relation", "theorem1", "--frobnicate"],
        &["transform", "--input", "missing.json", "--fourier"],
    ] {
        let out = lctur(dir.path(), args);
        assert_eq!(code(&out), 3, "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn transform_then_entropy() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path();
    assert_eq!(code(&lctur(p, &["prepare", "--out", "in.json"])), 0);
    let out = lctur(
        p,
        &["transform", "--input", "in.json", "--rotation", "0.7", "--encoding", "base64", "--out", "rot.json"],
    );
    assert_eq!(code(&out), 0);
    let file: Value = serde_json::from_str(&std::fs::read_to_string(p.join("rot.json")).unwrap()).unwrap();
    assert_eq!(file["encoding"], "base64");

    let before: Value = serde_json::from_str(&stdout(&lctur(p, &["entropy", "--input", "in.json"]))).unwrap();
    let after: Value =
        serde_json::from_str(&stdout(&lctur(p, &["entropy", "--input", "rot.json", "--alpha", "2"]))).unwrap();
    // The vacuum density is rotation invariant.
    let (h0, h1) = (before["shannon"].as_f64().unwrap(), after["shannon"].as_f64().unwrap());
    assert!((h0 - h1).abs() < 1e-6, "{h0} vs {h1}");
    assert!(after["renyi"].as_f64().unwrap() < h1);

    std::fs::write(p.join("s.json"), r#"{"n":1,"entries":[1.0,0.5,0.0,1.0]}"#).unwrap();
    let out = lctur(p, &["transform", "--input", "in.json", "--matrix", "s.json", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).starts_with("i0,x0,re,im\n"));
}

#[test]
fn sweep_writes_one_row_per_value() {
    let dir = tempfile::tempdir().unwrap();
    let out = lctur(
        dir.path(),
        &[
            "sweep",
            "--relation",
            "guanlei",
            "--axis",
            "angle_gap",
            "--from",
            "0.2",
            "--to",
            "3.0",
            "--steps",
            "8",
            "--format",
            "csv",
            "--out",
            "s.csv",
        ],
    );
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(dir.path().join("s.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 9);
    assert!(lines[1..].iter().all(|l| l.starts_with("angle_gap,") && l.contains(",pass,")));
}

#[test]
fn selftest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = lctur(dir.path(), &["selftest"]);
    assert_eq!(code(&out), 0);
    let checks: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let checks = checks.as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["passed"] == true));
}
