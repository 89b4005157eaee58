//! End-to-end behaviour of the binary: exit codes, file formats, sidecars.

use std::path::Path;
use std::process::{Command, Output};

use uncloneable_lab::linalg::io::MatrixRecord;
use uncloneable_lab::linalg::state::DensityOperator;

fn lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uncloneable-lab"))
        .args(args)
        .output()
        .unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn missing_out_exits_with_usage_code() {
    let o = lab(&["qecm-demo"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--out"));
}

#[test]
fn passing_run_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("demo.csv");
    let o = lab(&["qecm-demo", "--n", "1", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&o.stdout).trim(), "PASS 74/74");
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("# schemaVersion: 1\ncheck,key,x,value,expected,pass\n"));
}

#[test]
fn failed_checks_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    let o = lab(&[
        "clifford",
        "--n",
        "1",
        "--enumerate",
        "--inputs",
        "3",
        "--tol",
        "0",
        "--out",
        path(&out),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).starts_with("FAIL "));
    assert!(out.exists());
}

#[test]
fn invalid_state_file_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bad.json");
    std::fs::write(&input, r#"{"dims":[2],"re":[1,0,0,1],"im":[0,0,0,0]}"#).unwrap();
    let out = dir.path().join("h.json");
    let o = lab(&["entropy", "--in", path(&input), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(err["error"].is_string());
    assert!(!out.exists());
}

#[test]
fn entropy_of_state_file() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("phi.json");
    let rec = MatrixRecord::from_state(&DensityOperator::max_entangled(2));
    std::fs::write(&input, rec.to_json().unwrap()).unwrap();
    let out = dir.path().join("h.json");
    let o = lab(&[
        "entropy",
        "--in",
        path(&input),
        "--task",
        "min",
        "--out",
        path(&out),
        "--quiet",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!((doc["value"].as_f64().unwrap() + 1.0).abs() < 1e-6);
    assert!(doc["gap"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn report_sidecar_records_config() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bound.csv");
    let o = lab(&[
        "bound-table",
        "--points",
        "4",
        "--seed",
        "3",
        "--out",
        path(&out),
        "--report",
        "--quiet",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("bound.csv.report.json")).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["config"]["subcommand"], "bound-table");
    assert_eq!(doc["config"]["seed"], 3);
    assert_eq!(doc["summary"]["passed"], 4);
}

#[test]
fn seesaw_writes_state_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let o = lab(&[
        "moe-seesaw",
        "--game",
        "bb84",
        "--restarts",
        "2",
        "--out",
        path(&out),
        "--quiet",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let state = std::fs::read_to_string(dir.path().join("s.json.state.json")).unwrap();
    let rho = MatrixRecord::from_json(&state).unwrap().to_state().unwrap();
    assert_eq!(rho.dims(), &[2, 2, 2]);
}

#[test]
fn repeated_flag_warns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("q.csv");
    let o = lab(&["qecm-demo", "--seed", "1", "--seed", "2", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--seed given 2 times"));
}
