use std::path::Path;
use std::process::Command;

use clap::Parser;
use matchkit::cli::{run, ExitStatus, RunConfig};
use serde_json::{json, Value};
use tempfile::TempDir;

fn write(dir: &TempDir, name: &str, body: Value) -> String {
    let path = dir.path().join(name);
    std::fs::write(&path, body.to_string()).unwrap();
    path.to_str().unwrap().to_string()
}

fn invoke(args: &[&str]) -> (ExitStatus, Value) {
    let config = RunConfig::try_parse_from(std::iter::once("matchkit").chain(args.iter().copied())).unwrap();
    let report = run(&config);
    (report.status, report.document)
}

fn fourth_root_pair() -> Value {
    let ambient = json!({"kind": "algebra", "minimal_polynomial": ["-2", "0", "0", "0", "1"]});
    json!({
        "A": {"ambient": ambient, "basis": [["1", "0", "0", "0"], ["0", "0", "1", "0"]]},
        "B": {"ambient": ambient, "basis": [["0", "1", "0", "0"], ["0", "0", "1", "0"]]},
    })
}

#[test]
fn envelope_and_hall_violator() {
    let dir = TempDir::new().unwrap();
    let pair = write(&dir, "z6.json", json!({"group": {"kind": "cyclic", "n": 6}, "A": [1, 4], "B": [3, 2]}));
    let (status, doc) = invoke(&["match", "find", "--pair", &pair]);
    assert_eq!(status, ExitStatus::Ok);
    assert_eq!(doc["tool"], "matchkit");
    assert_eq!(doc["command"], "match find");
    assert_eq!(doc["seed"], 0);
    assert_eq!(doc["config"]["match"]["find"]["pair"], pair.as_str());
    assert_eq!(doc["result"]["matching"], Value::Null);
    assert_eq!(doc["result"]["hall_violator"], json!([1, 4]));
    assert_eq!(doc["result"]["verified"], true);
}

#[test]
fn bad_inputs_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let uneven = write(&dir, "uneven.json", json!({"group": {"kind": "cyclic", "n": 6}, "A": [1, 4], "B": [3]}));
    let (status, doc) = invoke(&["match", "find", "--pair", &uneven]);
    assert_eq!(status, ExitStatus::BadInput);
    assert_eq!(doc["error"]["kind"], "SizeMismatch");

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"group\": ").unwrap();
    let (status, doc) = invoke(&["criteria", "check", "--pair", broken.to_str().unwrap()]);
    assert_eq!(status, ExitStatus::BadInput);
    assert!(doc["error"]["message"].as_str().unwrap().contains("line 1"));
}

#[test]
fn family_alias_matches_named_family() {
    let (_, named) = invoke(&["primes", "family", "--family", "powers-of-two", "--upto", "100"]);
    let (_, alias) = invoke(&["primes", "family", "--prop", "23", "--upto", "100"]);
    assert_eq!(named["result"], alias["result"]);
    assert_eq!(named["result"]["primes"], json!([7, 23, 31, 47, 71, 73, 79, 89]));
}

#[test]
fn scan_is_deterministic_and_logs_each_pair() {
    let dir = TempDir::new().unwrap();
    let log = dir.path().join("scan.jsonl");
    let log = log.to_str().unwrap();
    let args = ["--seed", "4", "primes", "scan", "--p", "11", "--size-cap", "3", "--budget", "50", "--log", log];
    let (status, first) = invoke(&args);
    let (_, second) = invoke(&args);
    assert_eq!(status, ExitStatus::Ok);
    assert_eq!(first["result"], second["result"]);
    let lines: Vec<Value> =
        std::fs::read_to_string(log).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 100);
    assert!(lines.iter().all(|l| l["seed"] == 4 && l["p"] == 11));
}

#[test]
fn truncated_exhaustive_scan_is_inconclusive() {
    let (status, doc) = invoke(&["primes", "scan", "--p", "7", "--size-cap", "3", "--budget", "100"]);
    assert_eq!(status, ExitStatus::Inconclusive);
    assert_eq!(doc["result"]["complete"], false);
    assert_eq!(doc["result"]["pairs_scanned"], 100);
}

#[test]
fn linear_match_reports_violator() {
    let dir = TempDir::new().unwrap();
    let pair = write(&dir, "root.json", fourth_root_pair());
    let (status, doc) = invoke(&["linear", "match", "--pair", &pair]);
    assert_eq!(status, ExitStatus::Ok);
    assert_eq!(doc["result"]["hall_violator"]["indices"], json!([0, 1]));
}

#[test]
fn binary_writes_report_and_exit_code() {
    let dir = TempDir::new().unwrap();
    let pair = write(&dir, "z5.json", json!({"group": {"kind": "cyclic", "n": 5}, "A": [0, 1], "B": [1, 2]}));
    let out = dir.path().join("out.json");
    let status = Command::new(env!("CARGO_BIN_EXE_matchkit"))
        .args(["match", "find", "--pair", &pair, "--output", out.to_str().unwrap()])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(doc["result"]["matching"].is_object() || doc["result"]["matching"].is_array());

    let missing = Command::new(env!("CARGO_BIN_EXE_matchkit"))
        .args(["match", "find", "--pair", Path::new("/nonexistent/pair.json").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
}
