use std::process::Command;

fn ffr(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ffr")).args(args).output().expect("binary runs")
}

#[test]
fn list_prints_every_suite() {
    let out = ffr(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 12);
    assert!(text.lines().any(|l| l == "main-zero"));
}

#[test]
fn passing_suite_exits_zero_and_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.csv");
    let out = ffr(&["gauss", "--q-list", "3,9,27", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("[PASS] direct-equals-explicit"));
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 4);
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("g.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["q_list"], serde_json::json!([3, 9, 27]));
    assert_eq!(json["pass"], true);
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"grid": [{"d": 4, "q": 5}], "samples": 4, "seed": 7}"#).unwrap();
    let out = ffr(&["weak-l4", "--config", cfg.to_str().unwrap(), "--seed", "11", "--json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["config"]["seed"], 11);
    assert_eq!(report["config"]["samples"], 4);
    assert!(report["cases"].as_array().unwrap().iter().all(|c| c["q"] == 5));
}

#[test]
fn exponent_flags_set_the_pair() {
    let out = ffr(&["main-nonzero", "--d", "4", "--q-list", "5,7", "--p", "8/5", "--r", "4", "--samples", "3", "--json"]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let pairs = report["config"]["pairs"].as_array().unwrap();
    assert_eq!(pairs.len(), 1);
    assert!((pairs[0]["p"].as_f64().unwrap() - 1.6).abs() < 1e-12);
}

#[test]
fn failing_assertion_exits_one() {
    // The affine witness ratio is q/(q+1): up more than ten percent from 5 to 29.
    let out = ffr(&["energy", "--d", "4", "--q-list", "5,29", "--samples", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().contains("[FAIL]"));
}

#[test]
fn errors_exit_two() {
    assert_eq!(ffr(&["no-such-suite"]).status.code(), Some(2));
    assert_eq!(ffr(&["gauss", "--q-list", "6"]).status.code(), Some(2));
    assert_eq!(ffr(&["gauss", "--config", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(ffr(&["main-zero", "--p", "2"]).status.code(), Some(2));
}
