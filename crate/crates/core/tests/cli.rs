//! Exit-code and report contract of the command-line front end.

use std::process::{Command, Output};

use serde_json::Value;

fn peakwise(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_peakwise"))
        .args(args)
        .output()
        .expect("spawn the CLI")
}

fn stdout_json(output: &Output) -> Value {
    serde_json::from_slice(&output.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&output.stdout)
        )
    })
}

#[test]
fn passing_scenario_exits_zero() {
    let out = peakwise(&["scenario", "--name", "theorem1"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["command"], "scenario");
    assert_eq!(report["pass"], true);
    assert_eq!(report["reports"][0]["scenario"], "theorem1");
}

#[test]
fn failed_verdict_exits_one_with_a_witness() {
    let out = peakwise(&[
        "verify",
        "--rule",
        "fstar",
        "--grid-uniform",
        "3",
        "--agents",
        "3",
        "--axiom",
        "efficiency",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["pass"], false);
    let verdict = &report["verdicts"][0];
    assert_eq!(verdict["axiom"], "efficiency");
    assert_eq!(verdict["pass"], false);
    assert_eq!(verdict["witness"]["kind"], "inefficiency");
    assert!(verdict["witness"]["efficient_set"].is_array());
    assert!(verdict["elapsed_ms"].is_u64());
}

#[test]
fn full_verify_of_a_target_rule_passes() {
    let out = peakwise(&[
        "verify", "--rule", "target", "--x", "1/2", "--y", "0", "--grid", "0,1/2,1", "--agents",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["rule"], "target(0.5, 0)");
    assert_eq!(report["verdicts"].as_array().unwrap().len(), 9);
    assert!(report["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .all(|v| v["pass"] == Value::Bool(true)));
}

#[test]
fn usage_errors_exit_two() {
    // Unknown axiom name.
    let out = peakwise(&[
        "verify",
        "--rule",
        "fstar",
        "--grid-uniform",
        "3",
        "--agents",
        "3",
        "--axiom",
        "sp2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown axiom"));

    // Off-grid target value.
    let out = peakwise(&[
        "verify", "--rule", "target", "--x", "0.3", "--y", "0", "--grid", "0,1/2,1", "--agents",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // Unknown subcommand flags are clap's domain.
    let out = peakwise(&["verify", "--rule"]);
    assert_eq!(out.status.code(), Some(2));

    // Missing grid.
    let out = peakwise(&["count"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oversized_searches_are_refused_without_force() {
    let out = peakwise(&[
        "enumerate",
        "--require",
        "onto",
        "--grid-uniform",
        "2",
        "--agents",
        "8",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--force"));
}

#[test]
fn enumerate_reports_recognized_pairs() {
    let out = peakwise(&[
        "enumerate",
        "--require",
        "onto,pairwise_sp",
        "--grid-uniform",
        "2",
        "--agents",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["count"], 8);
    assert_eq!(report["summary"]["total"], 8);
    assert_eq!(report["summary"]["target_rules"], 4);
    assert_eq!(report["summary"]["other"], 4);
    let rules = report["rules"].as_array().unwrap();
    assert_eq!(rules.len(), 8);
    assert_eq!(
        rules
            .iter()
            .filter(|r| !r["target_default"].is_null())
            .count(),
        4
    );
}

#[test]
fn table_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("fd.txt");
    // The two-agent fallback-dictator table on {0,1}, profile-id order.
    std::fs::write(&path, "0\n0\n1\n0\n0\n0\n1\n1\n1\n").unwrap();

    let path = path.to_str().unwrap();
    let out = peakwise(&[
        "verify",
        "--rule",
        "table",
        "--file",
        path,
        "--grid",
        "0,1",
        "--agents",
        "2",
        "--axiom",
        "pairwise_sp",
    ]);
    assert_eq!(out.status.code(), Some(0));

    let out = peakwise(&[
        "verify",
        "--rule",
        "table",
        "--file",
        path,
        "--grid",
        "0,1",
        "--agents",
        "2",
        "--axiom",
        "anonymity",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = stdout_json(&out);
    assert_eq!(report["verdicts"][0]["witness"]["kind"], "profile_pair");
}

#[test]
fn scenario_output_ignores_worker_count() {
    let single = peakwise(&["scenario", "--name", "example1", "--workers", "1"]);
    let triple = peakwise(&["scenario", "--name", "example1", "--workers", "3"]);
    assert_eq!(single.status.code(), Some(0));
    assert_eq!(single.stdout, triple.stdout);
}

#[test]
fn count_reports_the_preference_formula() {
    let out = peakwise(&["count", "--grid-uniform", "4", "--agents", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout_json(&out);
    assert_eq!(report["points"], 4);
    assert_eq!(report["preferences"], 9);
    assert_eq!(report["profiles"], 81);
    assert_eq!(report["grid"], serde_json::json!([0, "1/3", "2/3", 1]));
}
