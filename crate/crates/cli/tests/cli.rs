//! End-to-end checks of the experiment runner binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pagesmooth"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

#[test]
fn audit_reports_tight_lru_bound() {
    let text = stdout(&[
        "audit",
        "--policy",
        "lru",
        "--k",
        "2",
        "--alphabet",
        "3",
        "--max-len",
        "6",
        "--delta",
        "1",
    ]);
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["result"]["worst_increase"]["fraction"], "3");
    assert_eq!(report["result"]["verdict"], "tight");
    assert_eq!(report["tool"], "pagesmooth");
}

#[test]
fn curves_emit_the_equation_values() {
    let csv = stdout(&["curves", "--k", "8", "--i", "4"]);
    let age7: Vec<&str> = csv
        .lines()
        .find(|l| l.starts_with("7,"))
        .expect("row for age 7")
        .split(',')
        .collect();
    assert_eq!(age7[2], "5/9");
}

#[test]
fn pairs_fifo_validates_configurations() {
    let line = stdout(&["pairs", "--family", "fifo", "--k", "3", "--rounds", "3"]);
    let record: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(record["declared_distance"], 1);
    assert_eq!(record["details"]["good_final"], "4,1,5");
    assert_eq!(record["details"]["bad_final"], "5,1,4");
    assert_eq!(
        record["details"]["extension_misses"]["bad_extension_misses"],
        9
    );
}

#[test]
fn fixpoint_prints_the_distance_table() {
    let text = stdout(&["fixpoint", "--format", "text"]);
    assert!(text.contains("one-edit bound: 17/6"));
    assert!(text.contains("[0 1] vs [1 0]     1/2"));
}

#[test]
fn mc_check_requires_a_seed() {
    let out = run(&[
        "mc-check",
        "--policy",
        "random",
        "--k",
        "2",
        "--sequence",
        "0,1,2,0",
        "--trials",
        "2000",
    ]);
    assert!(!out.status.success());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn mc_check_matches_the_exact_engine() {
    let text = stdout(&[
        "mc-check",
        "--policy",
        "random",
        "--k",
        "2",
        "--sequence",
        "0,1,2,0",
        "--trials",
        "20000",
        "--seed",
        "7",
    ]);
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(report["result"]["exact"]["fraction"], "15/4");
    assert_eq!(report["result"]["within_three_std_errors"], true);
}

#[test]
fn reruns_byte_reproduce_reports() {
    let args = [
        "audit",
        "--policy",
        "belady",
        "--k",
        "2",
        "--alphabet",
        "3",
        "--max-len",
        "5",
        "--delta",
        "1",
    ];
    assert_eq!(stdout(&args), stdout(&args));
}

#[test]
fn config_file_supplies_defaults_and_flags_override() {
    let dir = std::env::temp_dir().join(format!("pagesmooth-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg_path: PathBuf = dir.join("audit.json");
    std::fs::write(
        &cfg_path,
        r#"{ "policy": "lru", "k": 2, "alphabet": 3, "max_len": 4, "delta": 1 }"#,
    )
    .unwrap();
    let from_config = stdout(&["audit", "--config", cfg_path.to_str().unwrap()]);
    let report: serde_json::Value = serde_json::from_str(&from_config).unwrap();
    assert_eq!(report["config"]["max_len"], 4);

    // Flag overrides the config value.
    let overridden = stdout(&[
        "audit",
        "--config",
        cfg_path.to_str().unwrap(),
        "--max-len",
        "5",
    ]);
    let report: serde_json::Value = serde_json::from_str(&overridden).unwrap();
    assert_eq!(report["config"]["max_len"], 5);

    // Output files are written atomically and parse back.
    let out_path = dir.join("report.json");
    stdout(&[
        "audit",
        "--config",
        cfg_path.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let written: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(written["result"]["verdict"], "tight");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn invalid_parameters_exit_with_code_two() {
    let out = run(&["audit", "--policy", "no-such-policy", "--k", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["pairs", "--family", "mark", "--k", "4", "--ell", "4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_overflow_exits_with_code_three() {
    let out = run(&[
        "audit",
        "--policy",
        "lru",
        "--k",
        "2",
        "--alphabet",
        "3",
        "--max-len",
        "5",
        "--delta",
        "1",
        "--budget",
        "10",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn emitted_pair_sequences_round_trip_through_the_corpus_parser() {
    let line = stdout(&[
        "pairs", "--family", "eoa", "--k", "3", "--m", "4", "--delta", "2",
    ]);
    let record: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    for field in ["good", "bad"] {
        let text = record[field].as_str().unwrap();
        let parsed = pagesmooth::corpus::sequence_from_line(text).unwrap();
        assert_eq!(pagesmooth::corpus::sequence_to_line(&parsed), text);
    }
}

#[test]
fn partition_pairs_emit_layer_shapes() {
    let line = stdout(&["pairs", "--family", "partition-equitable", "--k", "3"]);
    let record: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(
        record["details"]["good_final_layer_sizes"],
        serde_json::json!([1, 1, 3])
    );
    assert_eq!(
        record["details"]["bad_final_layer_sizes"],
        serde_json::json!([1, 1, 1])
    );
}
