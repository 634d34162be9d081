//! End-to-end tests against the compiled binary.

use std::process::{Command, Output};

fn relgw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relgw"))
        .args(args)
        .env_remove("COUNT_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

#[test]
fn compute_worked_example_all_engines() {
    for engine in ["paths", "closed", "ch"] {
        let out = relgw(&[
            "compute", "--d", "3", "--g", "0", "--alpha", "0,1", "--beta", "1", "--engine", engine,
        ]);
        assert!(out.status.success(), "engine {engine}: {}", stderr(&out));
        assert_eq!(stdout(&out), "10\n", "engine {engine}");
    }
}

#[test]
fn compute_base_and_irreducible() {
    let out = relgw(&["compute", "--d", "1", "--g", "0", "--beta", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\n");

    // beta defaults to d - I*alpha simple contacts.
    let out = relgw(&["compute", "--d", "3", "--engine", "irr"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "12\n");
}

#[test]
fn compute_rejects_inconsistent_key() {
    let out = relgw(&[
        "compute", "--d", "2", "--g", "0", "--alpha", "1,1", "--beta", "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(
        stderr(&out).contains("I*alpha + I*beta must equal"),
        "stderr: {}",
        stderr(&out)
    );
}

#[test]
fn compute_json_record() {
    let out = relgw(&[
        "compute", "--d", "3", "--g", "0", "--alpha", "0,1", "--beta", "1", "--format", "json",
    ]);
    assert!(out.status.success());
    let record: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(record["polygon"], "triangle");
    assert_eq!(record["d"], 3);
    assert_eq!(record["g"], 0);
    assert_eq!(record["alpha"], "0,1");
    assert_eq!(record["beta"], "1");
    assert_eq!(record["engine"], "paths");
    assert_eq!(record["value"], "10");
    // The sequence syntax round-trips.
    let alpha: relgw::Sequence = record["alpha"].as_str().unwrap().parse().unwrap();
    assert_eq!(alpha, relgw::Sequence::new(vec![0, 1]));
}

#[test]
fn compute_rectangle_key() {
    let out = relgw(&[
        "compute", "--dprime", "2", "--d", "2", "--g", "0", "--beta", "2", "--engine", "ch",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "12\n");
}

#[test]
fn paths_lists_the_five_qualifying_records() {
    let out = relgw(&[
        "paths", "--d", "3", "--g", "0", "--alpha", "0,1", "--beta", "1", "--format", "json",
    ]);
    assert!(out.status.success());
    let lines: Vec<serde_json::Value> = stdout(&out)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 6);
    let mut values: Vec<String> = lines[..5]
        .iter()
        .map(|r| r["mu_alpha_beta"].as_str().unwrap().to_string())
        .collect();
    values.sort();
    assert_eq!(values, ["1", "1", "2", "2", "4"]);
    for record in &lines[..5] {
        assert_eq!(record["skip"], false);
        assert_eq!(record["polygon"]["shape"], "triangle");
        assert_eq!(record["polygon"]["d"], 3);
        assert!(record["points"].as_array().unwrap().len() == 7);
    }
    assert_eq!(lines[5], serde_json::json!({"paths": 5, "total": "10"}));
}

#[test]
fn paths_include_skips_adds_flagged_zero_records() {
    let base = relgw(&["paths", "--d", "2", "--g", "-2", "--beta", "2", "--format", "json"]);
    let more = relgw(&[
        "paths", "--d", "2", "--g", "-2", "--beta", "2", "--format", "json", "--include-skips",
    ]);
    assert!(base.status.success() && more.status.success());
    let base_lines: Vec<serde_json::Value> = stdout(&base)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    let more_lines: Vec<serde_json::Value> = stdout(&more)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert!(more_lines.len() > base_lines.len());
    let skips: Vec<_> = more_lines
        .iter()
        .filter(|r| r["skip"] == true)
        .collect();
    assert!(!skips.is_empty());
    for record in &skips {
        assert_eq!(record["mu_alpha_beta"], "0");
    }
    // The summary total is unchanged by the zero records.
    assert_eq!(base_lines.last().unwrap()["total"], "0");
    assert_eq!(more_lines.last().unwrap()["total"], "0");
}

#[test]
fn table_csv_matrix() {
    let out = relgw(&["table", "2", "--gmin", "-1", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "d,-1,0\n1,0,1\n2,3,1\n");
}

#[test]
fn table_engines_agree() {
    let by_paths = relgw(&["table", "3", "--gmin", "-2", "--engine", "paths", "--format", "csv"]);
    let by_ch = relgw(&["table", "3", "--gmin", "-2", "--engine", "ch", "--format", "csv"]);
    assert!(by_paths.status.success() && by_ch.status.success());
    assert_eq!(stdout(&by_paths), stdout(&by_ch));
    assert!(stdout(&by_ch).contains("3,15,21,12,1"));
}

#[test]
fn table_empty_genus_range() {
    let out = relgw(&["table", "2", "--gmin", "1", "--gmax", "0", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "");
}

#[test]
fn verify_passes_and_respects_cap() {
    let out = relgw(&["verify", "2"]);
    assert!(out.status.success(), "{}", stdout(&out));
    assert!(stdout(&out).contains("all checks passed"));

    let out = relgw(&["verify", "9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("safety cap"));

    let out = relgw(&["verify", "2", "--format", "json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(report["all_passed"], true);
    assert!(report["triangle"]["keys_exercised"].as_u64().unwrap() >= 40);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "paths", "--d", "3", "--g", "0", "--alpha", "0,1", "--beta", "1", "--format", "json",
    ];
    let first = relgw(&args);
    let second = relgw(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn parallelism_does_not_change_results() {
    let serial = relgw(&["compute", "--d", "4", "--g", "1", "--jobs", "1"]);
    let parallel = relgw(&["compute", "--d", "4", "--g", "1", "--jobs", "4"]);
    assert!(serial.status.success() && parallel.status.success());
    assert_eq!(serial.stdout, parallel.stdout);
    assert_eq!(stdout(&serial), "225\n");
}

#[test]
fn cache_dir_persists_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_relgw"))
            .args(args)
            .env("COUNT_CACHE_DIR", dir.path())
            .output()
            .expect("binary runs")
    };
    let args = [
        "compute", "--d", "3", "--g", "0", "--alpha", "0,1", "--beta", "1", "--engine", "ch",
    ];
    let first = run(&args);
    assert!(first.status.success());
    let cache = std::fs::read_to_string(dir.path().join("counts.kv")).unwrap();
    assert!(cache.contains("t3/0/0,1/1/ch\t10"), "cache:\n{cache}");

    let second = run(&args);
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
}
