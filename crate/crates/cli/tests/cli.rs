use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rankbench"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn case1() -> Vec<String> {
    vec![
        "--mu".into(),
        data("case1_mu.csv"),
        "--sigma".into(),
        data("case1_sigma.csv"),
    ]
}

fn case2() -> Vec<String> {
    vec![
        "--mu".into(),
        data("case2_mu.csv"),
        "--sigma".into(),
        data("case2_sigma.csv"),
    ]
}

fn with<'a>(sub: &'a str, files: &'a [String], extra: &[&'a str]) -> Vec<&'a str> {
    let mut v = vec![sub];
    v.extend(files.iter().map(String::as_str));
    v.extend_from_slice(extra);
    v
}

#[test]
fn rank_case1_without_knn() {
    let files = case1();
    let out = stdout(&with(
        "rank",
        &files,
        &[
            "--exclude",
            "KNN",
            "--w-mu",
            "0.7",
            "--direction",
            "benefit",
            "--format",
            "json",
        ],
    ));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["order"][0], "CHO");
    assert_eq!(v["order"][5], "DRBM");
}

#[test]
fn rank_case2_json() {
    let files = case2();
    let out = stdout(&with(
        "rank",
        &files,
        &["--w-mu", "0.5", "--direction", "cost", "--format", "json"],
    ));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["order"][0], "REC");
    assert_eq!(v["order"][7], "KNN");
    for key in ["order", "xi", "ties", "config"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn missing_file_exit_one() {
    let out = run(&[
        "rank",
        "--mu",
        &data("case1_mu.csv"),
        "--sigma",
        "/no/such/sigma.csv",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/no/such/sigma.csv"));
}

#[test]
fn bad_flags_exit_two() {
    assert_eq!(run(&["rank", "--bogus"]).status.code(), Some(2));
    let files = case1();
    assert_eq!(
        run(&with("rank", &files, &["--direction", "up"]))
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn invalid_weight_exit_one() {
    let files = case1();
    let out = run(&with("rank", &files, &["--w-mu", "1.5"]));
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("weights"));
}

#[test]
fn exclude_matches_deleting_rows() {
    let dir = std::env::temp_dir().join(format!("rankbench-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for name in ["case1_mu.csv", "case1_sigma.csv"] {
        let text = std::fs::read_to_string(data(name)).unwrap();
        let kept: Vec<&str> = text.lines().filter(|l| !l.starts_with("KNN,")).collect();
        std::fs::write(dir.join(name), kept.join("\n") + "\n").unwrap();
    }
    let files = case1();
    let a = stdout(&with(
        "rank",
        &files,
        &["--exclude", "KNN", "--format", "json"],
    ));
    let mu = dir.join("case1_mu.csv");
    let sigma = dir.join("case1_sigma.csv");
    let b = stdout(&[
        "rank",
        "--mu",
        mu.to_str().unwrap(),
        "--sigma",
        sigma.to_str().unwrap(),
        "--format",
        "json",
    ]);
    assert_eq!(a, b);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn unknown_exclude_fails() {
    let files = case1();
    assert_eq!(
        run(&with("rank", &files, &["--exclude", "NOPE"]))
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn csv_and_table_show_same_numbers() {
    let files = case2();
    let table = stdout(&with(
        "rank",
        &files,
        &["--direction", "cost", "--format", "table"],
    ));
    let csv = stdout(&with(
        "rank",
        &files,
        &["--direction", "cost", "--format", "csv"],
    ));
    for line in csv.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        let row = table
            .lines()
            .find(|l| l.split_whitespace().nth(1) == Some(cells[1]))
            .unwrap();
        let table_cells: Vec<&str> = row.split_whitespace().collect();
        assert_eq!(table_cells, cells);
    }
}

fn same_to_12_digits(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

#[test]
fn json_round_trips() {
    let files = case1();
    let out = stdout(&with("rank", &files, &["--format", "json"]));
    let report: rankbench_core::RankReport = serde_json::from_str(&out).unwrap();
    let again: rankbench_core::RankReport =
        serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(report.order, again.order);
    assert_eq!(report.ties, again.ties);
    for (name, xi) in &report.xi {
        assert!(same_to_12_digits(*xi, again.xi[name]));
    }
}

#[test]
fn sweep_singleton_grid() {
    let files = case1();
    let out = stdout(&with(
        "sweep",
        &files,
        &["--start", "0.5", "--stop", "0.5", "--format", "json"],
    ));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["grid"].as_array().unwrap().len(), 1);
    assert!(v["stability_w_mu"].is_null());
    let table = stdout(&with("sweep", &files, &["--start", "0.5", "--stop", "0.5"]));
    assert!(table.contains("stable from w_mu = none"));
}

#[test]
fn sweep_bad_grid() {
    let files = case1();
    assert_eq!(
        run(&with("sweep", &files, &["--start", "0.9", "--stop", "0.5"]))
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn sweep_table_has_row_per_point() {
    let files = case2();
    let out = stdout(&with("sweep", &files, &["--direction", "cost"]));
    assert_eq!(out.lines().filter(|l| l.contains("REC >")).count(), 6);
}

#[test]
fn compare_case1_without_knn() {
    let files = case1();
    let out = stdout(&with(
        "compare",
        &files,
        &["--exclude", "KNN", "--w-mu", "0.6", "--format", "json"],
    ));
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert_eq!(v["rows"][0]["atopsis"], "CHO");
    assert_eq!(v["rows"][0]["hellinger"], "CHO");
}

#[test]
fn stats_counts() {
    let out = stdout(&[
        "stats",
        "--mu",
        &data("case2_mu.csv"),
        "--direction",
        "cost",
    ]);
    assert!(out.contains("13 of 28 pairs significant"));
    let csv = stdout(&["stats", "--mu", &data("case1_mu.csv"), "--format", "csv"]);
    assert_eq!(csv.lines().filter(|l| l.ends_with(",*")).count(), 12);
    assert!(!csv.contains("-0.000000"));
}

#[test]
fn stats_bad_alpha() {
    assert_eq!(
        run(&["stats", "--mu", &data("case2_mu.csv"), "--alpha", "0"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn out_writes_file() {
    let path = std::env::temp_dir().join(format!("rankbench-out-{}.json", std::process::id()));
    let files = case2();
    let printed = stdout(&with(
        "rank",
        &files,
        &["--format", "json", "--out", path.to_str().unwrap()],
    ));
    assert!(printed.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.contains("\"order\""));
    std::fs::remove_file(path).ok();
}
