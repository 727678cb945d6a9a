use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn torclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torclass"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures");
    dir.join(format!("{name}.json")).display().to_string()
}

fn stdout_json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("torclass-cli-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    dir
}

#[test]
fn predict_reports_closed_forms() {
    let v = stdout_json(&torclass(&["predict", "--s1", "4", "--s", "5"]));
    assert_eq!(v["h"], serde_json::json!([1, 3, 6, 9, 4, 1]));
    assert_eq!(v["t"], 3);
    assert_eq!(v["generic_class"], "G(1)");
    assert_eq!(v["generic_m"], 9);

    let v = stdout_json(&torclass(&["predict", "--s1", "6", "--s", "7"]));
    assert_eq!(v["generic_class"], "H(0,0)");
    assert_eq!(v["generic_m"], 12);
}

#[test]
fn predict_in_other_dimensions() {
    let v = stdout_json(&torclass(&["predict", "--s1", "3", "--s", "4", "--e", "4"]));
    assert_eq!(v["e"], 4);
    assert_eq!(v["gorenstein_h"], serde_json::json!([1, 4, 10, 4, 1]));
}

#[test]
fn invalid_pairs_fail_cleanly() {
    let out = torclass(&["predict", "--s1", "2", "--s", "4"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error:"), "{err}");
    assert!(err.contains("s < 2*s1"), "{err}");

    let out = torclass(&["experiment", "--s1", "3", "--s", "4", "--trials", "0"]);
    assert_eq!(out.status.code(), Some(1));

    let out = torclass(&["classify", "--ideal", "/nonexistent/ideal.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn classify_fixture_files() {
    let v = stdout_json(&torclass(&[
        "classify",
        "--ideal",
        &fixture("compressed_g1"),
        "--format",
        "json",
    ]));
    assert_eq!(v["h"], serde_json::json!([1, 3, 6, 4, 1]));
    assert_eq!(v["class"], "G(1)");
    assert_eq!(v["m"], 6);
    assert_eq!(v["type"], 2);

    let out = torclass(&["classify", "--ideal", &fixture("type2_socle_2_3")]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("h-vector: (1,3,4,1)"), "{text}");
    assert!(text.contains("socle polynomial: χ^2 + χ^3"), "{text}");
    assert!(text.contains("class: B"), "{text}");
}

#[test]
fn pair_is_reproducible_and_exports_ideals() {
    let args = ["pair", "--s1", "3", "--s", "5", "--seed", "42"];
    let (a, b) = (torclass(&args), torclass(&args));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(
        v["observation"]["socle"],
        serde_json::json!([0, 0, 0, 1, 0, 1])
    );
    assert_eq!(v["seed"], 42);

    let dir = scratch_dir("export");
    let mut with_export = args.to_vec();
    let dir_arg = dir.display().to_string();
    with_export.extend(["--export", &dir_arg]);
    assert!(torclass(&with_export).status.success());
    for name in ["i1", "i2", "intersection", "sum"] {
        assert!(dir.join(format!("{name}.json")).exists(), "{name}");
    }
    let inter = dir.join("intersection.json").display().to_string();
    let c = stdout_json(&torclass(&[
        "classify", "--ideal", &inter, "--format", "json",
    ]));
    assert_eq!(c["class"], v["observation"]["class"]);
    assert_eq!(c["m"], v["observation"]["m"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn csv_output_keeps_metadata_off_stdout() {
    let out = torclass(&[
        "experiment",
        "--s1",
        "3",
        "--s",
        "4",
        "--trials",
        "4",
        "--seed",
        "7",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let mut lines = stdout.lines();
    assert_eq!(
        lines.next().unwrap(),
        torclass::experiment::CSV_COLUMNS.join(",")
    );
    assert!(lines.next().unwrap().starts_with("3,4,"));
    assert!(lines.next().is_none());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(
        stderr.contains("prime = 32003") && stderr.contains("trials = 4"),
        "{stderr}"
    );
}

#[test]
fn table_written_to_file() {
    let dir = scratch_dir("table");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.md");
    let path_arg = path.display().to_string();
    let out = torclass(&[
        "table1", "--max-s", "3", "--trials", "3", "--out", &path_arg,
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("trials = 3"), "{text}");
    assert_eq!(
        text.lines()
            .filter(|l| l.starts_with("| 2 ") || l.starts_with("| 3 "))
            .count(),
        3,
        "{text}"
    );
    std::fs::remove_dir_all(&dir).unwrap();
}
