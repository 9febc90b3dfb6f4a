//! Exit codes and output of the command-line tool.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qcets(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcets")).args(args).output().expect("binary runs")
}

fn table(name: &str) -> String {
    fixtures().join("tables").join(name).display().to_string()
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write_temp(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn verify_table_matrix_passes() {
    let o = qcets(&["verify", &table("tableI_n4.txt"), "--girth", "6", "--oracle", "on"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("verdict: pass"));
}

#[test]
fn verify_zero_matrix_fails_with_reason() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_temp(&dir, "zeros.txt", "3 3 7\n0 0 0\n0 0 0\n0 0 0\n");
    let o = qcets(&["verify", &f, "--girth", "6"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("zero-in-DD"));
}

#[test]
fn verify_girth8_table_matrix() {
    let o = qcets(&["verify", &table("tableII_n7.txt"), "--girth", "8", "--fast"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn search_finds_least_lifting() {
    let o = qcets(&["search", "--n", "4", "--girth", "6", "--N-min", "12", "--N-max", "13"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("N=12: found=0"), "{out}");
    assert!(out.contains("3 4 13"), "{out}");
}

#[test]
fn search_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("found.txt");
    let o = qcets(&[
        "search", "--n", "4", "--girth", "6", "--N-min", "13", "--N-max", "13", "--output",
        f.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(std::fs::read_to_string(&f).unwrap().starts_with("3 4 13"));
}

#[test]
fn search_with_nothing_found_exits_one() {
    let o = qcets(&["search", "--n", "4", "--girth", "6", "--N-min", "12", "--N-max", "12", "--mode", "exhaustive"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn inverted_range_is_a_usage_error() {
    let o = qcets(&["search", "--n", "4", "--girth", "6", "--N-min", "24", "--N-max", "23"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_girth_is_a_usage_error() {
    let o = qcets(&["verify", &table("tableI_n4.txt"), "--girth", "7"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lifting_one_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_temp(&dir, "one.txt", "3 2 1\n0 0\n0 0\n0 0\n");
    assert_eq!(qcets(&["verify", &f, "--girth", "6"]).status.code(), Some(2));
}

#[test]
fn missing_file_is_a_usage_error() {
    assert_eq!(qcets(&["verify", "/nonexistent/m.txt", "--girth", "6"]).status.code(), Some(2));
}

#[test]
fn table_one_passes() {
    let o = qcets(&["tables", "--which", "I"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn table_two_skips_inconsistent_rows() {
    let o = qcets(&["tables", "--which", "II", "--fast"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert_eq!(out.matches("[skipped]").count(), 2, "{out}");
    assert_eq!(out.matches("[pass]").count(), 2, "{out}");
}

#[test]
fn missing_fixtures_dir_is_a_usage_error() {
    let o = qcets(&["tables", "--which", "I", "--fixtures-dir", "/nonexistent"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn alist_export_header() {
    let o = qcets(&["export", &table("tableI_n4.txt"), "--format", "alist"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("52 39"));
    assert_eq!(lines.next(), Some("3 4"));
}

#[test]
fn expanded_text_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("m.txt");
    let o = qcets(&[
        "export", &table("tableI_n4.txt"), "--format", "expanded-text", "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let first = std::fs::read_to_string(&out).unwrap();
    let again = qcets(&["export", out.to_str().unwrap(), "--format", "expanded-text"]);
    assert_eq!(stdout(&again), first);
}

#[test]
fn table_style_input() {
    let dir = tempfile::tempdir().unwrap();
    let f = write_temp(&dir, "t.txt", "2 3 13\n1 3 9\n2 6 5\n");
    let o = qcets(&["verify", &f, "--girth", "6", "--table-style"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn json_report_is_versioned() {
    let o = qcets(&["verify", &table("tableI_n4.txt"), "--girth", "6", "--json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["verdict"], "pass");
}
