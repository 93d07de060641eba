use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ehc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ehc")).args(args).output().expect("run ehc")
}

fn stdout(args: &[&str]) -> String {
    let out = ehc(args);
    assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

const A3: [&str; 10] = ["--series", "A", "--rank", "3", "--model", "gl", "--q", "2", "--ell", "3"];

fn with(cmd: &[&str], rest: &[&str]) -> Vec<String> {
    cmd.iter().chain(rest).map(|s| s.to_string()).collect()
}

fn run_golden(args: Vec<String>, name: &str) {
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(stdout(&args), golden(name), "{name}");
}

#[test]
fn golden_tables() {
    run_golden(with(&["uch"], &A3), "uch_a3_gl.txt");
    run_golden(with(&["chains"], &A3), "chains_a3.txt");
    run_golden(with(&["blocks"], &A3), "blocks_a3.txt");
    run_golden(with(&["verify", "dade"], &A3), "dade_a3_gl.txt");
    run_golden(with(&["verify", "dade", "--format", "csv"], &A3), "dade_a3_gl.csv");
    run_golden(with(&["series"], &["--series", "C", "--rank", "2", "--q", "2", "--ell", "3"]), "series_c2.txt");
    run_golden(with(&["levis"], &["--series", "A", "--rank", "4", "--model", "gl", "--e", "2"]), "levis_a4_e2.txt");
    run_golden(with(&["verify", "ctc"], &["--series", "B", "--rank", "2", "--q", "2", "--ell", "3"]), "ctc_b2.txt");
}

#[test]
fn uch_json_shape() {
    let args = with(&["uch", "--format", "json"], &A3);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let v: Value = serde_json::from_str(&stdout(&args)).unwrap();
    assert_eq!(v["schema_version"], 1);
    let rows = v["rows"].as_array().unwrap();
    let degrees: Vec<&str> = rows.iter().map(|r| r["degree_at_q"].as_str().unwrap()).collect();
    let defects: Vec<u64> = rows.iter().map(|r| r["defect"].as_u64().unwrap()).collect();
    assert_eq!(degrees, ["1", "6", "8"]);
    assert_eq!(defects, [1, 0, 1]);
    for r in rows {
        let keys: Vec<&String> = r.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["defect", "degree", "degree_at_q", "label"]);
    }
}

#[test]
fn json_round_trip() {
    let cases: Vec<Vec<String>> = vec![
        with(&["uch", "--format", "json"], &A3),
        with(&["blocks", "--format", "json"], &A3),
        with(&["verify", "dade", "--format", "json"], &["--series", "C", "--rank", "2", "--q", "3", "--ell", "5"]),
        with(&["verify", "ctc", "--format", "json"], &["--series", "2A", "--rank", "3", "--q", "2", "--ell", "5"]),
    ];
    for args in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let text = stdout(&args);
        let v: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", text, "{args:?}");
        assert_eq!(v["schema_version"], 1);
    }
}

#[test]
fn verify_json_passes() {
    let out = ehc(&["verify", "dade", "--series", "C", "--rank", "2", "--q", "3", "--ell", "5", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], true);
}

#[test]
fn usage_errors_exit_2() {
    let bad: [&[&str]; 6] = [
        &["verify", "dade", "--series", "A", "--rank", "2", "--q", "4", "--ell", "2"],
        &["verify", "dade", "--series", "A", "--rank", "2", "--q", "6", "--ell", "3"],
        &["uch", "--series", "B", "--rank", "2", "--model", "gl", "--q", "2", "--ell", "3"],
        &["uch", "--series", "X", "--rank", "2", "--q", "2", "--ell", "3"],
        &["levis", "--series", "A", "--rank", "2", "--e", "2", "--q", "2", "--ell", "3"],
        &["blocks", "--series", "A", "--rank", "2", "--e", "2"],
    ];
    for args in bad {
        let out = ehc(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("ehc-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("uch.csv");
    let args = with(&["uch", "--format", "csv", "--output", path.to_str().unwrap()], &A3);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(stdout(&args), "");
    let body = std::fs::read_to_string(&path).unwrap();
    assert!(body.starts_with("label,degree,degree_at_q,defect\n"));
    assert_eq!(body.lines().count(), 4);
    std::fs::remove_dir_all(&dir).unwrap();
}
