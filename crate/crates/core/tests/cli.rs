use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use parcon::cli::{EXIT_CHECK_FAILED, EXIT_CONFIG, EXIT_OK};

fn parcon(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_parcon"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = Vec::new();
    for e in walk(dir) {
        files.push((e.strip_prefix(dir).unwrap().display().to_string(), fs::read(&e).unwrap()));
    }
    files.sort();
    files
}

fn walk(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut out = Vec::new();
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}

#[test]
fn theory_ua_writes_four_by_four_table() {
    let dir = tempfile::tempdir().unwrap();
    let o = parcon(&["--series", "A", "--rank", "2", "--prime", "3", "--partition", "1,1", "--task", "theory-ua"], dir.path());
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["superclasses.json", "supercharacters.json", "table.csv", "report.json"] {
        assert!(dir.path().join(f).exists(), "{} missing", f);
    }
    let csv = fs::read_to_string(dir.path().join("table.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 16);
    let classes: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("superclasses.json")).unwrap()).unwrap();
    assert_eq!(classes["count"], 4);
}

#[test]
fn outputs_are_byte_identical_without_timestamp() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["--series", "A", "--rank", "3", "--prime", "3", "--partition", "2,1", "--task", "export-all", "--no-timestamp"];
    let oa = parcon(&args, a.path());
    let ob = parcon(&[&args[..], &["--workers", "1"]].concat(), b.path());
    assert_eq!(oa.status.code(), Some(EXIT_OK));
    assert_eq!(ob.status.code(), Some(EXIT_OK));
    let (fa, fb) = (read_all(a.path()), read_all(b.path()));
    assert_eq!(fa.len(), 7);
    assert_eq!(fa, fb);
}

#[test]
fn timestamp_is_reported_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let o = parcon(&["--series", "A", "--rank", "2", "--prime", "3", "--task", "classify-ua"], dir.path());
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let report = fs::read_to_string(dir.path().join("report.json")).unwrap();
    assert!(report.contains("generated_unix"));
}

#[test]
fn invalid_configs_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["--series", "A", "--rank", "2", "--prime", "4", "--task", "verify"][..],
        &["--series", "A", "--rank", "2", "--prime", "2", "--task", "verify"][..],
        &["--series", "A", "--rank", "3", "--prime", "3", "--partition", "2,2", "--task", "verify"][..],
        &["--series", "C", "--rank", "2", "--prime", "3", "--partition", "1,3", "--task", "verify"][..],
        &["--series", "E", "--rank", "2", "--prime", "3", "--task", "verify"][..],
    ] {
        let o = parcon(args, dir.path());
        assert_eq!(o.status.code(), Some(EXIT_CONFIG), "{:?}", args);
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn failed_theorem_check_has_its_own_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let o = parcon(&["--series", "C", "--rank", "2", "--prime", "3", "--partition", "2,2", "--task", "verify", "--no-timestamp"], dir.path());
    assert_eq!(o.status.code(), Some(EXIT_CHECK_FAILED));
    assert_ne!(EXIT_CHECK_FAILED, EXIT_CONFIG);
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
    assert_eq!(report["ua"]["axioms"]["passed"], true);
}

#[test]
fn verify_passes_on_c2_borel() {
    let dir = tempfile::tempdir().unwrap();
    let o = parcon(&["--series", "C", "--rank", "2", "--prime", "3", "--task", "verify"], dir.path());
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(report["claims"]["passed"], true);
    assert_eq!(report["ga"]["classes"], report["ga"]["characters"]);
}
