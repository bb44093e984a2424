use std::process::Command;

use charlab::dixon::CharacterTable;
use charlab_cli::cache::{load_context, Cache, CacheStatus};
use charlab_cli::run;
use charlab_cli::spec::parse_spec;
use serde_json::Value;

fn call(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(args.iter().copied(), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn cached(dir: &tempfile::TempDir, args: &[&str]) -> (i32, String, String) {
    let mut v = vec!["--cache-dir", dir.path().to_str().unwrap()];
    v.extend_from_slice(args);
    call(&v)
}

#[test]
fn singer_example() {
    let (code, out, _) = call(&["singer", "2", "4", "--mode", "inverse"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["conjugate"], false);
    assert_eq!(v["lemma_predicts"], false);
    assert_eq!(v["match"], true);
}

#[test]
fn singer_mismatch_exits_one() {
    let (code, out, _) = call(&["singer", "1", "5", "--mode", "square-inverse"]);
    assert_eq!(code, 1);
    assert!(out.contains("\"match\":false"));
}

#[test]
fn table_is_cached_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let (c1, first, _) = cached(&dir, &["table", "SU(3,3)"]);
    let (c2, second, _) = cached(&dir, &["table", "SU(3,3)"]);
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(first, second);
    let v: Value = serde_json::from_str(first.trim()).unwrap();
    assert_eq!(v["table"]["values"].as_array().unwrap().len(), 14);
    assert_eq!(v["table"]["order"], 6048);

    let cache = Cache::new(dir.path());
    let spec = parse_spec("SU(3,3)").unwrap();
    assert!(cache.table_path(&spec).exists());
    let (ctx, status) = load_context(&spec, 1 << 20, Some(&cache)).unwrap();
    assert_eq!(status, CacheStatus::Hit);
    ctx.table.verify().unwrap();
    let rebuilt = CharacterTable::from_record(ctx.table.record(), ctx.classes.space()).unwrap();
    assert_eq!(rebuilt.record(), ctx.table.record());
}

#[test]
fn verify_all_reports_the_exception() {
    let dir = tempfile::tempdir().unwrap();
    let (code, out, err) = cached(&dir, &["verify-all", "SU(3,3)"]);
    assert_eq!(code, 0, "{err}");
    let reports: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let status = |name: &str| reports.iter().find(|r| r["check"] == name).unwrap()["status"].clone();
    assert_eq!(status("conjugation_cover"), "pass_with_exception");
    assert_eq!(status("steinberg_square"), "pass_with_exception");
    assert_eq!(status("weil_formula"), "pass");
    assert!(err.contains("pass-with-exception"));
    let (_, again, _) = cached(&dir, &["verify-all", "SU(3,3)"]);
    assert_eq!(out, again);
}

#[test]
fn verify_all_filter_and_quotient() {
    let (code, out, _) = call(&[
        "--no-cache",
        "verify-all",
        "SL(2,7)",
        "--check",
        "row_sums",
        "--check",
        "dl_identity",
    ]);
    assert_eq!(code, 0);
    let reports: Vec<Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["group"], "SL(2,7)/Z");
    assert_eq!(reports[1]["group"], "SL(2,7)");
    assert!(reports.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn decompositions() {
    let (code, out, _) = call(&["--no-cache", "conj-char", "SU(3,3)", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("index,degree,multiplicity\n"));
    assert!(out.contains("\n1,6,0\n"));
    let (_, out, _) = call(&["--no-cache", "steinberg-square", "SL(2,5)/Z"]);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["missing"].as_array().unwrap().len(), 0);
    let (code, out, _) = call(&["--no-cache", "torus-induce", "SL(2,5)"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(v["tori"].as_array().unwrap().len(), 2);
}

#[test]
fn weil_lattice_csv() {
    let (code, out, _) = call(&["weil", "3", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("s,t,k0_formula,k0_brute,k0_match"));
    assert_eq!(lines.len(), 1 + 32);
    assert!(!out.contains("false"));
    let (_, matrices, _) = call(&["--no-cache", "weil", "3", "3", "--matrices"]);
    assert_eq!(out, matrices);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(call(&["table", "Sp(3,3)"]).0, 2);
    let (code, _, err) = call(&["table", "SL(2;3)"]);
    assert_eq!(code, 2);
    assert!(err.contains("byte 4"));
    assert_eq!(call(&["frobnicate"]).0, 2);
    assert_eq!(call(&["verify-all", "SL(2,5)", "--check", "nope"]).0, 2);
    assert_eq!(call(&["weil", "4", "3"]).0, 2);
    assert_eq!(call(&["--help"]).0, 0);
}

#[test]
fn pretty_output() {
    let (_, out, _) = call(&["--no-cache", "--format", "pretty", "table", "SL(2,7)/Z"]);
    assert!(out.contains("degrees [1, 3, 3, 6, 7, 8]"));
    assert!(out.contains("≈ -0.5000+1.3229i"));
}

#[test]
fn binary_honours_env_cache() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_charlab"))
        .args(["table", "SL(2,5)"])
        .env("CHARLAB_CACHE", dir.path())
        .output()
        .unwrap();
    assert!(status.status.success());
    let cache = Cache::new(dir.path());
    assert!(cache.table_path(&parse_spec("SL(2,5)").unwrap()).exists());
    let fail = Command::new(env!("CARGO_BIN_EXE_charlab"))
        .args(["table", "Sp(3,3)"])
        .output()
        .unwrap();
    assert_eq!(fail.status.code(), Some(2));
}
