use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn data_dir() -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .to_string_lossy()
        .into_owned()
}

fn mfcheck(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mfcheck"))
        .env("MFCHECK_DATA_DIR", data_dir())
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

#[test]
fn dims_reports_level_22() {
    let out = mfcheck(&["--format", "json", "dims", "--k", "2", "--N", "22"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dim_S"], 2);
    assert_eq!(v["dim_M"], 5);
    assert_eq!(v["genus"], 2);
}

#[test]
fn cusps_widths_sum_to_index() {
    let out = mfcheck(&["--format", "json", "cusps", "--N", "36"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let widths: u64 = v["cusps"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["width"].as_u64().unwrap())
        .sum();
    assert_eq!(widths, 72);
}

#[test]
fn odd_weight_is_a_usage_error() {
    let out = mfcheck(&["dims", "--k", "3", "--N", "22"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = mfcheck(&["dims", "--weight", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn hecke_on_level_11() {
    let out = mfcheck(&["--format", "json", "hecke", "--k", "2", "--N", "11", "--primes", "2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"-2\""), "{text}");
    assert!(text.contains("\"-1\""), "{text}");
}

#[test]
fn theorem1_passes_at_22() {
    let out = mfcheck(&["--format", "json", "verify-t1", "--k", "2", "--N", "22"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["dim_K0"], 1);
    assert_eq!(v["dim_oldsum"], 1);
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn theorem2_passes_at_33() {
    let out = mfcheck(&["--format", "json", "verify-t2", "--k", "2", "--M", "33"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "pass");
}

#[test]
fn lemma_fuzz_passes() {
    let out = mfcheck(&["--format", "json", "lemmas-fuzz", "--iters", "500"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn insufficient_precision_is_a_data_error() {
    let out = mfcheck(&["basis", "--k", "12", "--N", "1", "--prec", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_ingest_round_trip_is_byte_exact() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    for path in [&first, &second] {
        let out = mfcheck(&["export", "--k", "4", "--N", "10", "--path", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let out = mfcheck(&["--format", "json", "ingest", "--path", first.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["dim"], 3);
    assert_eq!(std::fs::read(&first).unwrap(), std::fs::read(&second).unwrap());
}

#[test]
fn empty_space_exports_an_empty_basis() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let out = mfcheck(&["export", "--k", "2", "--N", "1", "--path", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["basis"], Value::Array(vec![]));
}

#[test]
fn unwritable_export_path_is_a_data_error() {
    let out = mfcheck(&["export", "--k", "4", "--N", "10", "--path", "/nonexistent/dir/x.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn malformed_basis_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, "{\"weight\": 2}").unwrap();
    let out = mfcheck(&["--format", "json", "ingest", "--path", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"]["code"].is_string());
}

#[test]
fn same_seed_gives_identical_json() {
    let args = ["--format", "json", "--seed", "7", "newforms", "--k", "2", "--N", "33"];
    let a = mfcheck(&args);
    let b = mfcheck(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
