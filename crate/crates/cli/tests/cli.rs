use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tspn(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tspn")).args(args).current_dir(dir).env_remove("TSPN_THREADS").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, body: &str) {
    std::fs::write(dir.join(name), body).unwrap();
}

const TWO_DISKS: &str = r#"{"kind":"unit_disks","alpha":"4","epsilon":"1/3","disks":[{"center":["0","0"]},{"center":["10","0"]}]}"#;
const SQUARE: &str = r#"{"points":[{"x":"2","y":"2"},{"x":"6","y":"2"},{"x":"6","y":"6"},{"x":"2","y":"6"}]}"#;

#[test]
fn oracle_on_two_collinear_disks_reports_16() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "two.json", TWO_DISKS);
    let out = tspn(&["solve", "--instance", "two.json", "--method", "oracle", "--threads", "2"], d.path());
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["result"]["length"].as_f64().unwrap() - 16.0).abs() < 1e-9);
    assert_eq!(v["config"]["threads"], 2);
    assert_eq!(v["config"]["command"]["samples"], 128);
}

#[test]
fn centers_and_dp_agree_on_the_collinear_pair() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "two.json", TWO_DISKS);
    let c = json(&tspn(&["solve", "--instance", "two.json", "--method", "centers"], d.path()));
    assert!((c["result"]["length"].as_f64().unwrap() - 20.0).abs() < 1e-9);
    let out = tspn(&["solve", "--instance", "two.json", "--method", "dp", "--threads", "2"], d.path());
    assert_eq!(out.status.code(), Some(0));
    assert!((json(&out)["result"]["length"].as_f64().unwrap() - 16.0).abs() < 1e-9);
}

#[test]
fn square_tour_is_certified_at_m3() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "square.json", SQUARE);
    let out = tspn(&["check", "--edges", "square.json", "--m", "3", "--M", "1"], d.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["result"]["certified"], true);
    assert!(v["result"]["certificate"].is_object());
}

#[test]
fn refused_check_exits_2_with_a_witness() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "x.json", r#"{"segments":[{"a":{"x":"0","y":"0"},"b":{"x":"3","y":"3"}},{"a":{"x":"0","y":"3"},"b":{"x":"3","y":"0"}}]}"#);
    let out = tspn(&["check", "--edges", "x.json", "--m", "1", "--M", "1", "--candidates", "grid-only", "--window", "0,3,0,3"], d.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["result"]["certified"], false);
}

#[test]
fn localization_claim_is_certified_with_margin() {
    let d = tempfile::tempdir().unwrap();
    let out = tspn(&["certify", "--claim", "localization"], d.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["result"]["summary"]["margin"].as_f64().unwrap() >= 0.05);
}

#[test]
fn localization_claim_fails_on_disks() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "two.json", TWO_DISKS);
    let out = tspn(&["certify", "--claim", "localization", "--instance", "two.json"], d.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn usage_errors_exit_1() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(tspn(&["solve", "--method", "oracle"], d.path()).status.code(), Some(1));
    assert_eq!(tspn(&["solve", "--instance", "missing.json"], d.path()).status.code(), Some(1));
    write(d.path(), "square.json", SQUARE);
    assert_eq!(tspn(&["check", "--edges", "square.json", "--m", "3", "--M", "1", "--spacing", "x"], d.path()).status.code(), Some(1));
    assert_eq!(tspn(&["gen", "random", "--k", "3", "--svg"], d.path()).status.code(), Some(1));
}

#[test]
fn identical_runs_are_byte_identical() {
    let d = tempfile::tempdir().unwrap();
    let gen = |dir: &str| tspn(&["gen", "random", "--k", "4", "--seed", "7", "--out-dir", dir, "--svg"], d.path());
    for dir in ["a", "b"] {
        assert_eq!(gen(dir).status.code(), Some(0));
    }
    let read = |p: &str| std::fs::read(d.path().join(p)).unwrap();
    assert_eq!(read("a/gen.svg"), read("b/gen.svg"));
    assert_eq!(read("a/instance.json"), read("b/instance.json"));

    let solve = |threads: &str| {
        let out = tspn(&["solve", "--instance", "a/instance.json", "--threads", threads], d.path());
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let one = solve("1");
    assert_eq!(one, solve("1"));
    let (x, y) = (serde_json::from_slice::<Value>(&one).unwrap(), serde_json::from_slice::<Value>(&solve("3")).unwrap());
    assert_eq!(x["result"], y["result"]);
}

#[test]
fn grid_transform_of_the_oracle_tour_is_certified() {
    let d = tempfile::tempdir().unwrap();
    write(d.path(), "two.json", TWO_DISKS);
    let out = tspn(&["transform", "--instance", "two.json", "--grid", "--spacing", "1/4", "--m", "5", "--M", "1", "--out-dir", "t", "--svg"], d.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["result"]["tour_source"], "oracle");
    assert!(v["result"]["output_length"].as_f64().unwrap() >= 16.0);
    assert!(d.path().join("t/transform.svg").exists());
}
