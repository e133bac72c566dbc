use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const GKL: &str = "005F005F005F005F005FFF5F005FFF5F";

fn majority(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_majority"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = majority(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn failure(dir: &Path, args: &[&str]) -> (i32, String) {
    let out = majority(dir, args);
    assert!(!out.status.success(), "{args:?} should fail");
    (out.status.code().unwrap(), String::from_utf8(out.stderr).unwrap())
}

fn manifest(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn eval_prints_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["eval", "--rule", GKL, "--n", "640", "--seed", "5"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "hex,n,seed,performance");
    let fields: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(&fields[..3], &[GKL, "640", "5"]);
    let f: f64 = fields[3].parse().unwrap();
    assert!((0.7..0.9).contains(&f), "{f}");
}

#[test]
fn missing_seed_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = majority(dir.path(), &["eval", "--rule", GKL, "--n", "64"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));
    assert!(String::from_utf8_lossy(&out.stdout).contains(",64,0,"));
}

#[test]
fn bad_inputs_fail_with_distinct_messages() {
    let dir = tempfile::tempdir().unwrap();
    let (code, msg) = failure(dir.path(), &["eval", "--rule", "XYZ"]);
    assert_eq!(code, 1);
    assert!(msg.contains("malformed rule"), "{msg}");

    let (code, msg) = failure(dir.path(), &["eval", "--rule", &"G".repeat(32)]);
    assert_eq!(code, 1);
    assert!(msg.contains("malformed rule"), "{msg}");

    let (code, msg) = failure(dir.path(), &["acf", "--input", "absent.csv"]);
    assert_eq!(code, 1);
    assert!(msg.contains("cannot read walk file"), "{msg}");

    let (code, msg) = failure(dir.path(), &["ga", "--template", "absent.txt", "--out", "o"]);
    assert_eq!(code, 1);
    assert!(msg.contains("cannot read template file"), "{msg}");

    let (code, _) = failure(dir.path(), &["frobnicate"]);
    assert_eq!(code, 2);
    let (code, _) = failure(dir.path(), &["eval"]);
    assert_eq!(code, 2);
}

#[test]
fn acf_rejects_walks_without_degrees() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("w.csv"), "step,hex,fitness,distance,neutral_degree\n0,00,0.5,0,\n").unwrap();
    let (code, msg) = failure(dir.path(), &["acf", "--input", "w.csv"]);
    assert_eq!(code, 1);
    assert!(msg.contains("no neutral degree"), "{msg}");

    fs::write(dir.path().join("v.csv"), "step,hex\n0,00\n").unwrap();
    let (_, msg) = failure(dir.path(), &["acf", "--input", "v.csv"]);
    assert!(msg.contains("no neutral_degree column"), "{msg}");
}

#[test]
fn acf_of_a_hand_made_series() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("step,neutral_degree\n");
    for (i, d) in [1, 2, 3, 4, 5, 6].iter().enumerate() {
        csv += &format!("{i},{d}\n");
    }
    fs::write(dir.path().join("w.csv"), csv).unwrap();
    let out = ok(dir.path(), &["acf", "--input", "w.csv", "--max-lag", "1"]);
    let r1: f64 = out.lines().nth(2).unwrap().split(',').nth(1).unwrap().parse().unwrap();
    // Lag-1 autocorrelation of 1..6 with the biased estimator.
    assert!((r1 - 0.5).abs() < 1e-9, "{r1}");
}

#[test]
fn levels_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["levels", "--n", "100", "--n", "1000", "--n", "10000"]);
    let counts: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(counts, ["11", "35", "113"]);
}

#[test]
fn olympus_membership() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["olympus", "check", "--rule", GKL]);
    assert!(out.contains("is in"), "{out}");
    let out = ok(dir.path(), &["olympus", "check", "--rule", &"F".repeat(32)]);
    assert!(out.contains("not in"), "{out}");
}

#[test]
fn olympus_derive_reports_the_search() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["olympus", "derive", "--out", "d.json", "--template-out", "t.txt"]);
    let report = manifest(&dir.path().join("d.json"));
    assert_eq!(report["combinations"], 512);
    assert_eq!(report["chosen"].as_array().unwrap().len(), 6);
    let template = fs::read_to_string(dir.path().join("t.txt")).unwrap();
    assert_eq!(template.chars().filter(|c| "01*".contains(*c)).count(), 128);
    // The derived template is accepted where a template file is expected.
    assert!(ok(dir.path(), &["olympus", "check", "--rule", GKL, "--template", "t.txt"]).contains("is in"));
}

#[test]
fn manifest_records_outputs() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["ndeg", "--rule", GKL, "--n", "64", "--seed", "4", "--out", "nd.csv"]);
    let m = manifest(&dir.path().join("nd.csv.manifest.json"));
    for key in ["tool", "version", "subcommand", "args", "seed", "parameters", "started", "finished", "outputs"] {
        assert!(!m[key].is_null(), "manifest lacks {key}");
    }
    assert_eq!(m["subcommand"], "ndeg");
    assert_eq!(m["seed"], 4);
    let bytes = fs::read(dir.path().join("nd.csv")).unwrap();
    let output = &m["outputs"][0];
    assert_eq!(output["path"], "nd.csv");
    assert_eq!(output["bytes"], bytes.len());
    assert_eq!(output["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn reruns_are_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let run = |threads: &str, out: &str| {
        ok(dir.path(), &["--threads", threads, "dos", "--samples", "200", "--n", "64", "--seed", "9", "--out", out]);
        fs::read(dir.path().join(out)).unwrap()
    };
    assert_eq!(run("1", "a.csv"), run("4", "b.csv"));
}

#[test]
fn replay_confirms_and_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    ok(dir.path(), &["nwalk", "--steps", "3", "--n", "64", "--seed", "2", "--out", "w.csv"]);
    let out = ok(dir.path(), &["--threads", "1", "replay", "--manifest", "w.csv.manifest.json"]);
    assert!(out.contains("identical"), "{out}");

    let path = dir.path().join("w.csv.manifest.json");
    let mut m = manifest(&path);
    m["outputs"][0]["sha256"] = Value::from("0".repeat(64));
    fs::write(&path, serde_json::to_string(&m).unwrap()).unwrap();
    let (code, msg) = failure(dir.path(), &["replay", "--manifest", "w.csv.manifest.json"]);
    assert_eq!(code, 1);
    assert!(msg.contains("differs"), "{msg}");
}

#[test]
fn ga_writes_its_files() {
    let dir = tempfile::tempdir().unwrap();
    ok(
        dir.path(),
        &["ga", "--pop", "10", "--gens", "3", "--n-gen", "64", "--n-final", "128", "--seed", "1", "--out", "run"],
    );
    let run = dir.path().join("run");
    let trace = fs::read_to_string(run.join("trace.csv")).unwrap();
    assert_eq!(trace.lines().count(), 1 + 3);
    let best = fs::read_to_string(run.join("best.txt")).unwrap();
    let hex = best.split_whitespace().find(|t| t.len() == 32).unwrap();
    assert!(ok(dir.path(), &["olympus", "check", "--rule", hex]).contains("is in"));
    assert_eq!(manifest(&run.join("manifest.json"))["subcommand"], "ga");
}
