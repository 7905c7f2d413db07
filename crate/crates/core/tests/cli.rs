use std::path::Path;
use std::process::{Command, Output};

use impact::concepts::{build_parity, format, Concept};

fn impact(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_impact")).args(args).output().unwrap()
}

fn write_parity(dir: &Path, name: &str, subset: &[usize]) -> String {
    let path = dir.join(name);
    format::save(&Concept::Dag(build_parity(6, subset).unwrap()), &path).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn teach_reports_and_exports() {
    let dir = tempfile::tempdir().unwrap();
    let concept = write_parity(dir.path(), "p.json", &[0, 3]);
    let model = dir.path().join("model.json");
    let out = impact(&[
        "teach",
        "--concept",
        &concept,
        "--m",
        "200",
        "--seed",
        "4",
        "--diagnostics",
        "--model-out",
        model.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["test_accuracy"].as_f64(), Some(1.0));
    assert!(report["rounds"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| !r["diagnostics"].is_null()));

    let check = impact(&[
        "verify",
        "--concept",
        &concept,
        "--exhaustive",
        "--against",
        model.to_str().unwrap(),
    ]);
    assert!(check.status.success(), "{}", String::from_utf8_lossy(&check.stdout));
}

#[test]
fn teach_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let concept = write_parity(dir.path(), "p.json", &[0, 3]);
    let short = impact(&[
        "teach",
        "--concept",
        &concept,
        "--m",
        "20",
        "--epsilon",
        "0.05",
        "--delta",
        "0.05",
    ]);
    assert_eq!(short.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&short.stderr).contains("insufficient data in round"));

    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"type":"dag","n":2,"nodes":[{"op":"lit","input":5}],"root":0}"#,
    )
    .unwrap();
    let out = impact(&["teach", "--concept", bad.to_str().unwrap(), "--m", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_flags_disagreement() {
    let dir = tempfile::tempdir().unwrap();
    let a = write_parity(dir.path(), "a.json", &[0, 1]);
    let b = write_parity(dir.path(), "b.json", &[0, 2]);
    let same = impact(&["verify", "--concept", &a, "--exhaustive"]);
    assert!(same.status.success());
    let diff = impact(&["verify", "--concept", &a, "--exhaustive", "--against", &b]);
    assert_eq!(diff.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&diff.stdout).unwrap();
    assert_eq!(report["disagreements"].as_u64(), Some(32));
    assert_eq!(report["total"].as_u64(), Some(64));
}

fn sweep_config(dir: &Path) -> String {
    let path = dir.join("sweep.json");
    std::fs::write(
        &path,
        r#"{"n": 6, "subset": [1, 4], "m_values": [10, 60], "k_values": [1, 3], "m": 60,
            "trials": 3, "seed": 5, "test_size": 200, "timing": false, "workers": 2}"#,
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn sweep_is_byte_identical_on_rerun() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sweep_config(dir.path());
    let first = impact(&["sweep", "--mode", "m", "--config", &cfg]);
    assert!(first.status.success(), "{}", String::from_utf8_lossy(&first.stderr));
    let again = impact(&["sweep", "--mode", "m", "--config", &cfg, "--workers", "1"]);
    assert_eq!(first.stdout, again.stdout);

    let text = String::from_utf8(first.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("sweep,learner,n,k,m,trial,seed,accuracy,dont_know_rate,runtime_ms")
    );
    // 4 default learners x 2 sample sizes x 3 trials, then 8 mean rows
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 24 + 8);
    assert!(rows.iter().all(|r| r.split(',').count() == 10 && r.starts_with("m,")));
    assert_eq!(rows.iter().filter(|r| r.split(',').nth(5) == Some("-1")).count(), 8);
}

#[test]
fn sweep_writes_csv_meta_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = sweep_config(dir.path());
    let csv = dir.path().join("out/k.csv");
    let svg = dir.path().join("out/k.svg");
    let out = impact(&[
        "sweep",
        "--mode",
        "k",
        "--config",
        &cfg,
        "--output",
        csv.to_str().unwrap(),
        "--plot",
        svg.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(std::fs::read_to_string(&csv)
        .unwrap()
        .lines()
        .skip(1)
        .all(|l| l.starts_with("k,")));
    let meta: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("out/k.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["subsets"].as_array().unwrap().len(), 2);
    assert_eq!(std::fs::read_to_string(&svg).unwrap().matches("<polyline").count(), 4);
}

#[test]
fn sweep_rejects_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"n": 4, "subset": [9], "m_values": [10]}"#).unwrap();
    assert_eq!(
        impact(&["sweep", "--mode", "m", "--config", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(&path, r#"{"n": 4, "subset": [1], "m_values": [10], "colour": 1}"#).unwrap();
    assert_eq!(
        impact(&["sweep", "--mode", "m", "--config", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(&path, r#"{"mode": "k", "n": 4, "k_values": [2]}"#).unwrap();
    assert_eq!(
        impact(&["sweep", "--mode", "m", "--config", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}
