use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::Instant;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fockforge"))
}

fn models() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../models")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_model(name: &str, extra: &[&str]) -> Output {
    let path = models().join(name);
    let mut args = vec!["run", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn write_model(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("model.json");
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn identity_bogolubov_passes_with_zero_residuals() {
    let out = run_model("identity-bogolubov.json", &[]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
    for c in report["checks"].as_array().unwrap() {
        assert_eq!(c["residual"].as_f64(), Some(0.0), "{c}");
    }
}

#[test]
fn kms_mismatch_exits_one_and_names_the_defect() {
    let out = run_model("kms-mismatch.json", &[]);
    assert_eq!(out.status.code(), Some(1));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert_eq!(failed, ["kms_defect"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("kms_defect"));
}

#[test]
fn matched_kms_passes() {
    assert_eq!(run_model("kms.json", &[]).status.code(), Some(0));
}

#[test]
fn malformed_shape_exits_two() {
    let out = run_model("bad-shape.json", &[]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn schema_violations_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for body in [
        "not json",
        r#"{"schema_version":1,"task":"kms","extra":true}"#,
        r#"{"schema_version":7,"task":"kms"}"#,
        r#"{"schema_version":1,"task":"kms","statistics":"fermi","beta":1,"h":[[[1,0]]],"gamma":[[[1,0],[0,0]]]}"#,
        r#"{"schema_version":1,"task":"thermal","statistics":"bose","beta":-1,"h":[[[1,0]]]}"#,
        r#"{"schema_version":1,"task":"pauli-fierz","k":[[[1,0]]],"h":[[[1,0]]],"v":[[[1,0],[0,0]]],"beta":1}"#,
    ] {
        let p = write_model(dir.path(), body);
        let out = run(&["run", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{body}");
    }
    assert_eq!(run(&["run", "/nonexistent/model.json"]).status.code(), Some(2));
}

#[test]
fn unknown_suite_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["suite", "huge", "--out-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_usage_exits_two() {
    assert_eq!(run(&["run"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    let path = models().join("car.json");
    assert_eq!(run(&["run", path.to_str().unwrap(), "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn run_output_is_byte_stable_and_seeded() {
    let a = run_model("car.json", &[]);
    let b = run_model("car.json", &["--seed", "42"]);
    let c = run_model("car.json", &["--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn out_file_and_csv_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.csv");
    let status = run_model("ccr.json", &["--format", "csv", "--out", out.to_str().unwrap()]);
    assert_eq!(status.status.code(), Some(0));
    assert!(status.stdout.is_empty());
    let text = std::fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("id,task,check,residual,tolerance,pass"));
    assert!(lines.next().unwrap().ends_with(",true"));
}

#[test]
fn every_sample_model_has_its_expected_exit_code() {
    for entry in std::fs::read_dir(models()).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        if name == "smoke-suite.json" || name == "spin-boson.json" {
            continue;
        }
        let expected = match name.as_str() {
            "kms-mismatch.json" => 1,
            "bad-shape.json" => 2,
            _ => 0,
        };
        assert_eq!(run(&["run", path.to_str().unwrap()]).status.code(), Some(expected), "{name}");
    }
}

#[test]
fn smoke_suite_passes_quickly_with_thread_cap() {
    let dir = tempfile::tempdir().unwrap();
    let start = Instant::now();
    let out = bin()
        .args(["suite", "smoke", "--out-dir", dir.path().to_str().unwrap()])
        .env("FOCKFORGE_THREADS", "2")
        .output()
        .unwrap();
    assert!(start.elapsed().as_secs_f64() < 10.0);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("summary.json")).unwrap()).unwrap();
    let reports = summary["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 10);
    for r in reports {
        let body = std::fs::read_to_string(dir.path().join(r["file"].as_str().unwrap())).unwrap();
        let report: serde_json::Value = serde_json::from_str(&body).unwrap();
        for c in report["checks"].as_array().unwrap() {
            assert!(c["residual"].as_f64().unwrap() <= c["tolerance"].as_f64().unwrap(), "{c}");
        }
    }
}

#[test]
fn invalid_thread_cap_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["suite", "smoke", "--out-dir", dir.path().to_str().unwrap()])
        .env("FOCKFORGE_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn shipped_schema_lists_every_task() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/schema.json");
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let tasks: Vec<&str> = schema["properties"]["task"]["enum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t.as_str().unwrap())
        .collect();
    assert_eq!(
        tasks,
        ["verify-ccr", "verify-car", "bogolubov", "gaussian", "thermal", "kms", "lattice", "pauli-fierz", "suite"]
    );
    for t in tasks {
        let body = format!(r#"{{"schema_version":1,"task":"{t}"}}"#);
        let parsed = fockforge::model::ModelFile::parse(&body).unwrap();
        assert_eq!(parsed.task.name(), t);
    }
}
