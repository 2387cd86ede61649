use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn dmlwb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dmlwb"))
        .args(args)
        .env_remove("DMLWB_JOBS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_map(dir: &Path, name: &str, f1: &str, f2: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, format!(r#"{{"f1": "{f1}", "f2": "{f2}"}}"#)).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn dml_scan_on_fixed_point() {
    let dir = tempfile::tempdir().unwrap();
    let henon = write_map(dir.path(), "henon.json", "y", "y^2 - x");
    let out = dmlwb(&["dml", "scan", "--map", &henon, "--curve", "y", "--point", "0,0", "--horizon", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["config"]["horizon"], 50);
    let r = &v["result"];
    assert_eq!(r["visit_set"].as_array().unwrap().len(), 51);
    assert_eq!(r["preperiodic_witness"]["period"], 1);
    assert_eq!(r["verdict"], "dichotomy_confirmed_preperiodic");
}

#[test]
fn small_commands() {
    let out = dmlwb(&["product-check", "--value", "6/1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["holds"], true);

    let out = dmlwb(&["intersect", "--c1", "y", "--c2", "y-x^2", "--at", "0,0"]);
    assert_eq!(json(&out)["result"]["multiplicity"], 2);

    let out = dmlwb(&["height", "--point", "3/2,5"]);
    assert_eq!(json(&out)["result"]["height"], "10");

    let out = dmlwb(&["northcott", "--bound", "2", "--dim", "1"]);
    assert_eq!(json(&out)["result"]["count"], 8);
}

#[test]
fn model_and_basin() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write_map(dir.path(), "tri.json", "2*x", "x^3*y + x^5");
    let report = dir.path().join("model.json");
    let out = dmlwb(&["fn-model", "--map", &tri, "--n", "auto", "--report", report.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["result"]["n"], 3);
    assert_eq!(v["result"]["contracted_image_check"], true);

    let out = dmlwb(&[
        "basin", "--map", &tri, "--model", "fn:3", "--point", "1,1", "--place", "inf", "--eps", "1e-6", "--horizon", "50",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["result"]["verdict"]["kind"], "converged_at");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.json");
    let out = dmlwb(&["degrees", "--map", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--map"));

    let out = dmlwb(&["degrees", "--horizon", "3"]);
    assert_eq!(out.status.code(), Some(2));

    // Not triangular: a domain error.
    let henon = write_map(dir.path(), "henon.json", "y", "y^2 - x");
    let out = dmlwb(&["fn-model", "--map", &henon]);
    assert_eq!(out.status.code(), Some(1));

    let out = dmlwb(&["product-check", "--value", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn batch_runs_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    write_map(dir.path(), "a.json", "x + 1", "-y");
    write_map(dir.path(), "b.json", "-x", "-y");
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"maps": ["a.json", "b.json"], "curves": ["y - 1", "x - 1"], "points": ["0,1", "1,1"], "horizon": 60}"#,
    )
    .unwrap();
    let run = |jobs: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_dmlwb"))
            .args(["batch", "--config", cfg.to_str().unwrap()])
            .env("DMLWB_JOBS", jobs)
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        out.stdout
    };
    let one = run("1");
    assert_eq!(one, run("4"));
    let v: Value = serde_json::from_slice(&one).unwrap();
    assert_eq!(v["items"].as_array().unwrap().len(), 8);
    assert_eq!(v["config"]["horizon"], 60);

    std::fs::write(&cfg, r#"{"maps": ["a.json"], "curves": ["y"], "points": []}"#).unwrap();
    let v: Value = serde_json::from_slice(&run("2")).unwrap();
    assert!(v["items"].as_array().unwrap().is_empty());

    std::fs::write(&cfg, r#"{"maps": ["gone.json"], "curves": ["y"], "points": ["0,0"]}"#).unwrap();
    let out_path = dir.path().join("out.json");
    let out = dmlwb(&["batch", "--config", cfg.to_str().unwrap(), "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty() && !out_path.exists());
}
