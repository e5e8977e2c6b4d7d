use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cechss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cechss")).args(args).output().expect("binary runs")
}

fn write_job(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn two_ideal_job_passes() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(
        dir.path(),
        "two.json",
        r#"{"variables": 2, "groups": [["x1"], ["x2"]], "tasks": ["cohomology", "verify34", "les"]}"#,
    );
    let out = dir.path().join("out");
    let o = cechss(&["compute", &job, "--out", out.to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert_eq!(report["tasks"]["verify34"]["mismatches"].as_array().unwrap().len(), 0);
    assert_eq!(report["tasks"]["les"]["failures"].as_array().unwrap().len(), 0);
    let csv = fs::read_to_string(out.join("cohomology.csv")).unwrap();
    assert!(csv.starts_with("i,b1,b2,dim\n"));
    assert!(csv.contains("\n2,-1,-1,1\n"));
    let product = fs::read_to_string(out.join("cohomology_product.csv")).unwrap();
    assert!(product.contains("\n1,-1,-1,1\n"));
}

#[test]
fn three_ideal_first_variant_stabilizes_by_page_three() {
    let dir = tempfile::tempdir().unwrap();
    let job = write_job(
        dir.path(),
        "three.json",
        r#"{"variables": 3, "groups": [["x1*x2"], ["x2*x3"], ["x1*x3"]],
            "window": [[-2, -2, -2], [1, 1, 1]], "tasks": ["mvss:1a"], "pages": 4}"#,
    );
    let out = dir.path().join("out");
    let o = cechss(&["compute", &job, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let pages: Value = serde_json::from_str(&fs::read_to_string(out.join("pages_1a.json")).unwrap()).unwrap();
    let runs = pages.as_array().unwrap();
    assert!(!runs.is_empty());
    for run in runs {
        assert!(run["degenerates_at"].as_i64().unwrap() <= 3);
        let pages = run["pages"].as_array().unwrap();
        assert_eq!(pages.len(), 5);
        assert_eq!(pages[3]["cells"], pages[4]["cells"]);
        assert_eq!(pages[4]["maps"].as_array().unwrap().len(), 0);
    }
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["tasks"]["infinity"]["pass"], true);
}

#[test]
fn input_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"field": {"prime": 65536}, "variables": 1, "groups": [["x1"]]}"#, "modulus not prime"),
        (r#"{"variables": 2, "groups": [["x1*z7"]]}"#, "z7"),
        (r#"{"variables": 2, "groups": [["x1"]], "window": [[-1], [1]]}"#, "window"),
        (r#"{"variables": 2, "groups": [["x1"]"#, "job file"),
        (r#"{"variables": 2, "groups": []}"#, "group"),
        (r#"[1, 2, 3]"#, "job file"),
    ];
    for (i, (json, needle)) in cases.iter().enumerate() {
        let job = write_job(dir.path(), &format!("bad{i}.json"), json);
        let o = cechss(&["compute", &job, "--out", dir.path().join("o").to_str().unwrap()]);
        let err = stderr(&o);
        assert_eq!(o.status.code(), Some(1), "{json}: {err}");
        assert!(err.contains(needle), "{json}: {err}");
        assert!(!err.contains("panicked"));
    }
    let o = cechss(&["compute", "--pages", "x", "job.json"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn selftest_default_and_negative_control() {
    let o = cechss(&["selftest"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let o = cechss(&["selftest", "--corrupt-signs"]);
    assert_eq!(o.status.code(), Some(2));
    let out = String::from_utf8_lossy(&o.stdout);
    assert!(out.contains("d∘d ≠ 0"), "{out}");
}

#[test]
fn selftest_seed_sweep() {
    for seed in 1..=20 {
        let o = cechss(&["selftest", "--seed", &seed.to_string(), "--max-vars", "2", "--max-groups", "3"]);
        assert_eq!(o.status.code(), Some(0), "seed {seed}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

#[test]
fn selftest_is_deterministic() {
    let a = cechss(&["selftest", "--seed", "5"]);
    let b = cechss(&["selftest", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
}
