use std::fs;
use std::process::{Command, Output};

fn evpos(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evpos")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn classify_example_writes_a_round_tripping_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = evpos(&["classify", "--example", "complex-diagonal", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&out).unwrap();
    let report = evpos::harness::AnalysisReport::from_json(&text).unwrap();
    assert_eq!(report.operator_id, "complex-diagonal");
    assert_eq!(report.to_json().unwrap(), text);
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = evpos(&["classify", "--generate", r#"{"kind":"positive_random","dim":4,"seed":5}"#, "--seed", "9"]);
    let b = evpos(&["classify", "--generate", r#"{"kind":"positive_random","dim":4,"seed":5}"#, "--seed", "9"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn model_file_and_matrix_json() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.json");
    fs::write(&m, r#"{"n":2,"entries":[[2,0],[1,0],[1,0],[2,0]]}"#).unwrap();
    let o = evpos(&["classify", m.to_str().unwrap(), "--no-checks"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classification"][0]["status"]["status"], "confirmed");
    assert!(v["checks"].as_array().unwrap().is_empty());
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"kind\": \"dense\",\n \"n\": 2, \"entries\": [], \"norm\": {\"kind\": \"ell1\"}, \"extra\": 1}")
        .unwrap();
    let o = evpos(&["classify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(evpos(&["classify", "--example", "no-such-example"]).status.code(), Some(2));
    let gap = evpos(&["classify", "--generate", r#"{"kind":"eventually_positive","dim":3,"gap":0,"seed":0}"#]);
    assert_eq!(gap.status.code(), Some(2));
    assert_eq!(evpos(&["classify", "/nonexistent/model.json"]).status.code(), Some(2));
}

#[test]
fn orbit_emits_decay_csv() {
    let dir = tempfile::tempdir().unwrap();
    let v = dir.path().join("v.json");
    fs::write(&v, "[0, 1]").unwrap();
    let o = evpos(&["orbit", "complex-diagonal", "--vector", v.to_str().unwrap(), "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,d_plus,norm"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[2], vec![2.0, 0.25, 0.25]);
}

#[test]
fn suites_report_zero_contradictions() {
    let o = evpos(&["suite", "random", "--trials", "5", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(s["contradictions"], 0);
    assert_eq!(s["instances"], 5);
    let p = evpos(&["suite", "properties", "--trials", "100", "--seed", "42"]);
    assert_eq!(p.status.code(), Some(0));
}

#[test]
fn examples_lists_the_catalog() {
    let o = evpos(&["examples"]);
    let text = stdout(&o);
    for name in evpos::harness::catalog_names() {
        assert!(text.contains(name));
    }
}
