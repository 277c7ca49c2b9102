use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclocong"))
        .args(args)
        .env_remove("CYCLOCONG_PRECISION")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = run(&full);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn records(v: &Value) -> &Vec<Value> {
    v["records"].as_array().expect("records array")
}

#[test]
fn irregular_range_reports_37() {
    let v = json(&["irregular", "--range", "30:40"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "irregular");
    let recs = records(&v);
    assert_eq!(recs.len(), 2);
    let r37 = &recs[1];
    assert_eq!(r37["p"], 37);
    assert_eq!(r37["u"], 2);
    assert_eq!(r37["irregular_indices"], serde_json::json!([32]));
    assert_eq!(r37["i_p"], 1);
    for r in recs {
        for key in ["p", "u", "a", "seed"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
    }
}

#[test]
fn annihilator_rejects_generator_as_eigenvalue() {
    let out = run(&["annihilator", "--prime", "13", "--eigenvalues", "2,6"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("mu-equals-u"));
}

#[test]
fn annihilator_with_other_generator_passes() {
    let v = json(&["annihilator", "--prime", "13", "--eigenvalues", "2,6", "--generator", "7"]);
    let rec = &records(&v)[0];
    assert_eq!(rec["passed"], true);
    assert_eq!(rec["r_1"], 2);
    let splits = rec["splits"].as_array().unwrap();
    assert!(splits.iter().any(|s| s["d"] == 3 && s["r_d"] == 1 && s["r_g"] == 2));
}

#[test]
fn annihilator_allow_overrides_rule() {
    let out = run(&["annihilator", "--prime", "13", "--eigenvalues", "2,6", "--allow", "mu-equals-u"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn singular_p11_m3() {
    let v = json(&["singular", "--prime", "11", "--m", "3"]);
    let rec = &records(&v)[0];
    assert_eq!(rec["mu"], 7);
    assert_eq!(rec["exponent"], 7);
    assert_eq!(rec["nu"]["value"], 7);
    assert_eq!(rec["classification"], "not-primary");
    assert_eq!(rec["agreement"], true);
}

#[test]
fn singular_exponent_out_of_range_is_usage_error() {
    assert_eq!(run(&["singular", "--prime", "11", "--m", "1"]).status.code(), Some(2));
}

#[test]
fn units_p37_primary_index() {
    let v = json(&["units", "--prime", "37"]);
    let rec = &records(&v)[0];
    assert_eq!(rec["primary_index_set"], serde_json::json!([32]));
    assert_eq!(rec["irregular_indices"], serde_json::json!([32]));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["irregular", "--range", "40:30"]).status.code(), Some(2));
    assert_eq!(run(&["irregular"]).status.code(), Some(2));
    assert_eq!(run(&["--precision", "9", "units", "--prime", "7"]).status.code(), Some(2));
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cyclocong"))
        .args(["--format", "json", "singular", "--prime", "13", "--m", "4"])
        .env("CYCLOCONG_PRECISION", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(records(&v)[0]["a"], 3);
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = ["--format", "json", "--seed", "7", "verify", "--range", "5:23", "--samples", "10"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
}

#[test]
fn verify_injected_fault_exits_1_with_counterexample() {
    let out = run(&["verify", "--range", "5:13", "--samples", "5", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("counterexample"));
}

#[test]
fn out_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.csv");
    let path_str = path.to_str().unwrap();
    let to_file = run(&["--format", "csv", "--out", path_str, "units", "--range", "5:19"]);
    assert_eq!(to_file.status.code(), Some(0));
    assert!(to_file.stdout.is_empty());
    let stdout = run(&["--format", "csv", "units", "--range", "5:19"]);
    assert_eq!(std::fs::read(&path).unwrap(), stdout.stdout);
    let text = String::from_utf8(stdout.stdout).unwrap();
    assert!(text.lines().next().unwrap().starts_with("p,"));
}
