use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn minimod(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minimod")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let o = minimod(&full);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(&o)).unwrap()
}

#[test]
fn classify_canonical_l6_7() {
    let o = minimod(&["classify", &data("l6_7.json")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("L6_7 (3,2,1)\n"));
    let v = json(&["classify", &data("l6_7.json")]);
    assert_eq!(v["results"]["label"], "L6_7");
    assert_eq!(v["results"]["signature"], serde_json::json!([3, 2, 1]));
}

#[test]
fn bracket_input_is_detected() {
    let v = json(&["classify", &data("l3_brackets.json")]);
    assert_eq!(v["results"]["label"], "L3");
}

#[test]
fn malformed_json_exits_2() {
    assert_eq!(minimod(&["classify", &data("malformed.json")]).status.code(), Some(2));
    assert_eq!(minimod(&["classify", &data("missing.json")]).status.code(), Some(2));
}

#[test]
fn jacobi_failure_exits_3_with_triple() {
    let o = minimod(&["classify", &data("l3_not_jacobi.json")]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("x1x2x3"));
}

#[test]
fn tables_row_counts() {
    for (dim, field, rows) in [("6", "R", 34), ("5", "Q", 9), ("2", "Q", 1), ("6", "F7", 34), ("6", "C", 30)] {
        let v = json(&["tables", "--dim", dim, "--field", field]);
        assert_eq!(v["results"]["rows"].as_array().unwrap().len(), rows, "dim {dim} over {field}");
    }
}

#[test]
fn tables_betti_column() {
    let v = json(&["tables", "--dim", "6", "--field", "R"]);
    let row = v["results"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["label"] == "L6_15")
        .unwrap()
        .clone();
    assert_eq!(row["betti"], serde_json::json!([1, 3, 4, 4, 4, 3, 1]));
}

#[test]
fn homotopy_over_q_and_c() {
    let (a2, a3, a5, a20) = (data("l6_2_a2.json"), data("l6_2_a3.json"), data("l6_2_a5.json"), data("l6_2_a20.json"));
    assert_eq!(json(&["homotopy", &a5, &a20])["results"]["equivalent"], true);
    let v = json(&["homotopy", &a2, &a3]);
    assert_eq!(v["results"]["equivalent"], false);
    assert_eq!(v["results"]["decided_by"], "parameter square class");
    assert_eq!(json(&["homotopy", "--field", "C", &a2, &a3])["results"]["equivalent"], true);
}

#[test]
fn betti_of_l6_15() {
    let v = json(&["betti", &data("l6_15.json")]);
    assert_eq!(v["results"]["betti"], serde_json::json!([1, 3, 4, 4, 4, 3, 1]));
}

#[test]
fn symplectic_verdicts() {
    let v = json(&["symplectic", &data("l6_3.json")]);
    assert_eq!(v["results"], serde_json::json!({"symplectic": false, "certificate": "pfaffian-cubic-zero"}));
    let v = json(&["symplectic", &data("l6_15.json")]);
    assert_eq!(v["results"]["symplectic"], true);
    assert!(!v["results"]["omega"].as_array().unwrap().is_empty());
}

#[test]
fn fuzz_is_deterministic() {
    let a = minimod(&["--json", "fuzz", "--trials", "10", "--seed", "1"]);
    let b = minimod(&["--json", "fuzz", "--trials", "10", "--seed", "1"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["results"]["passed"], 10);
}

#[test]
fn fuzz_writes_jsonl() {
    let path = std::env::temp_dir().join(format!("minimod-fuzz-{}.jsonl", std::process::id()));
    let o = minimod(&["fuzz", "--trials", "5", "--seed", "2", "--field", "F5", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let log = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(log.lines().count(), 5);
    for line in log.lines() {
        let r: Value = serde_json::from_str(line).unwrap();
        assert_eq!(r["label_matches"], true);
    }
}
