use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn couniv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_couniv")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("couniv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn without_timings(mut v: Value) -> Value {
    for r in v["records"].as_array_mut().unwrap() {
        r["elapsed_ms"] = Value::from(0);
    }
    v
}

#[test]
fn reduce_and_cyclic_reduce() {
    let o = couniv(&["reduce", "3 5 5' 2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "3 2");
    let o = couniv(&["reduce", "--cyclic", "5' 31 5"]);
    assert_eq!(stdout(&o), "5' 31 5\ncore: 31\nwing: 5\n");
}

#[test]
fn phi_value_and_explanation() {
    assert_eq!(stdout(&couniv(&["phi", "--n", "1", "--word", "5 2"])).trim(), "8");
    let text = stdout(&couniv(&["phi", "--n", "1", "--word", "5 2", "--explain"]));
    assert!(text.starts_with("phi_1([5 2]) = 8"));
}

#[test]
fn member_reports_certificates_and_unknowns() {
    let v = json(&couniv(&["member", "--word", "15 7"]));
    assert_eq!(v["status"], "member");
    let slots: Vec<u64> = v["certificate"]["factors"].as_array().unwrap().iter().map(|f| f["slot"].as_u64().unwrap()).collect();
    assert_eq!(slots, vec![4, 3]);
    let v = json(&couniv(&["member", "--word", "5' 31 5", "--max-factors", "3", "--max-conj", "4"]));
    assert_eq!(v["status"], "unknown");
}

#[test]
fn empty_suite_is_an_empty_passing_report() {
    let o = couniv(&["verify", "--suite", ""]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["records"].as_array().unwrap().len(), 0);
}

#[test]
fn inequality_chain_suite_passes_and_is_reproducible() {
    let args = ["--group", "zp2", "--seed", "5", "verify", "--suite", "eq1,continuity"];
    let a = couniv(&args);
    assert!(a.status.success());
    let va = json(&a);
    let chain: Vec<&Value> = va["records"].as_array().unwrap().iter().filter(|r| r["check"] == "scale_chain").collect();
    assert_eq!(chain.len(), 6);
    assert!(chain.iter().all(|r| r["verdict"] == "PASS" && r["cases"] == 1001));
    let vb = json(&couniv(&args));
    assert_eq!(without_timings(va), without_timings(vb));
}

#[test]
fn json_flag_writes_the_report() {
    let path = scratch("report.json");
    let o = couniv(&["--json", path.to_str().unwrap(), "--group", "dyadic", "verify", "--suite", "bk", "--bounds", "small"]);
    assert!(o.status.success());
    let file: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(file, json(&o));
    assert_eq!(file["summary"]["fail"], 0);
}

#[test]
fn quotient_build_then_verify() {
    let map = scratch("map.json");
    let o = couniv(&["--group", "zp3", "quotient", "build", "--depth", "40", "--n-max", "20", "--out", map.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let snap: Value = serde_json::from_str(&std::fs::read_to_string(&map).unwrap()).unwrap();
    assert_eq!(snap["group"], "zp3");
    assert_eq!(snap["fibers"][0]["choices"][1]["element"], "1");
    let o = couniv(&["quotient", "verify", "--map", map.to_str().unwrap(), "--bounds", "small"]);
    assert!(o.status.success());
    assert_eq!(json(&o)["summary"]["fail"], 0);
    let o = couniv(&["quotient", "verify", "--map", map.to_str().unwrap(), "--suite", "phi"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn pw_demo_transcript_passes() {
    let o = couniv(&["--group", "symfin", "--seed", "9", "pw", "demo", "--sample-size", "4", "--coords", "3", "--conjugators", "3", "--u", "4"]);
    assert!(o.status.success());
    let v = json(&o);
    let t = &v["transcript"];
    assert_eq!(t["a"].as_array().unwrap().len(), 3);
    assert_eq!(t["u_index"], 4);
    assert!(t["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn bad_input_exits_with_status_two() {
    assert_eq!(couniv(&["--group", "zp4", "verify", "--suite", "eq1"]).status.code(), Some(2));
    assert_eq!(couniv(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(couniv(&["reduce", "3 x"]).status.code(), Some(2));
    assert_eq!(couniv(&["member", "--word", "3", "--max-factors", "0"]).status.code(), Some(2));
}
