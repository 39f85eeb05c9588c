use std::process::{Command, Output};

use serde_json::Value;

fn sl3z(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sl3z")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = sl3z(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

const EXAMPLE: &str = "0,0,1;1,0,1;0,1,3";

#[test]
fn reduce_reports_minimum_and_reduced_set() {
    let v = json(&["reduce", "--matrix", EXAMPLE]);
    assert_eq!(v["decision"]["verdict"], "reduced");
    assert_eq!(v["mu"], 1);
    assert_eq!(v["reduced"], serde_json::json!([EXAMPLE]));
    assert_eq!(v["decision"]["witnesses"].as_array().unwrap().len(), 3);
}

#[test]
fn classify_writes_json_svg_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("g.svg");
    let csv = dir.path().join("g.csv");
    let v = json(&[
        "classify", "--type", "0,1|1,0,2", "--v", "1,0,1", "--m", "-3:3", "--n", "-3:3", "--box-bound", "20",
        "--svg", svg.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(v["cells"].as_array().unwrap().len(), 49);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert!(text.starts_with("<svg") && text.contains("#555555"));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 50);
}

#[test]
fn classify_is_the_same_with_one_worker() {
    let args = ["classify", "--type", "0,1|1,1,2", "--m", "-4:4", "--n", "-4:4", "--box-bound", "20"];
    let a = json(&args);
    let mut seq = vec!["--workers", "1"];
    seq.extend(args);
    assert_eq!(a, json(&seq));
}

#[test]
fn conjugate_finds_a_conjugator() {
    // X·M·X⁻¹ with X = [[1,2,0],[0,1,-1],[1,0,1]]
    let m2 = "1,-2,1;-4,7,5;5,-9,-5";
    let v = json(&["conjugate", "--m1", EXAMPLE, "--m2", m2]);
    assert_eq!(v["conjugate"], true);
    assert_eq!(v["shared"], serde_json::json!([EXAMPLE]));
    assert!(v["conjugator"].is_string());
    let v = json(&["conjugate", "--m1", EXAMPLE, "--m2", EXAMPLE]);
    assert_eq!(v["conjugator"], "1,0,0;0,1,0;0,0,1");
    let v = json(&["conjugate", "--m1", EXAMPLE, "--m2", "0,0,1;1,0,2;0,1,3"]);
    assert_eq!(v["conjugate"], false);
    assert!(v.get("conjugator").is_none());
}

#[test]
fn sail_lists_both_components() {
    let v = json(&["sail", "--matrix", EXAMPLE, "--bound", "12"]);
    assert!(!v["positive"].as_array().unwrap().is_empty());
    assert!(!v["negative"].as_array().unwrap().is_empty());
    let out = sl3z(&["sail", "--matrix", EXAMPLE, "--bound", "12", "--format", "csv"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("component,source,x,rho,certified"));
}

#[test]
fn census_for_one_family() {
    let out = sl3z(&["census", "--type", "0,1|1,0,2", "--v", "1,0,1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().nth(1), Some("\"0,1|1,0,2\",2,12,64,true"));
}

#[test]
fn ray_scan_and_diagnostics() {
    let v = json(&["ray", "--type", "0,1|1,0,2", "--v", "1,0,1", "--base", "0,0", "--steps", "3"]);
    assert_eq!(v["cells"].as_array().unwrap().len(), 4);
    assert_eq!(v["nonreduced"], 2);
    let d = json(&["diagnose-ray", "--type", "0,1|0,0,1", "--v", "1,0,0", "--base", "0,0"]);
    assert_eq!(d["slope_matches"], true);
    assert!((d["exponent"].as_f64().unwrap() - 0.5).abs() < 0.05);
}

#[test]
fn exit_codes() {
    assert_eq!(sl3z(&["reduce", "--matrix", "1,2;3"]).status.code(), Some(2));
    assert_eq!(sl3z(&["sail", "--matrix", EXAMPLE, "--format", "svg"]).status.code(), Some(2));
    assert_eq!(sl3z(&["classify", "--type", "0,1|1,0,2", "--v", "1,0,0", "--m", "0:1", "--n", "0:1"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("tiny.conf");
    std::fs::write(&cfg, "# too small to stabilize\nmax_window = 16\n").unwrap();
    let out = sl3z(&["--config", cfg.to_str().unwrap(), "census", "--max-complexity", "1"]);
    assert_eq!(out.status.code(), Some(3));
    std::fs::write(&cfg, "colour = red\n").unwrap();
    assert_eq!(sl3z(&["--config", cfg.to_str().unwrap(), "census"]).status.code(), Some(2));
}
