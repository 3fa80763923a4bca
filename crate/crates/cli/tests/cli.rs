use std::process::{Command, Output};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stieltjes-hyp")).args(args).output().expect("run binary")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn eval_log_at_one() {
    let out = bin(&["eval", "--sigma", "1", "--a", "1", "--b", "2", "--z", "1"]);
    assert!(out.status.success());
    let v = json(&out);
    let re = v["value"][0].as_f64().unwrap();
    assert!((re - 2f64.ln()).abs() < 1e-8);
}

#[test]
fn eval_beyond_unit_disk() {
    let out = bin(&["eval", "--sigma", "1", "--a", "1", "--b", "2", "--z", "9", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|t| t.parse().unwrap()).collect();
    assert!((row[0] - 10f64.ln() / 9.0).abs() < 1e-8);
}

#[test]
fn density_grid_rows() {
    let out = bin(&["density", "--sigma", "1", "--a", "1", "--b", "2", "--grid", "0.01:0.99:99", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x,value,error");
    assert_eq!(lines.len(), 100);
    // the density is identically one here
    for l in &lines[1..] {
        let v: f64 = l.split(',').nth(1).unwrap().parse().unwrap();
        assert!((v - 1.0).abs() < 1e-8);
    }
}

#[test]
fn pade_csv_needs_point() {
    let out = bin(&["pade", "--sigma", "1", "--a", "1", "--b", "2", "--m", "3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
    let out = bin(&["pade", "--sigma", "1", "--a", "1", "--b", "2", "--m", "3", "--z", "1", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 4);
}

#[test]
fn bad_input_exits_two() {
    for args in [
        &["eval", "--sigma", "1", "--a", "1", "--b", "2", "--z", "abc"][..],
        &["eval", "--sigma", "1", "--a", "1", "--b", "2,3", "--z", "1"][..],
        &["verify", "--suite", "bogus"][..],
        &["density", "--sigma", "1", "--a", "1", "--b", "2", "--grid", "1:0:3"][..],
    ] {
        assert_eq!(bin(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn empty_suite_selection_passes() {
    let out = bin(&["verify", "--suite", ""]);
    assert!(out.status.success());
    assert_eq!(json(&out)["entries"].as_array().unwrap().len(), 0);
}

#[test]
fn single_suite_report_shape() {
    let out = bin(&["verify", "--suite", "schur", "--seed", "7"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["seed"], 7);
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 2);
    assert!(entries.iter().all(|e| e["suite"] == "schur" && e["status"] == "pass"));
}
