use std::process::{Command, Output};

use serde_json::Value;

fn rank3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rank3")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn params_unitary_five() {
    let out = rank3(&["params", "--family", "u", "--dim", "5", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "(176, 40, 135, 12, 8), roots (4, -8)");
    let v = json(&rank3(&["params", "--family", "u", "--dim", "5"]));
    assert_eq!(v["params"]["b"], 135);
    assert_eq!(v["roots"], serde_json::json!([4, -8]));
}

#[test]
fn points_accepts_dim_or_n() {
    let a = json(&rank3(&["points", "--family", "o-", "--n", "3"]));
    let b = json(&rank3(&["points", "--family", "o-", "--dim", "6"]));
    assert_eq!(a, b);
    assert_eq!(a["points"]["nonsingular"], 36);
    assert_eq!(a["points"]["singular"], 27);
}

#[test]
fn order_reports_formula_and_suborbits() {
    let v = json(&rank3(&["order", "--family", "o+", "--n", "3"]));
    assert_eq!(v["group"]["order"], "40320");
    assert_eq!(v["group"]["formulaOrder"], "40320");
    assert_eq!(v["group"]["rank"], 3);
    let v = json(&rank3(&["order", "--family", "o+", "--n", "3", "--skip-order"]));
    assert_eq!(v["group"]["certificate"], "bounds");
}

#[test]
fn verify_o_plus_ell_three_passes() {
    let out = rank3(&["verify", "--family", "o+", "--n", "3", "--ell", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"]["match"], true);
    // top-level keys in emitted order
    let text = String::from_utf8_lossy(&out.stdout);
    let keys: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \""))
        .map(|l| l.trim_start().trim_start_matches('"').split('"').next().unwrap())
        .collect();
    assert_eq!(
        keys,
        [
            "schema",
            "input",
            "points",
            "params",
            "roots",
            "group",
            "factors",
            "socleSeries",
            "lattice",
            "verdict",
            "timingsMs"
        ]
    );
}

#[test]
fn even_ell_is_a_usage_error() {
    let out = rank3(&["verify", "--family", "o+", "--n", "3", "--ell", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_exits_two_with_usage() {
    let out = rank3(&["verify", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage"));
}

#[test]
fn out_of_desk_scale() {
    let out = rank3(&["analyze", "--family", "u", "--dim", "9", "--ell", "3"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("out of desk scale") && err.contains("43776"), "{err}");
}

#[test]
fn stored_report_verifies_idempotently() {
    let out = rank3(&["verify", "--family", "o-", "--n", "3", "--ell", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"]["flags"], serde_json::json!(["TABLE2_Y_DELTA"]));
    let dir = std::env::temp_dir().join(format!("rank3-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let again = rank3(&["verify", "--report", path.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));
    let w = json(&again);
    assert_eq!(v["verdict"], w["verdict"]);
    assert_eq!(v["lattice"], w["lattice"]);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn tampered_report_fails_with_exit_one() {
    let out = rank3(&["analyze", "--family", "o+", "--n", "3", "--ell", "5"]);
    let mut v = json(&out);
    v["factors"][1]["dim"] = 8.into();
    let dir = std::env::temp_dir().join(format!("rank3-cli-t-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let again = rank3(&["verify", "--report", path.to_str().unwrap(), "--format", "text"]);
    assert_eq!(again.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&again.stdout).contains("FAIL"));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn expect_lists_layers() {
    let v = json(&rank3(&["expect", "--family", "u", "--dim", "5", "--ell", "3"]));
    assert_eq!(v["layers"].as_array().unwrap().len(), 5);
}

#[test]
fn suite_marks_the_unreachable_row() {
    let out = rank3(&["suite", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 17);
    let skipped: Vec<&&str> = lines.iter().filter(|l| l.starts_with("SKIPPED")).collect();
    assert_eq!(skipped.len(), 1);
    assert!(skipped[0].contains("OUT_OF_SCALE") && skipped[0].contains("size=9"));
    assert_eq!(lines.iter().filter(|l| l.starts_with("PASS")).count(), 16);
}
