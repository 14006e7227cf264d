use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewtower")).args(args).output().expect("binary runs")
}

fn run_json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = run(&all);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}", String::from_utf8_lossy(&out.stdout));
    });
    (out.status.code().unwrap(), v)
}

#[test]
fn erase_all_zeta3_reports_y2() {
    let f = fixture("qweyl_zeta3.tw");
    let (code, v) = run_json(&["erase-all", "--tower", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["y"][1]["value"], "(z-1) * x1 x2 + 1");
    assert_eq!(v["y"][0]["value"], "x1");
    assert_eq!(v["verification"]["passed"], true);
    assert_eq!(v["warnings"].as_array().unwrap().len(), 0);
}

#[test]
fn not_pi_is_a_successful_verdict() {
    let f = fixture("qplane_lambda2.tw");
    let (code, v) = run_json(&["pi-check", "--tower", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "NotPI");
    assert_eq!(v["lambda_orders"]["2,1"], Value::Null);
}

#[test]
fn pi_check_reports_central_powers() {
    let f = fixture("qplane_zeta3.tw");
    let (code, v) = run_json(&["pi-check", "--tower", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["verdict"], "PI");
    assert_eq!(v["witnesses"][0]["element"], "x1^3");
    assert_eq!(v["witnesses"][1]["exponent"], 3);
}

#[test]
fn invalid_tower_exits_one_with_failing_identity() {
    let f = fixture("broken.tw");
    let out = run(&["validate", "--tower", f.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("q-skew"), "{text}");
    let (code, v) = run_json(&["validate", "--tower", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["valid"], false);
    assert_eq!(v["levels"][1]["failures"][0]["lhs"], "2");
}

#[test]
fn valid_tower_exits_zero() {
    for name in ["qweyl_generic.tw", "inner_matrix.tw", "graded3.tw", "weyl_gf5.tw"] {
        let f = fixture(name);
        let out = run(&["validate", "--tower", f.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{name}");
    }
}

#[test]
fn parse_errors_exit_two_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tw");
    std::fs::write(&path, "[base]\nfield = \"Q\"\n\n[[level]]\nvar = \"x1\"\nsigma_base = \"id +\"\n").unwrap();
    let out = run(&["validate", "--tower", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(":6:"), "{err}");
}

#[test]
fn unknown_variable_exits_two() {
    let f = fixture("qweyl_zeta3.tw");
    let out = run(&["mul", "--tower", f.to_str().unwrap(), "x3", "x1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["validate"]).status.code(), Some(2));
    let f = fixture("qplane_lambda2.tw");
    assert_eq!(run(&["swap", "--level", "1", "--tower", f.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn unsupported_erasure_exits_one() {
    let f = fixture("quantum_matrices.tw");
    let (code, v) = run_json(&["erase-all", "--tower", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["error"], "math");
}

#[test]
fn mul_and_central() {
    let f = fixture("qweyl_zeta3.tw");
    let (code, v) = run_json(&["mul", "--tower", f.to_str().unwrap(), "x2", "x1"]);
    assert_eq!(code, 0);
    assert_eq!(v["product"], "z * x1 x2 + 1");
    let (_, v) = run_json(&["central", "--tower", f.to_str().unwrap(), "x1"]);
    assert_eq!(v["central"], false);
    assert_eq!(v["fails_with"], "x2");
    let g = fixture("qplane_zeta3.tw");
    let (_, v) = run_json(&["central", "--tower", g.to_str().unwrap(), "x1^3 x2^3"]);
    assert_eq!(v["central"], true);
}

#[test]
fn order_reports_lambda_and_scalar() {
    let f = fixture("qweyl_zeta5.tw");
    let (code, v) = run_json(&["order", "--tower", f.to_str().unwrap(), "--scalar", "z^2"]);
    assert_eq!(code, 0);
    assert_eq!(v["lambda_orders"]["2,1"], 5);
    assert_eq!(v["scalar_order"], 5);
    assert_eq!(v["sigma_orders"]["1"], 1);
}

#[test]
fn erase_inner_matrix() {
    let f = fixture("inner_matrix.tw");
    let (code, v) = run_json(&["erase", "--tower", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["witness"]["branch"], "InnerSkolemNoether");
    assert_eq!(v["y"], "x1 + [[0, -1], [0, 0]]");
}

#[test]
fn swap_and_gr_emit_parseable_towers() {
    let dir = tempfile::tempdir().unwrap();
    let f = fixture("qplane_lambda2.tw");
    let (code, v) = run_json(&["swap", "--level", "2", "--tower", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let swapped = dir.path().join("swapped.tw");
    std::fs::write(&swapped, v["tower"].as_str().unwrap()).unwrap();
    assert_eq!(run(&["validate", "--tower", swapped.to_str().unwrap()]).status.code(), Some(0));

    let g = fixture("graded3.tw");
    let (code, v) = run_json(&["gr", "--tower", g.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["steps"][0], "filter by x3: drop delta_3");
    let graded = dir.path().join("graded.tw");
    std::fs::write(&graded, v["tower"].as_str().unwrap()).unwrap();
    assert_eq!(run(&["validate", "--tower", graded.to_str().unwrap()]).status.code(), Some(0));
}

#[test]
fn out_file_matches_stdout_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let f = fixture("weyl_gf5.tw");
    let args = ["pi-check", "--tower", f.to_str().unwrap(), "--json", "--out", out_path.to_str().unwrap()];
    let first = run(&args);
    let written = std::fs::read(&out_path).unwrap();
    assert_eq!(first.stdout, written);
    assert_eq!(run(&args).stdout, first.stdout);
}

#[test]
fn generic_q_carries_warning() {
    let f = fixture("qweyl_t.tw");
    let (code, v) = run_json(&["erase-all", "--tower", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let w = v["warnings"][0].as_str().unwrap();
    assert!(w.starts_with("Haynal criteria fail"), "{w}");
}
