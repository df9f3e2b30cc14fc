use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_supermedian"))
        .args(args)
        .env_remove("SUPERMEDIAN_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

const POLAR: &str = "polar(r_min=0.01,r_max=100,n_radial=12,n_angular=8,log=true)";

#[test]
fn exit_codes() {
    let code = |a: &[&str]| run(a).status.code().unwrap();
    assert_eq!(code(&["solve-c0"]), 0);
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["solve-c0", "--tol", "1"]), 64);
    assert_eq!(code(&["alpha-star", "--dim", "1", "--c", "2"]), 64);
    assert_eq!(code(&["scenario", "no-such-scenario"]), 64);
    assert_eq!(code(&["scenario", "no-min-2d", "--param", "bogus=1"]), 64);
    assert_eq!(code(&["check", "--field", "hat(", "--radius", "constant", "--grid", POLAR]), 64);
    assert_eq!(code(&["check", "--field", "hat", "--radius", "contract_example", "--grid", POLAR]), 0);
    assert_eq!(code(&["check", "--field", "quadratic", "--radius", "constant(v=1)", "--grid", POLAR]), 1);
    assert_eq!(code(&["fenton", "--radius", "constant(v=1)", "--target", "1e6", "--max-iter", "5"]), 2);
}

#[test]
fn parse_errors_point_at_the_column() {
    let out = run(&["check", "--field", "min(hat,,x1inv)", "--radius", "constant", "--grid", POLAR]);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("column"), "{err}");
}

#[test]
fn solve_c0_tolerances_agree() {
    let (_, a) = json(&["solve-c0"]);
    let (_, b) = json(&["solve-c0", "--tol", "1e-12"]);
    let (_, c) = json(&["solve-c0", "--tol", "1e-6"]);
    let c0 = |v: &Value| v["results"]["c0"].as_f64().unwrap();
    assert!((c0(&a) - c0(&b)).abs() <= 1e-10);
    assert!((c0(&a) - c0(&c)).abs() <= 1e-6);
    assert!(c0(&a) > 2.50 && c0(&a) < 2.51);
    assert_eq!(a["schema"], "supermedian.run-report/1");
}

#[test]
fn scenario_list_names_every_scenario() {
    let out = run(&["scenario", "list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "discontinuous-r",
        "liouville-1d-critical",
        "log-superharmonic",
        "no-min-1d",
        "no-min-2d",
        "no-min-2d-lambda",
        "remark-contracting",
        "unbounded-r",
    ] {
        assert!(text.lines().any(|l| l.split('\t').next() == Some(name)), "{name} missing");
    }
}

#[test]
fn x1inv_equals_its_combinator_form() {
    let grid = "cartesian(xmin=-5,xmax=5,ymin=-5,ymax=5,n=7)";
    let a = json(&["check", "--field", "x1inv", "--radius", "constant(v=2)", "--grid", grid]).1;
    let b = json(&[
        "check",
        "--field",
        "min(constant(v=1),abspow(alpha=-1,axis=1))",
        "--radius",
        "constant(v=2)",
        "--grid",
        grid,
    ])
    .1;
    let worst = |v: &Value| v["results"]["worst_margin"].as_f64().unwrap();
    assert!((worst(&a) - worst(&b)).abs() <= 1e-8);
    let (va, vb) = (a["results"]["violations"].as_array().unwrap(), b["results"]["violations"].as_array().unwrap());
    assert_eq!(va.len(), vb.len());
    assert!(!va.is_empty());
    for (p, q) in va.iter().zip(vb) {
        assert_eq!(p["point"], q["point"]);
        assert!((p["mean_value"].as_f64().unwrap() - q["mean_value"].as_f64().unwrap()).abs() <= 1e-9);
    }
    assert_eq!(a["results"]["points_checked"], b["results"]["points_checked"]);
}

#[test]
fn fenton_stop_indices() {
    let n = |r: &str, t: &str, angles: &str| {
        json(&["fenton", "--radius", r, "--target", t, "--angles", angles]).1["results"]["n_stop"].as_u64().unwrap()
    };
    assert_eq!(n("constant(v=1)", "10", "720"), 10);
    assert_eq!(n("add(scale(abs,k=0.5),constant(v=1))", "100", "720"), 9);
    assert_eq!(n("contract_example", "1000", "720"), n("contract_example", "1000", "1440"));
}

#[test]
fn alpha_star_reports() {
    let (code, v) = json(&["alpha-star", "--dim", "2", "--c", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["results"]["value"], "unbounded");
    let (_, v) = json(&["alpha-star", "--dim", "2", "--c", "1.5"]);
    assert!((v["results"]["value"].as_f64().unwrap() - 2.815711656274982).abs() < 1e-9);
    let (_, v) = json(&["alpha-star", "--dim", "1", "--c", "3"]);
    assert!((v["results"]["value"].as_f64().unwrap() - 0.23834215678551913).abs() < 1e-10);
}

#[test]
fn payload_hash_is_reproducible() {
    let args = ["check", "--field", "logsuper", "--radius", "max_cabs_M(c=2,M=1)", "--grid", POLAR, "--mean", "lambda"];
    let (_, a) = json(&args);
    let (_, b) = json(&args);
    assert_eq!(a["payload_sha256"], b["payload_sha256"]);
    assert_eq!(a["payload_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_supermedian"))
        .args(["fenton", "--radius", "constant(v=1)", "--target", "10"])
        .env("SUPERMEDIAN_OUT_DIR", dir.path())
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    let report: Value = serde_json::from_slice(&std::fs::read(dir.path().join("fenton.json")).unwrap()).unwrap();
    assert_eq!(report["results"]["n_stop"], 10);
    let csv = std::fs::read_to_string(dir.path().join("fenton.profile.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("iteration,angle,alpha"));
    assert_eq!(csv.lines().count(), 1 + 11 * 720);
}

#[test]
fn scenario_writes_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let code = run(&["scenario", "remark-contracting", "--out", out]).status.code().unwrap();
    assert_eq!(code, 0);
    let names: Vec<String> =
        std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name().into_string().unwrap()).collect();
    assert!(names.iter().any(|n| n.ends_with(".json")), "{names:?}");
    assert!(names.iter().any(|n| n.ends_with(".points.csv")), "{names:?}");
}
