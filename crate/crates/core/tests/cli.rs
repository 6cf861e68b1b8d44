use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn hvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hvol")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn model(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn compute_affine_space() {
    let dir = tempfile::tempdir().unwrap();
    let m = model(dir.path(), "c3.json", r#"{"schema":1,"type":"toric_cone","rays":[[1,0,0],[0,1,0],[0,0,1]]}"#);
    let out = hvol(&["compute", "--model", &m, "--valuation", "1,1,1", "--oracle-depth", "100"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["nvol"], "27");
    assert_eq!(r["results"]["volume"], "1");
    assert_eq!(r["checks"][0]["pass"], true);
}

#[test]
fn minimize_akm_3_5() {
    let dir = tempfile::tempdir().unwrap();
    let m = model(dir.path(), "a.json", r#"{"schema":1,"type":"akm","n":3,"k":5}"#);
    let out = hvol(&["minimize", "--model", &m]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["min_nvol"], "27/2");
    let x = r["results"]["argmin_approx"].as_array().unwrap();
    let ratio = x[3].as_f64().unwrap() / x[0].as_f64().unwrap();
    assert!((ratio - 0.5).abs() < 1e-6);
}

#[test]
fn quotient_cyclic() {
    let out = hvol(&["quotient", "--group", r#"{"type":"cyclic","r":7,"a":3}"#]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["results"]["min_nvol"], "4/7");
    // 1/4(1,2) contains a pseudo-reflection
    let out = hvol(&["quotient", "--group", r#"{"type":"cyclic","r":4,"a":2}"#]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn schema_errors_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let m = model(dir.path(), "bad.json", r#"{"type":"akm","n":3,"k":2}"#);
    let out = hvol(&["compute", "--model", &m, "--valuation", "1,1,1,1"]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["code"], "SchemaError");
}

#[test]
fn polarized_and_log_fano_models() {
    let dir = tempfile::tempdir().unwrap();
    let m = model(dir.path(), "p.json", r#"{"schema":1,"type":"polarized_cone","n":3,"r":"3/2","degH":"2"}"#);
    let r = report(&hvol(&["compute", "--model", &m]));
    assert_eq!(r["results"]["nvol_ord_v"], "27/4");
    assert_eq!(r["pass"], true);
    let m = model(
        dir.path(),
        "f.json",
        r#"{"schema":1,"type":"toric_log_fano","r":"1",
            "facets":[{"normal":[1,0],"offset":1},{"normal":[0,1],"offset":1},{"normal":[-1,-1],"offset":"1"}]}"#,
    );
    let out = hvol(&["compute", "--model", &m]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["results"]["beta_n"], "1/3");
}

#[test]
fn filtration_plane() {
    let dir = tempfile::tempdir().unwrap();
    let m = model(dir.path(), "c2.json", r#"{"schema":1,"type":"toric_cone","rays":[[1,0],[0,1]]}"#);
    let out = hvol(&["filtration", "--model", &m, "--v1", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["profile"]["c1"], "1");
    assert_eq!(r["results"]["profile"]["pieces"][0]["coeffs"][1], "-1");
}

#[test]
fn profile_import_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let m = model(dir.path(), "a13.json", r#"{"schema":1,"type":"akm","n":3,"k":2}"#);
    let base = ["filtration", "--model", &m, "--v0", "1,1,1,1", "--v1", "1,2,3,4"];
    let out = hvol(&base);
    assert_eq!(out.status.code(), Some(0));
    let direct = report(&out);
    let json = model(dir.path(), "prof.json", &direct["results"]["profile"].to_string());
    let out = hvol(&["filtration", "--profile", &json, "--r", "2", "--logdisc-v1", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let vol = r["results"]["vol_v1_approx"].as_f64().unwrap();
    assert!((vol - 1.0 / 12.0).abs() < 1e-12);
    assert!(r["results"]["fujita_gap_approx"].as_f64().unwrap() > 0.0);

    let csv = dir.path().join("prof.csv");
    let mut args = base.to_vec();
    args.extend(["--format", "csv", "--samples", "2001", "--output", csv.to_str().unwrap()]);
    assert_eq!(hvol(&args).status.code(), Some(0));
    let out = hvol(&["filtration", "--profile", csv.to_str().unwrap(), "--n", "3", "--lambda", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let vol = report(&out)["results"]["vol_v1_approx"].as_f64().unwrap();
    assert!((vol - 1.0 / 12.0).abs() < 1e-5);
}

#[test]
fn csv_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("series.csv");
    let out = hvol(&[
        "quotient", "--group", r#"{"type":"named","name":"Q8"}"#, "--samples", "10",
        "--format", "csv", "--output", csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("m,dim\n0,0\n1,1\n"));
    assert_eq!(text.lines().count(), 12);
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let m = model(dir.path(), "k.json", r#"{"schema":1,"type":"toric_cone","rays":[[0,0,1],[1,0,1],[0,1,1],[1,1,1]]}"#);
    let args = ["minimize", "--model", &m, "--starts", "3", "--seed", "7"];
    let a = hvol(&args);
    let b = hvol(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn selftest_filter_and_mutant() {
    let out = hvol(&["selftest", "--filter", "quotient"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["results"]["criteria"].as_array().unwrap().len(), 3);
    let out = hvol(&["selftest", "--filter", "fujita_sharpness", "--mutation", "projective-volume"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(report(&out)["results"]["criteria"][0]["pass"], false);
}
