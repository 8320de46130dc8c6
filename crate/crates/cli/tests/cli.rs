use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.display().to_string()
}

fn opmodel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_opmodel")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn complex(v: &Value) -> (f64, f64) {
    (v[0].as_f64().unwrap(), v[1].as_f64().unwrap())
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("opmodel-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

#[test]
fn classify_dirichlet_is_two_isometry() {
    let out = opmodel(&["classify", "--operator", &fixture("dirichlet.json"), "--expect", "two-isometry,concave"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["verdict"], "PASS");
    assert_eq!(r["results"]["classification"]["two_isometry"]["holds"], true);
    assert_eq!(r["results"]["classification"]["bounded_below"]["holds"], true);
    assert_eq!(r["checks"].as_array().unwrap().len(), 2);
}

#[test]
fn szego_kernel_value() {
    let out = opmodel(&["model", "--operator", &fixture("isometric.json"), "--kernel", "0.5,0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let (re, im) = complex(&r["results"]["kernel"]["value"]["data"][0]);
    assert!((re - 4.0 / 3.0).abs() < 1e-12 && im.abs() < 1e-12, "{re} {im}");
    let warnings = r["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("1/||L||")));
}

#[test]
fn dirichlet_kernel_matches_log_formula() {
    let out = opmodel(&["model", "--operator", &fixture("dirichlet.json"), "--kernel", "0.3+0.2i,-0.4"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let (re, im) = complex(&r["results"]["kernel"]["value"]["data"][0]);
    // -log(1 - w)/w with w = z conj(lambda)
    let (lr, li, z) = (0.3f64, 0.2f64, -0.4f64);
    let (wr, wi) = (z * lr, -z * li);
    let (one_r, one_i) = (1.0 - wr, -wi);
    let (log_r, log_i) = ((one_r * one_r + one_i * one_i).sqrt().ln(), one_i.atan2(one_r));
    let den = wr * wr + wi * wi;
    let want = (-(log_r * wr + log_i * wi) / den, -(log_i * wr - log_r * wi) / den);
    assert!((re - want.0).abs() < 1e-10 && (im - want.1).abs() < 1e-10, "{re} {im} {want:?}");
}

#[test]
fn zero_generator_cogenerator_is_minus_identity() {
    let out = opmodel(&["semigroup", "--generator", &fixture("zero.json"), "--cogenerator"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    let data = r["results"]["cogenerator"]["data"].as_array().unwrap();
    let want = [(-1.0, 0.0), (0.0, 0.0), (0.0, 0.0), (-1.0, 0.0)];
    for (v, w) in data.iter().zip(want) {
        assert_eq!(complex(v), w);
    }
}

#[test]
fn semigroup_jordan_report() {
    let out = opmodel(&[
        "semigroup",
        "--generator",
        &fixture("jordan3.json"),
        "--t",
        "0,0.5",
        "--growth-bound",
        "--equivalence-suite",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert!((r["results"]["growth_bound"]["omega"].as_f64().unwrap() + 1.0).abs() < 1e-9);
    let evo = r["results"]["evolution"].as_array().unwrap();
    assert_eq!(evo.len(), 2);
    assert_eq!(complex(&evo[0]["matrix"]["data"][0]), (1.0, 0.0));
    // exp(-0.5) on the diagonal of exp(0.5 J)
    assert!((complex(&evo[1]["matrix"]["data"][0]).0 - (-0.5f64).exp()).abs() < 1e-14);
}

#[test]
fn hardy_blaschke_checks() {
    let out = opmodel(&[
        "hardy",
        "--symbol-file",
        &fixture("blaschke05.json"),
        "--model-space",
        "64",
        "--ladder",
        "4",
        "--caradus",
        "4",
        "--caradus-n",
        "20",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["results"]["model_space"]["dimension"], 1);
    assert_eq!(r["results"]["ladder"]["total_dim"], 5);
    assert_eq!(r["results"]["caradus"]["backward_shift"]["kernel_dim"], 4);
    let coeffs = r["results"]["symbol"]["leading_coefficients"].as_array().unwrap();
    // (0.5 - z)/(1 - 0.5 z) = 0.5 - 0.75 z - 0.375 z^2 - ...
    assert_eq!(complex(&coeffs[0]), (0.5, 0.0));
    assert!((complex(&coeffs[1]).0 + 0.75).abs() < 1e-15);
    assert!((complex(&coeffs[2]).0 + 0.375).abs() < 1e-15);
}

#[test]
fn hardy_semigroup_symbol_from_zeros() {
    let out = opmodel(&["hardy", "--blaschke", "0", "--semigroup-t", "1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    let c0 = complex(&r["results"]["semigroup_symbol"]["leading_coefficients"][0]);
    assert!((c0.0 - (-1f64).exp()).abs() < 1e-15);
}

#[test]
fn reports_are_deterministic() {
    let args = ["model", "--operator", &fixture("dirichlet.json"), "--kernel", "0.2,0.4", "--verify", "intertwine,reproduce"];
    let a = opmodel(&args);
    let b = opmodel(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);

    let path = std::env::temp_dir().join(format!("opmodel-cli-out-{}.json", std::process::id()));
    let mut with_out = args.to_vec();
    let p = path.display().to_string();
    with_out.extend(["--out", &p]);
    let c = opmodel(&with_out);
    assert_eq!(c.status.code(), Some(0));
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    let _ = std::fs::remove_file(path);
}

#[test]
fn provenance_records_inputs_and_tolerances() {
    let out = opmodel(&["classify", "--operator", &fixture("isometric.json"), "--tol-psd", "1e-6"]);
    let r = json(&out);
    let prov = &r["provenance"];
    assert_eq!(prov["tolerances"]["psd_tol"].as_f64(), Some(1e-6));
    assert_eq!(prov["tolerances"]["rank_tol"].as_f64(), Some(1e-10));
    let sha = prov["inputs"][0]["sha256"].as_str().unwrap();
    assert_eq!(sha.len(), 64);
    assert!(sha.chars().all(|c| c.is_ascii_hexdigit()));
}

#[test]
fn exit_code_parse_errors() {
    assert_eq!(opmodel(&["classify", "--bogus"]).status.code(), Some(2));
    assert_eq!(opmodel(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(opmodel(&["classify", "--operator", "/nonexistent/op.json"]).status.code(), Some(2));
    let bad = temp_file("bad.json", r#"{"kind":"banded"}"#);
    assert_eq!(opmodel(&["classify", "--operator", bad.to_str().unwrap()]).status.code(), Some(2));
    let rect = temp_file("rect.json", r#"{"rows":1,"cols":2,"data":[[1,0],[0,0]]}"#);
    assert_eq!(opmodel(&["semigroup", "--generator", rect.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(opmodel(&["classify", "--operator", &fixture("isometric.json"), "--tol-rank=-1"]).status.code(), Some(2));
    assert_eq!(opmodel(&["hardy", "--blaschke", "1.5", "--inner-check"]).status.code(), Some(2));
}

#[test]
fn exit_code_numeric_errors() {
    let id = temp_file("identity.json", r#"{"rows":2,"cols":2,"data":[[1,0],[0,0],[0,0],[1,0]]}"#);
    let out = opmodel(&["semigroup", "--generator", id.to_str().unwrap(), "--cogenerator"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cogenerator"));

    let out = opmodel(&["model", "--operator", &fixture("isometric.json"), "--kernel", "1.2,0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("kernel_eval"));

    let dense = temp_file("dense.json", r#"{"kind":"dense","matrix":{"rows":1,"cols":1,"data":[[1,0]]}}"#);
    assert_eq!(opmodel(&["model", "--operator", dense.to_str().unwrap()]).status.code(), Some(3));
}

#[test]
fn exit_code_check_failure() {
    let w = temp_file("weights.json", r#"{"kind":"shift","head_weights":[0.5],"tail_weight":1}"#);
    let out = opmodel(&["classify", "--operator", w.to_str().unwrap(), "--expect", "concave"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["verdict"], "FAIL");
    assert_eq!(r["checks"][0]["status"], "FAIL");
    assert!((r["checks"][0]["value"].as_f64().unwrap() - 0.75).abs() < 1e-15);
}

#[test]
fn text_format() {
    let out = opmodel(&["--format", "text", "classify", "--operator", &fixture("dirichlet.json")]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("classify: PASS\n"));
    assert!(s.contains("sha256:"));
}

#[test]
fn verify_all_on_bundled_fixtures() {
    let out = opmodel(&["verify-all"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    let groups = r["results"]["groups"].as_array().unwrap();
    assert_eq!(groups.len(), 18);
    let names: Vec<&str> = groups.iter().map(|g| g["group"].as_str().unwrap()).collect();
    assert_eq!(names[0], "criterion 01");
    assert_eq!(names[11], "criterion 12");
    assert!(groups.iter().all(|g| g["pass"] == true));

    let dir = fixture("");
    let from_disk = opmodel(&["verify-all", "--criteria", "1,3", "--fixtures", &dir]);
    assert_eq!(from_disk.status.code(), Some(0));
    assert_eq!(json(&from_disk)["checks"].as_array().unwrap().len(), 2);
    assert_eq!(opmodel(&["verify-all", "--criteria", "13"]).status.code(), Some(2));
}
