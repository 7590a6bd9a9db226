use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qkl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qkl")).args(args).output().expect("qkl runs")
}

fn qkl_env(args: &[&str], key: &str, val: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qkl")).args(args).env(key, val).output().expect("qkl runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn num(v: &Value) -> f64 {
    v.to_string().parse().unwrap()
}

fn value_re(out: &Output) -> f64 {
    num(&json(out)["results"][0]["value"][0])
}

#[test]
fn eval_meixner_pollaczek_degree_one() {
    // P_1 = 2(k cos φ + x sin φ), zero at φ = π/2, x = 0
    let out = qkl(&["eval", "poly", "family=mp", "k=1", "phi=1.5707963", "n=1", "x=0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(value_re(&out).abs() < 1e-6);
}

#[test]
fn eval_kernel_at_zero_t() {
    let out = qkl(&["eval", "kernel", "family=mp", "k=1", "phi=1.0", "t=0", "x=0", "y=0"]);
    assert_eq!(out.status.code(), Some(0));
    assert!((value_re(&out) - 1.0).abs() < 1e-15);
}

#[test]
fn eval_series_log_oracle() {
    // 2F1(1,1;2;z) = −ln(1−z)/z
    let out = qkl(&["eval", "series", "type=2F1", "a=1", "b=1", "c=2", "z=0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let expected = 2.0 * 2f64.ln();
    assert!((value_re(&out) - expected).abs() < 1e-14);
    let r = &json(&out)["results"][0];
    assert!(r["terms_used"].as_u64().unwrap() > 0);
    assert!(r["tail_estimate"].is_number());
}

#[test]
fn eval_complex_parameters_and_forms() {
    let closed =
        qkl(&["eval", "kernel", "family=ac", "k=0.7", "q=0.5", "s=1.1", "sigma=0.9", "t=0.3", "x=0.2", "y=-0.4"]);
    let sum = qkl(&[
        "eval",
        "kernel",
        "family=ac",
        "k=0.7",
        "q=0.5",
        "s=1.1",
        "sigma=0.9",
        "t=0.3",
        "x=0.2",
        "y=-0.4",
        "form=sum",
    ]);
    assert!((value_re(&closed) - value_re(&sum)).abs() < 1e-9 * value_re(&sum).abs());
    let out = qkl(&["eval", "series", "type=pFq", "a1=[0.5,0.25]", "b1=1.5", "z=0.3"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    // 1F1 at z = 0.3 with a = 0.5+0.25i
    assert!(json(&out)["results"][0]["value"][1].as_f64().is_some());
}

#[test]
fn eval_reports_bad_input_and_divergence() {
    let out = qkl(&["eval", "series", "type=2F1", "a=1", "b=1", "c=2", "z=1.5"]);
    assert_eq!(out.status.code(), Some(3));
    let out = qkl(&["eval", "series", "type=2F1", "a=1", "b=1", "c=2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("'z'"));
    let out = qkl(&["eval", "poly", "family=mp", "k=1", "phi=1", "n=1", "x=0", "typo=3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("typo"));
    let out = qkl(&["eval", "poly", "family=mp", "k=-1", "phi=1", "n=1", "x=0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = qkl(&["eval", "poly", "family=nope", "n=1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn check_seed_range_gives_one_record_per_seed() {
    let out = qkl(&["check", "--identity", "mp_poisson", "--seeds", "0..9"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 10);
    assert!(results.iter().all(|r| r["pass"] == Value::Bool(true)));
    let seeds: Vec<u64> = results.iter().map(|r| r["seed"].as_u64().unwrap()).collect();
    assert_eq!(seeds, (0..10).collect::<Vec<_>>());
    assert_eq!(doc["run"]["command"], "check");
    assert!(doc["run"]["version"].is_string());
    assert!(String::from_utf8_lossy(&out.stderr).contains("10 passed / 0 failed / 0 errored"));
}

#[test]
fn reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = qkl(&[
            "check",
            "--identity",
            "aw_bilinear",
            "--identity",
            "mp_spoisson",
            "--seeds",
            "0..7",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let doc: Value = serde_json::from_slice(&fs::read(&a).unwrap()).unwrap();
    let ids: Vec<&str> = doc["results"].as_array().unwrap().iter().map(|r| r["identity"].as_str().unwrap()).collect();
    assert_eq!(ids[0], "aw_bilinear");
    assert_eq!(ids[15], "mp_spoisson");
    // floats carry 17 significant digits
    let rel = doc["results"][0]["rel_err"].to_string();
    let mantissa = rel.split('e').next().unwrap().replace(['-', '.'], "");
    assert_eq!(mantissa.len(), 17, "{rel}");
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn check_with_parameter_file() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", r#"{"k": 0.8, "phi": 1.1, "t": 0.4, "x": 0.5, "y": -0.3}"#);
    let out = qkl(&["check", "--identity", "mp_poisson", "--params", &good]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"].as_array().unwrap().len(), 1);

    let complex_t = write(dir.path(), "c.json", r#"{"k": 0.8, "phi": 1.1, "t": [0.2, 0.3], "x": 0.5, "y": -0.3}"#);
    let out = qkl(&["check", "--identity", "mp_poisson", "--params", &complex_t]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let diverges = write(dir.path(), "d.json", r#"{"k": 0.8, "phi": 1.1, "t": 1.0, "x": 0.5, "y": -0.3}"#);
    let out = qkl(&["check", "--identity", "mp_poisson", "--params", &diverges]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(json(&out)["results"][0]["error"], "DivergenceError");

    let bad = write(dir.path(), "b.json", r#"{"k": -0.8, "phi": 1.1, "t": 0.4, "x": 0.5, "y": -0.3}"#);
    assert_eq!(qkl(&["check", "--identity", "mp_poisson", "--params", &bad]).status.code(), Some(2));

    let malformed = write(dir.path(), "m.json", r#"{"k": "big"}"#);
    assert_eq!(qkl(&["check", "--identity", "mp_poisson", "--params", &malformed]).status.code(), Some(2));
    assert_eq!(qkl(&["check", "--all", "--params", &good]).status.code(), Some(2));
}

#[test]
fn check_reports_failures_with_exit_one() {
    let out = qkl(&["check", "--identity", "mp_poisson", "--seeds", "0..3", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["results"].as_array().unwrap().len(), 4);
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed"));
}

#[test]
fn max_terms_from_environment() {
    let out = qkl_env(
        &["check", "--identity", "mp_poisson", "--seeds", "0..3", "--precision", "standard"],
        "QKL_MAX_TERMS",
        "3",
    );
    assert_eq!(out.status.code(), Some(1));
    let doc = json(&out);
    assert_eq!(doc["run"]["config"]["max_terms"], 3);
    assert!(doc["results"].as_array().unwrap().iter().any(|r| r["lhs_terms"]["status"] == "max_terms_reached"));
    let out = qkl_env(&["check", "--identity", "mp_poisson"], "QKL_MAX_TERMS", "lots");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exact_checks() {
    let out = qkl(&["check", "--identity", "mult_2f1", "--exact", "--K", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    let results = doc["results"].as_array().unwrap();
    assert_eq!(results.len(), 5);
    assert!(results.iter().all(|r| r["equal"] == Value::Bool(true) && r["checked"] == 9));

    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "h.json", r#"{"alpha": 0.5, "beta": 0.25, "M": 3, "N": 2, "z": 0.1}"#);
    let out = qkl(&["check", "--identity", "hahn_bilinear_discrete", "--exact", "--params", &p]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = &json(&out)["results"][0];
    assert_eq!(r["points"], 12);
    assert_eq!(r["params"]["z"], "1/10");

    let pole = write(dir.path(), "p.json", r#"{"a": 1, "b": 1, "c": -2}"#);
    let out = qkl(&["check", "--identity", "burchnall_chaundy", "--exact", "--params", &pole]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(qkl(&["check", "--identity", "mp_poisson", "--exact"]).status.code(), Some(2));
}

#[test]
fn sweep_grid_shape_and_errors() {
    let out = qkl(&["sweep", "--identity", "mp_poisson", "--grid", "t=0,0.2,0.4,0.6", "--grid", "k=0.5,1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 13);
    assert!(lines[0].starts_with("t,k,rel_err"));
    assert!(lines[1].starts_with("0.0000000000000000e+0,5.0000000000000000e-1,"));
    assert!(lines[4].starts_with("2.0000000000000001e-1,5.0000000000000000e-1,"));

    let out = qkl(&["sweep", "--identity", "mp_poisson", "--grid", "t=0.5,1", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json(&out);
    assert_eq!(doc["results"][0]["error"], Value::Null);
    assert_eq!(doc["results"][1]["error"], "DivergenceError");

    assert_eq!(qkl(&["sweep", "--identity", "mp_poisson", "--grid", "q=0.5"]).status.code(), Some(2));
}

#[test]
fn ortho_gram_reports() {
    let out = qkl(&["ortho", "family=mp", "k=0.8", "phi=1.1", "nmax=8"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["results"][0];
    assert!(num(&r["max_deviation"]) < 1e-7);
    assert_eq!(r["matrix"].as_array().unwrap().len(), 9);

    let out = qkl(&["ortho", "family=asc", "q=0.5", "a=0.4", "b=0.3", "nmax=8", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("max_offdiag"));

    let out = qkl(&["ortho", "family=asc", "q=0.5", "a=1.2", "b=0.3", "nmax=8"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(qkl(&["check", "--identity", "nonexistent"]).status.code(), Some(2));
    assert_eq!(qkl(&["check", "--identity", "mp_poisson", "--seeds", "9..1"]).status.code(), Some(2));
    assert_eq!(qkl(&["check", "--identity", "mp_poisson", "--precision", "quad"]).status.code(), Some(2));
    assert_eq!(qkl(&["frobnicate"]).status.code(), Some(2));
}
