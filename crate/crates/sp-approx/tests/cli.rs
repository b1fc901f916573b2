use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sp-approx"))
        .args(args)
        .env_remove("SP_APPROX_BUDGET_FILE")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

#[test]
fn charseq_matches_brute_force() {
    let out = run(&["charseq", "--psi", "product:[pow(-1),pow(-1)]", "--count", "5"]);
    let v = json(&out);
    let deltas: Vec<u64> = v["levels"].as_array().unwrap().iter().map(|l| l["delta"].as_u64().unwrap()).collect();
    assert_eq!(deltas, [9, 21, 33, 49, 61]);
}

#[test]
fn class_sigma_harmonic() {
    let v =
        json(&run(&["class", "--quantity", "sigma", "--psi", "explicit:harmonic", "--p", "1", "--q", "1", "--n", "1"]));
    assert!((v["value"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-12);
    assert_eq!(v["s_star"], 2);
}

#[test]
fn class_width_zero_is_eps_1() {
    let v = json(&run(&["class", "--quantity", "width", "--n", "0"]));
    assert_eq!(v["value"].as_f64().unwrap(), 1.0);
}

#[test]
fn jackson_report() {
    let v = json(&run(&["jackson", "--phi", "alpha:1", "--p", "2", "--tau", "pi", "--v", "cos", "--n", "3"]));
    assert!((v["I"].as_f64().unwrap() - 4.0).abs() < 1e-10);
    assert!((v["constant"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
    assert_eq!(v["match"], true);
    assert_eq!(v["k_star"], 3);
}

#[test]
fn modulus_of_constant_is_zero() {
    let c = data("const.json");
    let v = json(&run(&["modulus", "--input", c.to_str().unwrap(), "--phi", "alpha:2", "--delta", "0.5"]));
    assert_eq!(v["omega"].as_f64().unwrap(), 0.0);
}

#[test]
fn inverse_check_holds_on_sample() {
    let f = data("sample.json");
    let v = json(&run(&[
        "inverse-check",
        "--input",
        f.to_str().unwrap(),
        "--alpha",
        "1",
        "--p",
        "2",
        "--n",
        "8",
        "--variant",
        "improved",
    ]));
    assert_eq!(v["holds"], true);
    assert!(v["lhs"].as_f64().unwrap() <= v["rhs"].as_f64().unwrap());
}

#[test]
fn csv_output_has_schema_line() {
    let out = run(&["--format", "csv", "jackson", "--n", "2"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("#schema=1"));
    assert_eq!(lines.next(), Some("quantity,n,value,s_star,regime,certificate"));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["charseq", "--psi", "radial: psi=pow(-1)"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["class", "--quantity", "width", "--p", "0.5", "--q", "1", "--n", "1"]).status.code(), Some(3));
    let f = data("sample.json");
    let off = run(&["inverse-check", "--input", f.to_str().unwrap(), "--n", "4", "--ladder", "square"]);
    assert_eq!(off.status.code(), Some(2), "frequencies off the ladder");
    let classic = run(&[
        "inverse-check",
        "--input",
        f.to_str().unwrap(),
        "--alpha",
        "0.25",
        "--p",
        "2",
        "--n",
        "4",
        "--variant",
        "classic",
    ]);
    assert_eq!(classic.status.code(), Some(3), "alpha p < 1");
}

#[test]
fn config_file_sets_format_and_rejects_unknown_keys() {
    let dir = std::env::temp_dir().join(format!("sp-approx-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("good.cfg");
    std::fs::write(&good, "format = csv\nseed = 3\n").unwrap();
    let out = run(&["--config", good.to_str().unwrap(), "class", "--quantity", "best", "--n", "2"]);
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("#schema=1"));
    let bad = dir.join("bad.cfg");
    std::fs::write(&bad, "colour = blue\n").unwrap();
    assert_eq!(
        run(&["--config", bad.to_str().unwrap(), "class", "--quantity", "best", "--n", "2"]).status.code(),
        Some(2)
    );
    let file = dir.join("out.json");
    let out = run(&["--output", file.to_str().unwrap(), "class", "--quantity", "best", "--n", "2"]);
    assert!(out.status.success() && out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&file).unwrap()).unwrap();
    assert_eq!(v["value"].as_f64().unwrap(), 0.5);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn verify_nterm_suite_passes() {
    let out = run(&["verify", "nterm", "--seed", "5"]);
    let v = json(&out);
    assert_eq!(v["passed"], true);
}
