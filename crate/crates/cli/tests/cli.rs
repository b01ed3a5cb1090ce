use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

const BLOCKS: &str = "blocks(2,2,on=[0])";

fn densitylab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_densitylab"))
        .args(args)
        .env("DENSITYLAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(format!("{name}.schema.json"));
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = densitylab(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn assert_valid(name: &str, doc: &Value) {
    let validator = jsonschema::validator_for(&schema(name)).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}\n{doc:#}");
}

#[test]
fn every_document_matches_its_schema() {
    let h = "1048576";
    let spec_path = std::env::temp_dir().join("densitylab-cli-test-spec.json");
    let witness = json_ok(&["witness", BLOCKS, "--target", "0.5", "--horizon", h]);
    std::fs::write(&spec_path, witness["spec"].to_string()).unwrap();
    assert_valid("measure-spec", &witness["spec"]);
    let spec_arg = spec_path.to_str().unwrap();

    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("density", vec!["density", "ap(0,2)", "--horizon", h]),
        ("density", vec!["density", BLOCKS, "--horizon", h]),
        ("alpha-density", vec!["alpha-density", BLOCKS, "--alpha-grid", "-1,0,2", "--horizon", h]),
        ("exact", vec!["exact", BLOCKS, "--alpha", "1"]),
        ("exact", vec!["exact", "diff(ap(0,2),finite{2})"]),
        ("polya", vec!["polya", BLOCKS, "--horizon", h]),
        ("gap", vec!["gap", BLOCKS, "--horizon", h]),
        ("gap", vec!["gap", "finite{300000,400000,600000,1000000,2000000}", "--horizon", "2097152"]),
        ("envelopes", vec!["envelopes", BLOCKS, "--alpha-grid", "0,1,2", "--horizon", h]),
        ("measure", vec!["measure", BLOCKS, "--spec", spec_arg, "--horizon", h]),
        ("witness", vec!["witness", BLOCKS, "--target", "0.5", "--horizon", h]),
        ("construct", vec!["construct", "intermediate", "ap(0,3)", "ap(0,2)"]),
        ("construct", vec!["construct", "counterexample", "--horizon", "100", "--rle"]),
        ("density-set", vec!["density-set", BLOCKS, "--num", "6", "--format", "json", "--horizon", h]),
        ("verify", vec!["verify", "--only", "set.", "--format", "json"]),
    ];
    for (name, args) in cases {
        let doc = json_ok(&args);
        assert_valid(name, &doc);
    }
}

#[test]
fn documented_examples() {
    let d = json_ok(&["density", "ap(0,2)", "--horizon", "1048576", "--format", "json"]);
    assert_eq!(d["exists"], true);
    assert!((d["value"].as_f64().unwrap() - 0.5).abs() < 1e-3);
    let p = json_ok(&["polya", BLOCKS]);
    assert!(p["lld_est"].as_f64().unwrap() <= 0.02 && p["uud_est"].as_f64().unwrap() >= 0.98);
    let w = json_ok(&["witness", BLOCKS, "--target", "0.5"]);
    assert!((w["value"].as_f64().unwrap() - 0.5).abs() <= 0.02);
    let g = json_ok(&["gap", "finite{300000,400000,600000,1000000,2000000}", "--horizon", "2097152"]);
    assert_eq!(g["gap_density"], "infinite");
}

#[test]
fn identical_runs_are_byte_identical() {
    for args in [
        vec!["density-set", BLOCKS, "--num", "12", "--seed", "7", "--horizon", "262144"],
        vec!["witness", BLOCKS, "--target", "0.3", "--horizon", "1048576"],
        vec!["alpha-density", "union(ap(0,3),blocks(3,2,on=[1]))", "--alpha-grid", "-1,0.5", "--horizon", "1048576"],
        vec!["construct", "superset", "ap(0,4)", "ap(0,2)", "--horizon", "40000", "--rle"],
    ] {
        let (a, b) = (densitylab(&args), densitylab(&args));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let other = densitylab(&["density-set", BLOCKS, "--num", "12", "--seed", "8", "--horizon", "262144"]);
    let first = densitylab(&["density-set", BLOCKS, "--num", "12", "--seed", "7", "--horizon", "262144"]);
    assert_ne!(other.stdout, first.stdout);
}

#[test]
fn density_set_defaults_to_csv() {
    let out = densitylab(&["density-set", BLOCKS, "--num", "3", "--horizon", "262144"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("ld,ud"));
    assert_eq!(lines.count(), 3);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join("densitylab-cli-test-out.json");
    let out = densitylab(&["exact", "ap(1,4)", "--out", path.to_str().unwrap()]);
    assert!(out.status.success() && out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["density"], "1/4");
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| densitylab(args).status.code();
    assert_eq!(code(&["density", "ap(5,3)"]), Some(2));
    assert_eq!(code(&["density", "union(nat nat)"]), Some(2));
    assert_eq!(code(&["density", "nat", "--bogus"]), Some(2));
    assert_eq!(code(&["gap", "nat", "--format", "csv"]), Some(2));
    assert_eq!(code(&["construct", "intermediate", "ap(0,2)", "ap(0,2)"]), Some(3));
    assert_eq!(code(&["witness", BLOCKS, "--target", "1.5", "--horizon", "1048576"]), Some(3));

    let spec = r#"{"atoms":[{"w":1.0,"kind":"alpha","param":0.0,
        "filter":{"kind":"explicit","indices":[2,4,8,16,32,64,128,256,512,1024,2048,4096,8192,16384,32768,65536]}}]}"#;
    let path = std::env::temp_dir().join("densitylab-cli-test-nonconvergent.json");
    std::fs::write(&path, spec).unwrap();
    assert_eq!(code(&["measure", BLOCKS, "--spec", path.to_str().unwrap(), "--horizon", "65536"]), Some(4));

    assert_eq!(code(&["verify", "--only", "set.count"]), Some(0));
}
