use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_orbit-ltl");

fn golden() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(BIN).args(args).output().expect("binary runs");
    (
        out.status.code().expect("exit code"),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn validator() -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/report.v1.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

fn assert_valid(v: &jsonschema::Validator, doc: &Value, what: &str) {
    let errors: Vec<String> = v.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{}: {:#?}", what, errors);
}

/// Compares with `<name>.json`; `UPDATE_GOLDEN=1` rewrites it.
fn compare_golden(path: &Path, actual: &str) {
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(path, actual).unwrap();
        return;
    }
    let want = std::fs::read_to_string(path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(actual, want, "{} differs", path.display());
}

#[test]
fn golden_check_corpus() {
    let expected: BTreeMap<String, i32> =
        toml::from_str(&std::fs::read_to_string(golden().join("expected.toml")).unwrap()).unwrap();
    assert!(expected.len() >= 10);
    let schema = validator();
    for (name, code) in &expected {
        let file = golden().join(format!("{}.toml", name));
        let (got, stdout, stderr) = run(&["check", file.to_str().unwrap(), "--json"]);
        assert_eq!(got, *code, "{}: {}", name, stderr);
        if *code >= 64 {
            assert!(stdout.is_empty() && stderr.starts_with("error:"), "{}", name);
            continue;
        }
        let doc: Value = serde_json::from_str(&stdout).unwrap();
        assert_valid(&schema, &doc, name);
        let verdict = ["true", "false", "inconclusive"][*code as usize];
        assert_eq!(doc["verdict"], verdict, "{}", name);
        compare_golden(&golden().join(format!("{}.json", name)), &stdout);
        // deterministic output
        let (_, again, _) = run(&["check", file.to_str().unwrap(), "--json"]);
        assert_eq!(stdout, again, "{}", name);
    }
}

#[test]
fn every_instance_has_an_expectation() {
    let expected: BTreeMap<String, i32> =
        toml::from_str(&std::fs::read_to_string(golden().join("expected.toml")).unwrap()).unwrap();
    for e in std::fs::read_dir(golden()).unwrap() {
        let p = e.unwrap().path();
        if p.extension().is_some_and(|x| x == "toml") && p.file_stem().unwrap() != "expected" {
            let stem = p.file_stem().unwrap().to_str().unwrap().to_string();
            assert!(expected.contains_key(&stem), "{} has no expected exit code", stem);
        }
    }
}

#[test]
fn classify_reports() {
    let schema = validator();
    let cases = [
        ("quarter_rotation", "root-of-unity", Some(4)),
        ("rotation_scale", "irrational-rotation", None),
        ("real_diagonal", "three-real", None),
    ];
    for (name, regime, order) in cases {
        let file = golden().join(format!("classify/{}.toml", name));
        let (code, stdout, _) = run(&["classify", file.to_str().unwrap(), "--json"]);
        assert_eq!(code, 0);
        let doc: Value = serde_json::from_str(&stdout).unwrap();
        assert_valid(&schema, &doc, name);
        assert_eq!(doc["regime"], regime);
        assert_eq!(doc["gamma_order"].as_u64(), order);
        compare_golden(&golden().join(format!("classify/{}.json", name)), &stdout);
    }
    let file = golden().join("classify/real_diagonal.toml");
    let doc: Value = serde_json::from_str(&run(&["classify", file.to_str().unwrap(), "--json"]).1).unwrap();
    assert_eq!(doc["jordan_case"], 1);
    let file = golden().join("classify/rotation_scale.toml");
    let doc: Value = serde_json::from_str(&run(&["classify", file.to_str().unwrap(), "--json"]).1).unwrap();
    let g = &doc["gamma"]["approx"];
    assert!((g[0].as_f64().unwrap() - 0.6).abs() < 1e-12 && (g[1].as_f64().unwrap() - 0.8).abs() < 1e-12);
    let (code, _, _) = run(&["classify", file.to_str().unwrap(), "--precision-bits", "8"]);
    assert_eq!(code, 64);
}

#[test]
fn orbit_reports() {
    let schema = validator();
    let file = golden().join("parity_globally.toml");
    let (code, stdout, _) = run(&["orbit", file.to_str().unwrap(), "--steps", "3", "--json"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&stdout).unwrap();
    assert_valid(&schema, &doc, "orbit");
    let x1: Vec<&str> = doc["rows"].as_array().unwrap().iter().map(|r| r["point"][0].as_str().unwrap()).collect();
    assert_eq!(x1, ["1", "-2", "4", "-8"]);
    let file = golden().join("identity_globally.toml");
    let (_, text, _) = run(&["orbit", file.to_str().unwrap(), "--steps", "2"]);
    let rows: Vec<&str> = text.lines().map(|l| l.split_once(": ").unwrap().1).collect();
    assert!(rows.iter().all(|r| *r == rows[0]));
    let (_, text, _) = run(&["orbit", file.to_str().unwrap(), "--steps", "0"]);
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("0: (1, 1, 1)"));
}

#[test]
fn flags_override_instance_config() {
    let file = golden().join("rotation_late_witness.toml");
    let (code, stdout, _) = run(&["check", file.to_str().unwrap(), "--horizon", "200", "--json"]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(doc["config"]["horizon"], 200);
    let (code, _, _) = run(&["check", file.to_str().unwrap(), "--horizon", "0"]);
    assert_eq!(code, 64);
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["check"]).0, 64);
    assert_eq!(run(&["frobnicate"]).0, 64);
    assert_eq!(run(&["check", "/nonexistent/instance.toml"]).0, 66);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn schema_rejects_malformed_reports() {
    let schema = validator();
    let good: Value = serde_json::from_str(&std::fs::read_to_string(golden().join("parity_globally.json")).unwrap()).unwrap();
    assert!(schema.is_valid(&good));
    let mut bad = good.clone();
    bad["verdict"] = "maybe".into();
    assert!(!schema.is_valid(&bad));
    let mut bad = good.clone();
    bad["schema_version"] = 2.into();
    assert!(!schema.is_valid(&bad));
    let mut bad = good;
    bad.as_object_mut().unwrap().remove("rigor");
    assert!(!schema.is_valid(&bad));
}
