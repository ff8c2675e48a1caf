//! Every JSON document the commands write validates against the schema
//! shipped in `schema/`.

use std::fs;
use std::path::Path;

use serde_json::Value;
use tempfile::tempdir;
use zmcrot::config::{Format, RunConfig};
use zmcrot::{cmd_export, cmd_gallery, cmd_integrate, cmd_verify};

fn schema(name: &str) -> jsonschema::Validator {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema").join(name);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    jsonschema::validator_for(&doc).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn assert_valid(validator: &jsonschema::Validator, doc: &Value) {
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{errors:#?}");
}

fn read(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verification_reports_validate() {
    let v = schema("verification-report.schema.json");
    for example in ["ex3.10", "M1-hyperbola", "ex3.6"] {
        let cfg = RunConfig { example: Some(example.into()), samples: Some(20), ..RunConfig::default() };
        let mut out = Vec::new();
        cmd_verify(&cfg, &mut out).unwrap();
        assert_valid(&v, &serde_json::from_slice(&out).unwrap());
    }
    // failing reports carry the same shape
    let cfg: RunConfig =
        serde_json::from_str(r#"{"kind": "M1", "b": 2, "family": "quadratic", "l0": 1, "mu0": 2, "samples": 20}"#)
            .unwrap();
    let mut out = Vec::new();
    assert!(cmd_verify(&cfg, &mut out).is_err());
    assert_valid(&v, &serde_json::from_slice(&out).unwrap());
}

#[test]
fn gallery_documents_validate() {
    let dir = tempdir().unwrap();
    let cfg = RunConfig { out: Some(dir.path().to_path_buf()), samples: Some(20), ..RunConfig::default() };
    cmd_gallery(&cfg, &mut Vec::new()).unwrap();
    assert_valid(&schema("gallery-summary.schema.json"), &read(&dir.path().join("summary.json")));
    let report = schema("verification-report.schema.json");
    assert_valid(&report, &read(&dir.path().join("ex3.12.json")));
    assert_valid(&report, &read(&dir.path().join("vranceanu_1_0.json")));
}

#[test]
fn integrate_reports_validate() {
    let dir = tempdir().unwrap();
    let cfg = RunConfig { example: Some("ex3.12".into()), out: Some(dir.path().to_path_buf()), ..RunConfig::default() };
    cmd_integrate(&cfg, &mut Vec::new()).unwrap();
    assert_valid(&schema("integrate-report.schema.json"), &read(&dir.path().join("integrate.json")));
}

#[test]
fn json_exports_validate() {
    let cfg = RunConfig {
        example: Some("ex3.11".into()),
        format: Some(Format::Json),
        samples: Some(5),
        ..RunConfig::default()
    };
    let mut out = Vec::new();
    cmd_export(&cfg, &mut out).unwrap();
    let doc: Value = serde_json::from_slice(&out).unwrap();
    assert_valid(&schema("export.schema.json"), &doc);
    assert_eq!(doc["points"].as_array().unwrap().len(), 25);
}

#[test]
fn config_files_validate_and_load() {
    let v = schema("run-config.schema.json");
    let text = r#"{
        "kind": "M2", "b": 0.5, "family": "arcsine", "a0": -0.75, "c0": 0.1,
        "branch": -1, "eps-star": "-", "domain": "0.5,0.7", "v-domain": [0, 1],
        "samples": 8, "margin": 0.02, "tol": 1e-8, "format": "obj", "drop-coord": "x4"
    }"#;
    let doc: Value = serde_json::from_str(text).unwrap();
    assert_valid(&v, &doc);
    let cfg: RunConfig = serde_json::from_str(text).unwrap();
    cfg.validate().unwrap();
    assert!(!v.is_valid(&serde_json::json!({"sample": 3})));
    assert!(!v.is_valid(&serde_json::json!({"samples": 1})));
}
