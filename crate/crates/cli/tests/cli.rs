//! End-to-end runs of the `zmcrot` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::tempdir;

fn zmcrot(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zmcrot"))
        .args(args)
        .current_dir(dir)
        .env_remove("ZMCROT_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn verify_passes_on_a_maximal_example() {
    let dir = tempdir().unwrap();
    let o = zmcrot(dir.path(), &["verify", "--example", "ex3.4", "--out", "r.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&dir.path().join("r.json"));
    assert_eq!(r["verdict"], "pass");
    assert!((r["first_integral_mean"].as_f64().unwrap() - 0.75).abs() < 1e-7);
}

#[test]
fn verify_prints_to_stdout_without_out() {
    let dir = tempdir().unwrap();
    let o = zmcrot(dir.path(), &["verify", "--example", "vranceanu", "--a", "1", "--c", "0"]);
    assert_eq!(code(&o), 0);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["surface_id"], "vranceanu(1,0)");
    assert!(r["max_zmc_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn verify_fails_on_the_circle_with_b_two() {
    let dir = tempdir().unwrap();
    let args = ["verify", "--kind", "M1", "--b", "2", "--family", "quadratic", "--l0", "1", "--mu0", "2"];
    let o = zmcrot(dir.path(), &args);
    assert_eq!(code(&o), 1);
    let r: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["verdict"], "fail");
}

#[test]
fn configuration_errors_exit_two() {
    let dir = tempdir().unwrap();
    assert_eq!(code(&zmcrot(dir.path(), &["verify", "--example", "ex9.9"])), 2);
    assert_eq!(code(&zmcrot(dir.path(), &["verify", "--kind", "M1", "--family", "arcsine"])), 2);
    assert_eq!(code(&zmcrot(dir.path(), &["verify", "--example", "ex3.4", "--samples", "1"])), 2);
    assert_eq!(code(&zmcrot(dir.path(), &["verify", "--config", "missing.json"])), 2);
    fs::write(dir.path().join("bad.json"), r#"{"exampel": "ex3.4"}"#).unwrap();
    let o = zmcrot(dir.path(), &["verify", "--config", "bad.json"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("exampel"));
}

#[test]
fn flags_override_the_config_file() {
    let dir = tempdir().unwrap();
    fs::write(dir.path().join("c.json"), r#"{"example": "ex3.5", "samples": 20, "out": "file.json"}"#).unwrap();
    let o = zmcrot(dir.path(), &["verify", "--config", "c.json", "--out", "flag.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!dir.path().join("file.json").exists());
    let r = json(&dir.path().join("flag.json"));
    assert_eq!(r["surface_id"], "ex3.5");
    assert_eq!(r["causal"][0]["samples"], 20);
}

#[test]
fn seed_variable_is_validated_and_used() {
    let dir = tempdir().unwrap();
    let run = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_zmcrot"))
            .args(["verify", "--example", "ex3.10"])
            .current_dir(dir.path())
            .env("ZMCROT_SEED", seed)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("seven")), 2);
    let (a, b, c) = (run("7"), run("7"), run("8"));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn export_writes_a_full_csv_grid() {
    let dir = tempdir().unwrap();
    let o = zmcrot(dir.path(), &["export", "--example", "ex3.5", "--samples", "32", "--out", "g.csv"]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(dir.path().join("g.csv")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "u,v,x1,x2,x3,x4");
    assert_eq!(lines.len(), 1 + 32 * 32);
}

#[test]
fn export_refuses_grids_on_the_singular_locus() {
    let dir = tempdir().unwrap();
    let args = ["export", "--example", "M1-circle", "--domain", "0,1.5707963267948966", "--samples", "33"];
    let o = zmcrot(dir.path(), &args);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("u[16] = 0.7853981633974483"), "{err}");
}

#[test]
fn export_is_byte_identical_across_runs() {
    let dir = tempdir().unwrap();
    for format in ["csv", "obj", "json"] {
        let args = |out: &'static str| {
            ["export", "--example", "ex3.12", "--format", format, "--drop-coord", "x2", "--out", out]
        };
        assert_eq!(code(&zmcrot(dir.path(), &args("a.out"))), 0);
        assert_eq!(code(&zmcrot(dir.path(), &args("b.out"))), 0);
        let a = fs::read(dir.path().join("a.out")).unwrap();
        let b = fs::read(dir.path().join("b.out")).unwrap();
        assert!(!a.is_empty());
        assert_eq!(a, b, "{format}");
    }
}

#[test]
fn integrate_reports_membership_on_a_family_curve() {
    let dir = tempdir().unwrap();
    let o = zmcrot(dir.path(), &["integrate", "--example", "ex3.5", "--out", "run"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&dir.path().join("run/integrate.json"));
    assert!(r["membership_residual"].as_f64().unwrap() < 1e-5);
    let csv = fs::read_to_string(dir.path().join("run/curve.csv")).unwrap();
    assert!(csv.starts_with("t,p,s,dp,ds,"));
    assert_eq!(csv.lines().count(), r["states"].as_u64().unwrap() as usize + 1);
}

#[test]
fn integrate_surfaces_construction_and_start_failures() {
    let dir = tempdir().unwrap();
    // ε* a0 / (1 - b^2) < 0: the arcsine family has no real member
    let args = ["integrate", "--kind", "M1", "--family", "arcsine", "--b", "0.5", "--a0", "-0.75", "--eps-star", "+"];
    let o = zmcrot(dir.path(), &args);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("no solution"));
    let o = zmcrot(dir.path(), &["integrate", "--example", "ex3.6", "--u0", "0.5"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("singular start"));
}

#[test]
fn gallery_writes_reports_meshes_and_summary() {
    let dir = tempdir().unwrap();
    let o = zmcrot(dir.path(), &["gallery", "--out", "g"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let g = dir.path().join("g");
    for stem in ["ex3.4", "ex3.10", "vranceanu_1_0", "M2-hyperbola"] {
        assert!(g.join(format!("{stem}.json")).exists(), "{stem}");
        assert!(g.join(format!("{stem}.obj")).exists(), "{stem}");
    }
    let table = String::from_utf8_lossy(&o.stdout);
    assert!(table.lines().any(|l| l.starts_with("| ex3.5 |") && l.contains("timelike") && l.contains("-3.000000")));
    assert_eq!(table.lines().filter(|l| l.starts_with("| ex3.10 |")).count(), 2);
    assert!(!table.contains("MISMATCH"));
}
