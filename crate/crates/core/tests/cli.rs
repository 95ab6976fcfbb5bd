use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use conilay::experiments::*;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("conilay-cli-{}-{name}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(experiment: &str, config: &str, dir: &Path, out: &str) -> Output {
    let cfg = dir.join(format!("{out}.json"));
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_conilay"))
        .args([experiment, "--config", cfg.to_str().unwrap(), "--out", dir.join(out).to_str().unwrap(), "--workers", "2"])
        .output()
        .unwrap()
}

const SMALL_POTENTIAL: &str = r#"{"potential": {"points": 50, "log_points": 10}}"#;

#[test]
fn empty_config_is_valid() {
    let c = ExperimentConfig::from_json("{}").unwrap();
    assert_eq!(c, ExperimentConfig::default());
    assert!(ExperimentConfig::from_json(r#"{"experiment": "nope"}"#).is_err());
    assert_eq!("sweep-theta".parse::<Experiment>().unwrap(), Experiment::SweepTheta);
}

#[test]
fn potential_runs_are_byte_identical() {
    let dir = scratch("determinism");
    let a = run("potential", SMALL_POTENTIAL, &dir, "a");
    let b = run("potential", SMALL_POTENTIAL, &dir, "b");
    assert!(a.status.success() && b.status.success(), "{}", String::from_utf8_lossy(&a.stderr));
    let fa = std::fs::read(dir.join("a/potential.csv")).unwrap();
    let fb = std::fs::read(dir.join("b/potential.csv")).unwrap();
    assert_eq!(fa, fb);
    let text = String::from_utf8(fa).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# conilay potential"));
    assert!(lines.next().unwrap().starts_with("# config_sha256 "));
    let modules = lines.next().unwrap();
    assert!(modules.starts_with("# modules ") && modules.contains("potential1d/1"));
    assert!(text.lines().any(|l| l == "x,v,residual"));
    assert_eq!(read_rows(&text).len(), 60);
}

#[test]
fn config_for_another_experiment_is_rejected() {
    let dir = scratch("mismatch");
    let o = run("potential", r#"{"experiment": "counting"}"#, &dir, "m");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("counting"));
    let o = run("no_such_thing", "{}", &dir, "n");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn nearly_flat_aperture_is_rejected() {
    let dir = scratch("flat");
    let o = run("sweep_theta", r#"{"sweep_theta": {"theta_deg": [89.9], "k": 1}}"#, &dir, "s");
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("89.9"));
    let o = run("modes", r#"{"modes": {"theta_deg": 89.9, "k": 1}}"#, &dir, "m");
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn failing_verification_exits_with_two() {
    let dir = scratch("verify");
    // criterion 1 demands at least 40k dofs; this mesh has far fewer
    let cfg = r#"{"verify": {"only": [8, 1], "eigenvalues": {"truncation": 10.0,
        "disc": {"mesh": {"h_near": 0.5, "transverse_cells": 3, "ratio": 1.3}}}}}"#;
    let o = run("verify", cfg, &dir, "v");
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.join("v/verify.json")).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
    assert_eq!(report["criteria"][0]["id"], 8);
    assert_eq!(report["criteria"][0]["passed"], true);
    assert!(report["specfun_digest"]["zeros_checked"].as_u64().unwrap() >= 12);
}

#[test]
fn modes_round_trip() {
    let dir = scratch("modes");
    let o = run("modes", "{}", &dir, "m");
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let cfg = ModesConfig::default();
    let solved = compute_modes(&cfg).unwrap();
    let manifest = std::fs::read_to_string(dir.join("m/manifest.csv")).unwrap();
    assert_eq!(read_rows(&manifest).len(), 6);
    let theta = cfg.theta_deg.to_radians();
    for n in 1..=6 {
        let psi = read_mode(&dir.join("m").join(mode_file_name(n))).unwrap();
        assert_eq!(psi.len(), solved.assembled.dofs.len());
        assert!((mass_norm(&solved, &psi) - 1.0).abs() < 1e-8, "mode {n}");
    }
    let psi = read_mode(&dir.join("m/mode_1.csv")).unwrap();
    let peak = psi.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let sign = psi.iter().max_by(|a, b| a.abs().total_cmp(&b.abs())).unwrap().signum();
    assert!(psi.iter().all(|v| v * sign >= -1e-8 * peak), "ground state changes sign");

    // mass on either side of z = 0, with the FE mass matrix
    let coords = &solved.assembled.dofs.coords;
    let side = |left: bool| {
        let x: Vec<f64> = solved
            .reduced
            .free
            .iter()
            .map(|&i| if (physical_point(coords[i], theta)[0] < 0.0) == left { psi[i] } else { 0.0 })
            .collect();
        solved.reduced.mass.inner(&x, &x)
    };
    assert!(side(true) > side(false), "{} vs {}", side(true), side(false));
}
