//! Exit-code contract and configuration handling of the `martail` binary:
//! 0 success/all-pass, 1 usage or config error, 2 verification failure.

use std::path::Path;
use std::process::{Command, Output};

fn martail(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_martail")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn bound_prints_reference_value() {
    let out = martail(&["bound", "--kind", "b1", "--x", "1", "--y", "1", "--v", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let value: f64 = text.trim().parse().unwrap();
    assert!((value - std::f64::consts::E / 4.0).abs() < 1e-12);
}

#[test]
fn bound_domain_error_exits_one_with_diagnostic() {
    let out = martail(&["bound", "--kind", "b1", "--x", "-1", "--y", "1", "--v", "1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("domain error"), "{err}");
}

#[test]
fn unknown_kind_and_missing_flags_exit_one() {
    assert_eq!(martail(&["bound", "--kind", "b9", "--x", "1"]).status.code(), Some(1));
    assert_eq!(martail(&["bound", "--kind", "b1", "--x", "1"]).status.code(), Some(1));
    assert_eq!(martail(&["nonsense"]).status.code(), Some(1));
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(martail(&["--help"]).status.code(), Some(0));
    assert_eq!(martail(&["--version"]).status.code(), Some(0));
}

#[test]
fn verify_config_cells_roundtrip_and_falsify() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "verify.json",
        r#"{
            "command": "verify",
            "seed": 11,
            "trials": 20000,
            "cells": [
                {"model_id": "rad", "model": {"kind": "rademacher"}, "mode": "some_k",
                 "char_kind": "g", "y_or_beta": 1.0, "x": 3.0, "budget": 20.0, "n": 20,
                 "bounds": ["b1", "b2"]}
            ]
        }"#,
    );
    let csv_path = dir.path().join("out.csv");
    let out = martail(&["verify", "--config", &config, "--output", csv_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv_path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "model_id,event_mode,char_kind,y_or_beta,x,budget,n,trials,hits,p_hat,upper,bound_name,bound_value,margin,status"
    );
    assert_eq!(lines.count(), 2);
    assert!(text.contains("PASS"));

    let out = martail(&["verify", "--config", &config, "--falsify-bounds"]);
    assert_eq!(out.status.code(), Some(2), "falsified bounds must fail");
}

#[test]
fn config_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    // Unknown key.
    let bad = write_config(dir.path(), "bad.json", r#"{"command": "lemmas", "bogus": 1}"#);
    assert_eq!(martail(&["lemmas", "--config", &bad]).status.code(), Some(1));

    // Command mismatch between config and subcommand.
    let lemmas = write_config(dir.path(), "lemmas.json", r#"{"command": "lemmas"}"#);
    assert_eq!(martail(&["verify", "--config", &lemmas]).status.code(), Some(1));

    // Model violating its invariants.
    let invalid_model = write_config(
        dir.path(),
        "model.json",
        r#"{"command": "verify", "trials": 100, "cells": [
            {"model": {"kind": "two_point_sym", "level": 1.0, "p": 1.5}, "mode": "some_k",
             "char_kind": "m", "y_or_beta": 1.0, "x": 1.0, "budget": 5.0, "n": 5, "bounds": ["b0"]}
        ]}"#,
    );
    assert_eq!(martail(&["verify", "--config", &invalid_model]).status.code(), Some(1));

    // Bound paired with a model violating its hypotheses.
    let mismatched = write_config(
        dir.path(),
        "mismatch.json",
        r#"{"command": "verify", "trials": 100, "cells": [
            {"model": {"kind": "finite_support", "atoms": [[-2.0, 0.3333333333333333], [0.5, 0.3333333333333333], [3.0, 0.3333333333333334]]},
             "mode": "some_k", "char_kind": "m", "y_or_beta": 1.0, "x": 1.0, "budget": 20.0,
             "n": 5, "bounds": ["b0"]}
        ]}"#,
    );
    let out = martail(&["verify", "--config", &mismatched]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stderr).unwrap().contains("symmetric"));
}

#[test]
fn flag_overrides_take_precedence_over_config_scalars() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "sim.json",
        r#"{
            "command": "simulate",
            "seed": 1, "trials": 500,
            "cells": [
                {"model": {"kind": "rademacher"}, "mode": "self_norm",
                 "y_or_beta": 2.0, "x": 1.0, "n": 16}
            ]
        }"#,
    );
    let out = martail(&["simulate", "--config", &config, "--trials", "1234"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(",1234,"), "trials override missing: {text}");
    // Self-normalized rows blank the budget column and tag the statistic.
    assert!(text.contains("self_norm,v_norm,"));
}

#[test]
fn run_dispatches_on_config_command() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "tight.json",
        r#"{"command": "tightness", "n_list": [10, 100], "resolution": 64}"#,
    );
    let out = martail(&["run", "--config", &config]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("x,y,v,n,p,lambda,chernoff_inf,b0,gap"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn lemmas_summary_and_exit_zero() {
    let out = martail(&["lemmas", "--models", "25", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("0 violations"), "{text}");
}

#[test]
fn selfnorm_accepts_custom_experiments() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "sn.json",
        r#"{
            "command": "selfnorm",
            "trials": 2000, "seed": 5,
            "experiments": [
                {"model_id": "tp", "model": {"kind": "two_point_sym", "level": 1.0, "p": 0.8},
                 "beta": 1.5, "x_grid": [0.5, 1.0], "n": 32}
            ]
        }"#,
    );
    let out = martail(&["selfnorm", "--config", &config]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 4); // header + 2 x-values × 2 constants
}

#[test]
fn curve_marks_the_minimizer() {
    let out = martail(&["curve", "--variant", "bennett", "--x", "1", "--y", "1", "--v", "1", "--points", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let marked: Vec<&str> = text.lines().filter(|l| l.ends_with(",1")).collect();
    assert_eq!(marked.len(), 1);
    // The marked λ is log 2 and the exponent there is log(e/4).
    let fields: Vec<&str> = marked[0].split(',').collect();
    let lambda: f64 = fields[4].parse().unwrap();
    let exponent: f64 = fields[5].parse().unwrap();
    assert!((lambda - 2f64.ln()).abs() < 1e-12);
    assert!((exponent - (std::f64::consts::E / 4.0).ln()).abs() < 1e-12);
}
