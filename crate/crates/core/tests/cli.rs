//! Black-box tests of the susydelta binary: schemas, determinism, exit
//! codes.

use std::fs;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_susydelta"))
}

fn write_config(name: &str, body: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("susydelta-test-{name}.json"));
    fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

#[test]
fn bound_reports_reference_energies() {
    let cfg = write_config("de", r#"{"kind": "double_equal", "alpha": 2.0, "a": 7.0}"#);
    let out = run(&["bound", "--config", cfg.to_str().unwrap(), "--sector", "0"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let energies: Vec<f64> = doc["states"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["energy"].as_f64().unwrap())
        .filter(|&e| e > 1e-9)
        .collect();
    for want in [0.0469, 0.187, 0.421] {
        assert!(
            energies.iter().any(|e| (e - want).abs() < 2e-3),
            "missing {want} in {energies:?}"
        );
    }
    // The zero mode shows up as a singlet in the combined listing.
    let out = run(&["bound", "--config", cfg.to_str().unwrap(), "--sector", "both"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["singlets"].as_array().unwrap().len(), 1);
    assert!(!doc["pairs"].as_array().unwrap().is_empty());
}

#[test]
fn scatter_csv_schema_and_determinism() {
    let cfg = write_config("du", r#"{"kind": "double_unequal", "alpha": 2.0, "beta": 4.0, "a": 7.0}"#);
    let args = [
        "scatter",
        "--config",
        cfg.to_str().unwrap(),
        "--e-min",
        "17",
        "--e-max",
        "40",
        "--n",
        "24",
    ];
    let out = run(&args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let header = text.lines().next().unwrap();
    assert_eq!(
        header,
        "E,k_minus_re,k_minus_im,k_plus_re,k_plus_im,sigma_r_re,sigma_r_im,rho_r_re,rho_r_im,\
         sigma_l_re,sigma_l_im,rho_l_re,rho_l_im,flux_residual"
    );
    assert_eq!(text.lines().count(), 25);
    // Repeat runs are byte-identical.
    let again = run(&args);
    assert_eq!(text.as_bytes(), again.stdout.as_slice());
}

#[test]
fn bands_json_schema() {
    let out = run(&["bands", "--alpha", "3", "--a", "1", "--k-max", "14"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let bands = doc["propagating"].as_array().unwrap();
    assert_eq!(bands.len(), 4);
    for b in bands {
        assert!(b["k_lo"].as_f64().unwrap() < b["k_hi"].as_f64().unwrap());
        assert!(b["E_lo"].as_f64().unwrap() < b["E_hi"].as_f64().unwrap());
    }
    let np = &doc["non_propagating"];
    assert!((np["kappa_max"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert!((np["a_critical"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-15);
    assert!(np["exists_upper_edge"].as_bool().unwrap());
}

#[test]
fn witten_json_schema() {
    let cfg = write_config("wde", r#"{"kind": "double_equal", "alpha": 2.0, "a": 7.0}"#);
    let out = run(&[
        "witten",
        "--config",
        cfg.to_str().unwrap(),
        "--t-list",
        "0.1,0.01,0.001,0.0001",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["z0"].as_u64().unwrap(), 0);
    assert_eq!(doc["z1"].as_u64().unwrap(), 1);
    assert_eq!(doc["continuum"].as_array().unwrap().len(), 4);
    assert!(doc["index"].as_f64().unwrap().abs() < 1e-3);
    assert!(!doc["susy_broken"].as_bool().unwrap());
}

#[test]
fn out_flag_writes_file() {
    let cfg = write_config("zm", r#"{"kind": "delta_step", "mu": -2.0, "g": 0.0}"#);
    let path = std::env::temp_dir().join("susydelta-test-zm-out.json");
    let _ = fs::remove_file(&path);
    let out = run(&[
        "zero-mode",
        "--config",
        cfg.to_str().unwrap(),
        "--sector",
        "0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert!(doc["normalizable"].as_bool().unwrap());
}

#[test]
fn exit_codes() {
    // Unknown kind tag → configuration error.
    let bad = write_config("bad", r#"{"kind": "pentuple", "alpha": 1.0}"#);
    let out = run(&["bound", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // Missing field.
    let bad = write_config("bad2", r#"{"kind": "double_equal", "alpha": 2.0}"#);
    let out = run(&["bound", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // Invalid value.
    let bad = write_config("bad3", r#"{"kind": "double_equal", "alpha": 2.0, "a": -1.0}"#);
    let out = run(&["bound", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // Nonexistent file.
    let out = run(&["bound", "--config", "/nonexistent/cfg.json"]);
    assert_eq!(out.status.code(), Some(2));
    // Usage error.
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    // Bad sector value.
    let cfg = write_config("de2", r#"{"kind": "double_equal", "alpha": 2.0, "a": 7.0}"#);
    let out = run(&["bound", "--config", cfg.to_str().unwrap(), "--sector", "3"]);
    assert_eq!(out.status.code(), Some(2));
    // Help exits cleanly.
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn format_flag() {
    let cfg = write_config("fmt", r#"{"kind": "double_equal", "alpha": 2.0, "a": 7.0}"#);
    let out = run(&[
        "scatter",
        "--config",
        cfg.to_str().unwrap(),
        "--e-min",
        "5",
        "--e-max",
        "8",
        "--n",
        "3",
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc.as_array().unwrap().len(), 3);
    // Tree-shaped reports have no csv rendering.
    let out = run(&["bound", "--config", cfg.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_sweep_passes() {
    let out = run(&["verify", "--seed", "42", "--cases", "15"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["pass"].as_bool().unwrap());
}
