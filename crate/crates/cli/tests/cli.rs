use std::path::Path;
use std::process::{Command as Proc, Output};

use qthermo_cli::commands::{
    CALIBRATION_COLUMNS, DISCRIMINATE_COLUMNS, FREE_ENERGY_COLUMNS, SIMULATE_COLUMNS,
};
use qthermo_cli::{run, Command, ExperimentConfig, EXIT_CONFIG, EXIT_RUNTIME};
use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_qthermo");

fn qthermo(args: &[&str], config: Option<&Path>) -> Output {
    let mut cmd = Proc::new(BIN);
    cmd.args(args);
    if let Some(path) = config {
        cmd.arg("--config").arg(path);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    std::fs::write(&path, text).unwrap();
    path
}

/// Parses CSV output and checks it against the documented schema.
fn parse_csv(text: &str, columns: &[&str]) -> Vec<Vec<String>> {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(str::to_owned).collect();
    assert_eq!(header, columns);
    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.unwrap();
        assert_eq!(rec.len(), columns.len());
        rows.push(rec.iter().map(str::to_owned).collect::<Vec<_>>());
    }
    rows
}

fn f(cell: &str) -> f64 {
    cell.parse()
        .unwrap_or_else(|_| panic!("not a number: {cell:?}"))
}

fn csv_of(cmd: Command, cfg: &ExperimentConfig) -> String {
    run(cmd, cfg).unwrap().table.to_csv_string().unwrap()
}

#[test]
fn every_command_matches_its_schema() {
    let cfg = ExperimentConfig {
        tau_stop: 0.2,
        tau_step: 0.05,
        mc_samples: 4,
        ..Default::default()
    };
    for (cmd, cols, text_cols) in [
        (Command::Discriminate, DISCRIMINATE_COLUMNS, &["kind"][..]),
        (Command::FreeEnergy, FREE_ENERGY_COLUMNS, &["kind"][..]),
        (Command::Calibration, CALIBRATION_COLUMNS, &["table"][..]),
        (
            Command::SimulateExperiment,
            SIMULATE_COLUMNS,
            &["status", "error"][..],
        ),
    ] {
        let rows = parse_csv(&csv_of(cmd, &cfg), cols);
        assert!(!rows.is_empty());
        for row in rows {
            for (name, cell) in cols.iter().zip(&row) {
                if text_cols.contains(name) || cell.is_empty() {
                    continue;
                }
                if *name == "seed" {
                    cell.parse::<u64>().unwrap();
                } else {
                    // 17 significant digits in scientific notation.
                    let mantissa = cell.trim_start_matches('-').split('e').next().unwrap();
                    assert_eq!(mantissa.len(), 18, "{name}={cell}");
                    assert!(f(cell).is_finite());
                }
            }
        }
    }
}

#[test]
fn discriminate_rows_and_optima() {
    let rows = parse_csv(
        &csv_of(Command::Discriminate, &ExperimentConfig::default()),
        DISCRIMINATE_COLUMNS,
    );
    let curves = rows.iter().filter(|r| r[0] == "curve").count();
    assert_eq!(curves, 3 * 101);
    let optima: Vec<_> = rows.iter().filter(|r| r[0] == "optimum").collect();
    assert_eq!(optima.len(), 3);
    for o in optima {
        let tau = f(&o[2]);
        assert!(tau > 0.0 && tau < 1.0, "interior maximum");
        assert!(f(&o[5]) > 1.0 / 12.0 - 1.0 / 20.0);
    }
    // Degenerate τ = 0 has no observable, hence empty expectation cells.
    assert_eq!(rows[0][3], "");
    assert_eq!(f(&rows[0][5]), 0.0);
}

#[test]
fn single_point_grid_has_zero_separation() {
    let cfg = ExperimentConfig {
        tau_stop: 0.0,
        ..Default::default()
    };
    let rows = parse_csv(&csv_of(Command::Discriminate, &cfg), DISCRIMINATE_COLUMNS);
    for r in rows.iter().filter(|r| r[0] == "curve") {
        assert_eq!(f(&r[5]), 0.0);
    }
}

#[test]
fn monte_carlo_never_touches_theory_columns() {
    let base = ExperimentConfig {
        tau_stop: 0.3,
        tau_step: 0.05,
        ..Default::default()
    };
    let with_mc = ExperimentConfig {
        mc_samples: 8,
        master_seed: 3,
        ..base.clone()
    };
    let a = parse_csv(&csv_of(Command::Discriminate, &base), DISCRIMINATE_COLUMNS);
    let b = parse_csv(
        &csv_of(Command::Discriminate, &with_mc),
        DISCRIMINATE_COLUMNS,
    );
    assert_eq!(a.len(), b.len());
    for (ra, rb) in a.iter().zip(&b) {
        assert_eq!(ra[..6], rb[..6]);
        assert!(ra[6..].iter().all(String::is_empty));
    }
    assert!(b.iter().any(|r| !r[6].is_empty()));
}

#[test]
fn free_energy_trajectories() {
    let rows = parse_csv(
        &csv_of(Command::FreeEnergy, &ExperimentConfig::default()),
        FREE_ENERGY_COLUMNS,
    );
    let traj: Vec<_> = rows.iter().filter(|r| r[0] == "trajectory").collect();
    assert_eq!(traj.len(), 6 * 101);
    for r in traj.iter().filter(|r| f(&r[4]) == 0.0) {
        assert_eq!(f(&r[7]), 0.0);
    }
    let asym: Vec<_> = rows.iter().filter(|r| r[0] == "asymptote").collect();
    assert_eq!(asym.len(), 6);
    for pair in asym.chunks(2) {
        assert_eq!(f(&pair[0][8]), 1.0);
        assert!(f(&pair[1][7]).abs() > f(&pair[0][7]).abs());
    }
}

#[test]
fn calibration_tables() {
    let rows = parse_csv(
        &csv_of(Command::Calibration, &ExperimentConfig::default()),
        CALIBRATION_COLUMNS,
    );
    let cold: Vec<_> = rows
        .iter()
        .filter(|r| r[0] == "phase_time" && f(&r[3]) == 5.5)
        .collect();
    let hot: Vec<_> = rows
        .iter()
        .filter(|r| r[0] == "phase_time" && f(&r[3]) == 9.5)
        .collect();
    assert_eq!(cold.len(), 180);
    assert_eq!(f(&cold[0][4]), 0.0);
    assert_eq!(f(&hot[0][4]), 0.0);
    for (c, h) in cold.iter().zip(&hot).skip(1) {
        assert_eq!(c[1], h[1]);
        assert!(f(&h[4]) < f(&c[4]));
    }
    let temps: Vec<f64> = rows
        .iter()
        .filter(|r| r[0] == "weight_temperature")
        .map(|r| f(&r[5]))
        .collect();
    assert_eq!(temps.len(), 499);
    assert!(temps.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(rows.iter().filter(|r| r[0] == "marked").count(), 2);
}

#[test]
fn noiseless_simulation_is_exact() {
    let cfg = ExperimentConfig {
        noise_sigma: 0.0,
        tau_step: 0.1,
        ..Default::default()
    };
    let rows = parse_csv(&csv_of(Command::SimulateExperiment, &cfg), SIMULATE_COLUMNS);
    assert_eq!(rows.len(), 3 * 2 * 11);
    for r in rows {
        assert_eq!(r[0], "ok");
        assert!(f(&r[14]) >= 1.0 - 1e-10);
        for k in 0..3 {
            assert!((f(&r[8 + k]) - f(&r[11 + k])).abs() < 1e-12);
        }
    }
}

#[test]
fn equal_baths_are_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"nbar_cold": 9.5, "nbar_hot": 9.5}"#);
    let out = qthermo(&["discriminate"], Some(&cfg));
    assert_eq!(out.status.code(), Some(EXIT_CONFIG));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nothing to discriminate"));
}

#[test]
fn malformed_inputs_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    for text in ["{", r#"{"tau_step": 0}"#, r#"{"unknown_key": 1}"#] {
        let cfg = write_config(dir.path(), text);
        assert_eq!(
            qthermo(&["calibration"], Some(&cfg)).status.code(),
            Some(EXIT_CONFIG),
            "{text}"
        );
    }
    let missing = dir.path().join("missing.json");
    assert_eq!(
        qthermo(&["calibration"], Some(&missing)).status.code(),
        Some(EXIT_CONFIG)
    );
    assert_eq!(
        qthermo(&["calibration", "--format", "xml"], None)
            .status
            .code(),
        Some(EXIT_CONFIG)
    );
    assert_eq!(qthermo(&["bogus"], None).status.code(), Some(EXIT_CONFIG));
}

#[test]
fn saturated_times_give_error_rows_and_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"tau_start": 2.0, "tau_stop": 2.0, "tau_step": 1.0}"#,
    );
    let out_path = dir.path().join("sim.csv");
    let out = qthermo(
        &["simulate-experiment", "--out", out_path.to_str().unwrap()],
        Some(&cfg),
    );
    assert_eq!(out.status.code(), Some(EXIT_RUNTIME));
    let rows = parse_csv(
        &std::fs::read_to_string(&out_path).unwrap(),
        SIMULATE_COLUMNS,
    );
    assert!(rows.iter().any(|r| r[0] == "ok"));
    let errors: Vec<_> = rows.iter().filter(|r| r[0] == "error").collect();
    assert!(!errors.is_empty());
    for r in errors {
        assert!(r[20].contains("φ = π"));
        assert!(r[14].is_empty());
    }
}

#[test]
fn json_report_echoes_config_and_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"tau_stop": 0.1, "mc_samples": 3, "master_seed": 5}"#,
    );
    let report = dir.path().join("report.json");
    let csv_path = dir.path().join("sim.csv");
    let out = qthermo(
        &[
            "simulate-experiment",
            "--seed",
            "77",
            "--out",
            csv_path.to_str().unwrap(),
            "--report",
            report.to_str().unwrap(),
        ],
        Some(&cfg),
    );
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["command"], "simulate-experiment");
    assert_eq!(v["config"]["master_seed"], 77);
    assert_eq!(v["config"]["nbar_hot"], 9.5);
    assert_eq!(v["seeds"]["master_seed"], 77);
    assert!(v["summary"]["fidelity_mean"].as_f64().unwrap() > 0.99);
    let rows = v["rows"].as_array().unwrap();
    let csv_rows = parse_csv(
        &std::fs::read_to_string(&csv_path).unwrap(),
        SIMULATE_COLUMNS,
    );
    assert_eq!(rows.len(), csv_rows.len());
    // JSON numbers carry the same values as the CSV cells.
    for (j, c) in rows.iter().zip(&csv_rows) {
        assert_eq!(j["rz"].as_f64().unwrap(), f(&c[13]));
        assert_eq!(j["seed"].as_u64().unwrap(), c[7].parse::<u64>().unwrap());
    }
}

#[test]
fn seed_flag_changes_noisy_output_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"tau_stop": 0.1, "tau_step": 0.05}"#);
    let a = qthermo(&["simulate-experiment", "--seed", "1"], Some(&cfg)).stdout;
    let b = qthermo(&["simulate-experiment", "--seed", "2"], Some(&cfg)).stdout;
    assert_ne!(a, b);
    let a = qthermo(&["calibration", "--seed", "1"], Some(&cfg)).stdout;
    let b = qthermo(&["calibration", "--seed", "2"], Some(&cfg)).stdout;
    assert_eq!(a, b);
}
