//! The four experiment commands.
//!
//! Each command turns a validated configuration into a [`Table`] plus a JSON
//! summary. Rows are emitted in the order of their key columns (probe, bath,
//! grid value), whatever the internal execution order.

use qthermo::channel::{
    occupation_from_temperature, params_from_bath, tau_from_phase, temperature_from_occupation,
    temperature_from_p, BathSpec,
};
use qthermo::pipeline::{simulate_measurement, ExperimentSettings};
use qthermo::qubit::{density_from_bloch, DensityMatrix, ProbeState};
use qthermo::thermometry::{
    discrimination_curve, discrimination_window, evolved_pair, free_energy_trajectory,
    optimal_observable, optimal_time, Observable, ASYMPTOTIC_TAU,
};
use qthermo::tomography::{run_samples, stream_seed, MonteCarloSummary};
use serde_json::{json, Value};

use crate::config::{ExperimentConfig, Resolved};
use crate::table::{Cell, Table};
use crate::CliError;

/// Fraction of the peak separation defining the discrimination window.
pub const WINDOW_FRACTION: f64 = 0.8;
/// Grid step used to measure the discrimination window.
pub const WINDOW_STEP: f64 = 1e-4;

pub const DISCRIMINATE_COLUMNS: &[&str] = &[
    "kind",
    "probe_theta",
    "tau",
    "ev_cold",
    "ev_hot",
    "separation",
    "mc_ev_cold_mean",
    "mc_ev_cold_std",
    "mc_ev_hot_mean",
    "mc_ev_hot_std",
];

pub const FREE_ENERGY_COLUMNS: &[&str] = &[
    "kind",
    "probe_theta",
    "nbar",
    "temperature",
    "tau",
    "dU",
    "dS",
    "dF",
    "dF_normalized",
];

pub const CALIBRATION_COLUMNS: &[&str] = &["table", "phi", "p", "nbar", "tau", "temperature"];

pub const SIMULATE_COLUMNS: &[&str] = &[
    "status",
    "probe_theta",
    "nbar",
    "tau",
    "phi",
    "p",
    "gamma",
    "seed",
    "rx_theory",
    "ry_theory",
    "rz_theory",
    "rx",
    "ry",
    "rz",
    "fidelity",
    "ev_g",
    "mc_fidelity_mean",
    "mc_fidelity_std",
    "mc_ev_g_mean",
    "mc_ev_g_std",
    "error",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Discriminate,
    FreeEnergy,
    Calibration,
    SimulateExperiment,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Discriminate => "discriminate",
            Command::FreeEnergy => "free-energy",
            Command::Calibration => "calibration",
            Command::SimulateExperiment => "simulate-experiment",
        }
    }
}

/// Result of one command.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub command: Command,
    pub config: ExperimentConfig,
    pub table: Table,
    pub summary: Value,
    /// How every random stream was seeded.
    pub seeds: Value,
    /// Rows that could not be computed (only `simulate-experiment` has any).
    pub row_errors: usize,
}

impl CommandOutput {
    /// JSON report: config echo, tool version, seeds, summary and rows.
    pub fn report(&self) -> Value {
        json!({
            "tool": "qthermo",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command.name(),
            "config": self.config,
            "seeds": self.seeds,
            "summary": self.summary,
            "columns": self.table.columns,
            "rows": self.table.to_json(),
        })
    }
}

fn runtime(e: qthermo::Error) -> CliError {
    CliError::Runtime(e.to_string())
}

pub fn run(command: Command, config: &ExperimentConfig) -> Result<CommandOutput, CliError> {
    let resolved = config.resolve()?;
    let (table, summary, seeds, row_errors) = match command {
        Command::Discriminate => discriminate(config, &resolved)?,
        Command::FreeEnergy => free_energy(config, &resolved)?,
        Command::Calibration => calibration(config, &resolved)?,
        Command::SimulateExperiment => simulate_experiment(config, &resolved)?,
    };
    Ok(CommandOutput {
        command,
        config: config.clone(),
        table,
        summary,
        seeds,
        row_errors,
    })
}

type Parts = (Table, Value, Value, usize);

fn bath_label(r: &Resolved, bath: &BathSpec) -> &'static str {
    if bath == &r.cold {
        "cold"
    } else {
        "hot"
    }
}

/// Combined states of `n` noisy pipeline runs seeded from `master`.
fn pipeline_samples(
    n: usize,
    master: u64,
    probe: &ProbeState,
    bath: &BathSpec,
    tau: f64,
    r: &Resolved,
) -> Result<Vec<DensityMatrix>, CliError> {
    run_samples(n, master, |seed| {
        simulate_measurement(probe, bath, tau, &r.noise, seed).map(|m| m.combined)
    })
    .map_err(runtime)
}

fn summarize(states: &[DensityMatrix], f: impl Fn(&DensityMatrix) -> f64) -> MonteCarloSummary {
    let values: Vec<f64> = states.iter().map(f).collect();
    MonteCarloSummary::from_samples(&values)
}

fn mc_cells(mc: Option<MonteCarloSummary>) -> [Cell; 2] {
    match mc {
        Some(s) => [Cell::Num(s.mean), Cell::Num(s.std)],
        None => [Cell::Empty, Cell::Empty],
    }
}

fn discriminate(cfg: &ExperimentConfig, r: &Resolved) -> Result<Parts, CliError> {
    let mut table = Table::new(DISCRIMINATE_COLUMNS);
    let mut optima = Vec::new();
    let mut summary = Vec::new();
    let n_tau = r.taus.len() as u64;
    for (pi, probe) in r.probes.iter().enumerate() {
        let curve = discrimination_curve(probe, &r.cold, &r.hot, &r.taus).map_err(runtime)?;
        for (ti, point) in curve.iter().enumerate() {
            let mut mc = [None, None];
            if let (Some(g), true) = (point.g, cfg.mc_samples > 0) {
                for (bi, bath) in [&r.cold, &r.hot].into_iter().enumerate() {
                    let key = 2 * (pi as u64 * n_tau + ti as u64) + bi as u64;
                    let seed = stream_seed(cfg.master_seed, key);
                    let states = pipeline_samples(cfg.mc_samples, seed, probe, bath, point.tau, r)?;
                    mc[bi] = Some(summarize(&states, |rho| g.expectation(rho)));
                }
            }
            let [cm, cs] = mc_cells(mc[0]);
            let [hm, hs] = mc_cells(mc[1]);
            table.push(vec![
                Cell::text("curve"),
                Cell::Num(probe.theta()),
                Cell::Num(point.tau),
                Cell::opt(point.ev_cold),
                Cell::opt(point.ev_hot),
                Cell::Num(point.separation),
                cm,
                cs,
                hm,
                hs,
            ]);
        }
        let best = optimal_time(probe, &r.cold, &r.hot).map_err(runtime)?;
        let window = discrimination_window(probe, &r.cold, &r.hot, WINDOW_FRACTION, WINDOW_STEP)
            .map_err(runtime)?;
        optima.push(vec![
            Cell::text("optimum"),
            Cell::Num(probe.theta()),
            Cell::Num(best.tau),
            Cell::Empty,
            Cell::Empty,
            Cell::Num(best.separation),
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
            Cell::Empty,
        ]);
        summary.push(json!({
            "probe_theta": probe.theta(),
            "tau_star": best.tau,
            "separation_max": best.separation,
            "window_80": window,
        }));
    }
    for row in optima {
        table.push(row);
    }
    let asymptotic = (r.cold.equilibrium_rz() - r.hot.equilibrium_rz()).abs();
    let summary = json!({
        "probes": summary,
        "asymptotic_separation": asymptotic,
        "window_fraction": WINDOW_FRACTION,
    });
    let seeds = json!({
        "master_seed": cfg.master_seed,
        "derivation": "curve row k (probe-major), bath b (0 cold, 1 hot): Monte Carlo seed stream_seed(master_seed, 2k + b); sample i uses that seed + i",
    });
    Ok((table, summary, seeds, 0))
}

fn free_energy(cfg: &ExperimentConfig, r: &Resolved) -> Result<Parts, CliError> {
    let mut table = Table::new(FREE_ENERGY_COLUMNS);
    let mut asymptotes = Vec::new();
    let mut summary = Vec::new();
    for probe in &r.probes {
        for bath in [&r.cold, &r.hot] {
            let records =
                free_energy_trajectory(probe, bath, &r.taus, &r.hamiltonian).map_err(runtime)?;
            for rec in &records {
                table.push(vec![
                    Cell::text("trajectory"),
                    Cell::Num(probe.theta()),
                    Cell::Num(bath.nbar()),
                    Cell::Num(rec.temperature),
                    Cell::Num(rec.tau),
                    Cell::Num(rec.du),
                    Cell::Num(rec.ds),
                    Cell::Num(rec.df),
                    Cell::Num(rec.df_normalized),
                ]);
            }
            let inf = free_energy_trajectory(probe, bath, &[ASYMPTOTIC_TAU], &r.hamiltonian)
                .map_err(runtime)?[0];
            asymptotes.push(vec![
                Cell::text("asymptote"),
                Cell::Num(probe.theta()),
                Cell::Num(bath.nbar()),
                Cell::Num(inf.temperature),
                Cell::Num(inf.tau),
                Cell::Num(inf.du),
                Cell::Num(inf.ds),
                Cell::Num(inf.df),
                Cell::Num(inf.df_normalized),
            ]);
            summary.push(json!({
                "probe_theta": probe.theta(),
                "bath": bath_label(r, bath),
                "nbar": bath.nbar(),
                "dF_asymptotic": inf.df,
            }));
        }
    }
    for row in asymptotes {
        table.push(row);
    }
    let summary = json!({ "asymptotic_tau": ASYMPTOTIC_TAU, "trajectories": summary });
    let seeds = json!({ "master_seed": cfg.master_seed, "derivation": "not used" });
    Ok((table, summary, seeds, 0))
}

fn calibration(cfg: &ExperimentConfig, r: &Resolved) -> Result<Parts, CliError> {
    use std::f64::consts::PI;
    let mut table = Table::new(CALIBRATION_COLUMNS);
    for bath in [&r.cold, &r.hot] {
        let p = params_from_bath(bath, 0.0).map_err(runtime)?.p();
        let temperature = temperature_from_occupation(bath);
        for k in 0..cfg.phi_points {
            let phi = k as f64 * PI / cfg.phi_points as f64;
            let tau = tau_from_phase(phi, bath).map_err(runtime)?;
            table.push(vec![
                Cell::text("phase_time"),
                Cell::Num(phi),
                Cell::Num(p),
                Cell::Num(bath.nbar()),
                Cell::Num(tau),
                Cell::Num(temperature),
            ]);
        }
    }
    let denom = 2.0 * cfg.p_points as f64;
    for k in 1..cfg.p_points {
        let p = k as f64 / denom;
        let temperature = temperature_from_p(p).map_err(runtime)?;
        let nbar = occupation_from_temperature(temperature).map_err(runtime)?;
        table.push(vec![
            Cell::text("weight_temperature"),
            Cell::Empty,
            Cell::Num(p),
            Cell::Num(nbar),
            Cell::Empty,
            Cell::Num(temperature),
        ]);
    }
    let mut marked = Vec::new();
    for bath in [&r.cold, &r.hot] {
        let p = params_from_bath(bath, 0.0).map_err(runtime)?.p();
        let temperature = temperature_from_p(p).map_err(runtime)?;
        let nbar = occupation_from_temperature(temperature).map_err(runtime)?;
        table.push(vec![
            Cell::text("marked"),
            Cell::Empty,
            Cell::Num(p),
            Cell::Num(nbar),
            Cell::Empty,
            Cell::Num(temperature),
        ]);
        marked.push(json!({
            "bath": bath_label(r, bath),
            "nbar": bath.nbar(),
            "p": p,
            "temperature": temperature,
            "nbar_recovered": nbar,
        }));
    }
    let summary = json!({ "marked_points": marked });
    let seeds = json!({ "master_seed": cfg.master_seed, "derivation": "not used" });
    Ok((table, summary, seeds, 0))
}

struct SimRow {
    cells: Vec<Cell>,
    fidelity: Option<f64>,
    mc_fidelity: Option<f64>,
}

#[allow(clippy::too_many_arguments)]
fn simulate_row(
    cfg: &ExperimentConfig,
    r: &Resolved,
    probe: &ProbeState,
    bath: &BathSpec,
    tau: f64,
    g: Option<Observable>,
    seed: u64,
) -> Result<SimRow, CliError> {
    let theory = density_from_bloch(
        &qthermo::channel::lindblad_closed_form(&probe.bloch(), bath, tau).map_err(runtime)?,
    )
    .map_err(runtime)?;
    let rt = theory.bloch();
    let head = |status: &str| {
        vec![
            Cell::text(status),
            Cell::Num(probe.theta()),
            Cell::Num(bath.nbar()),
            Cell::Num(tau),
        ]
    };
    let settings = match ExperimentSettings::for_bath(bath, tau) {
        Ok(s) => s,
        Err(e) => {
            let mut cells = head("error");
            cells.extend([Cell::Empty, Cell::Empty, Cell::Empty, Cell::Int(seed)]);
            cells.extend([Cell::Num(rt.rx), Cell::Num(rt.ry), Cell::Num(rt.rz)]);
            cells.extend(std::iter::repeat_n(Cell::Empty, 9));
            cells.push(Cell::text(e.to_string()));
            return Ok(SimRow {
                cells,
                fidelity: None,
                mc_fidelity: None,
            });
        }
    };
    let run = simulate_measurement(probe, bath, tau, &r.noise, seed).map_err(runtime)?;
    let rb = run.combined.bloch();
    let fidelity = run.combined.fidelity(&theory);
    let (mc_f, mc_g) = if cfg.mc_samples > 0 {
        let states = pipeline_samples(cfg.mc_samples, seed, probe, bath, tau, r)?;
        let f = summarize(&states, |rho| rho.fidelity(&theory));
        let gs = g.map(|g| summarize(&states, |rho| g.expectation(rho)));
        (Some(f), gs)
    } else {
        (None, None)
    };
    let mut cells = head("ok");
    cells.extend([
        Cell::Num(settings.phi),
        Cell::Num(settings.channel.p()),
        Cell::Num(settings.channel.gamma()),
        Cell::Int(seed),
        Cell::Num(rt.rx),
        Cell::Num(rt.ry),
        Cell::Num(rt.rz),
        Cell::Num(rb.rx),
        Cell::Num(rb.ry),
        Cell::Num(rb.rz),
        Cell::Num(fidelity),
        Cell::opt(g.map(|g| g.expectation(&run.combined))),
    ]);
    cells.extend(mc_cells(mc_f));
    cells.extend(mc_cells(mc_g));
    cells.push(Cell::Empty);
    Ok(SimRow {
        cells,
        fidelity: Some(fidelity),
        mc_fidelity: mc_f.map(|s| s.mean),
    })
}

fn simulate_experiment(cfg: &ExperimentConfig, r: &Resolved) -> Result<Parts, CliError> {
    let mut table = Table::new(SIMULATE_COLUMNS);
    let mut fidelities = Vec::new();
    let mut mc_means = Vec::new();
    let mut errors = 0usize;
    let mut key = 0u64;
    for probe in &r.probes {
        // The discriminating observable depends on the probe and τ only.
        let observables = r
            .taus
            .iter()
            .map(|&tau| {
                let (rc, rh) = evolved_pair(probe, &r.cold, &r.hot, tau).map_err(runtime)?;
                Ok(optimal_observable(&rc, &rh).ok())
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        for bath in [&r.cold, &r.hot] {
            for (&tau, &g) in r.taus.iter().zip(&observables) {
                let seed = stream_seed(cfg.master_seed, key);
                key += 1;
                let row = simulate_row(cfg, r, probe, bath, tau, g, seed)?;
                match row.fidelity {
                    Some(f) => fidelities.push(f),
                    None => errors += 1,
                }
                mc_means.extend(row.mc_fidelity);
                table.push(row.cells);
            }
        }
    }
    let mean = |v: &[f64]| {
        if v.is_empty() {
            Value::Null
        } else {
            json!(v.iter().sum::<f64>() / v.len() as f64)
        }
    };
    let min = fidelities.iter().copied().fold(f64::INFINITY, f64::min);
    let summary = json!({
        "rows": table.rows.len(),
        "row_errors": errors,
        "fidelity_mean": mean(&fidelities),
        "fidelity_min": if fidelities.is_empty() { Value::Null } else { json!(min) },
        "mc_samples": cfg.mc_samples,
        "mc_fidelity_mean": mean(&mc_means),
        "noise_sigma": cfg.noise_sigma,
    });
    let seeds = json!({
        "master_seed": cfg.master_seed,
        "derivation": "row k (probe, bath, tau order): seed stream_seed(master_seed, k), listed in the seed column; Monte Carlo sample i uses seed + i, so sample 0 is the reported run",
    });
    Ok((table, summary, seeds, errors))
}
