//! Experiment configuration.
//!
//! Configuration files are JSON objects with flat keys. Every key is optional;
//! missing keys take the defaults of the reference experiment (cold bath
//! `N̄ = 5.5`, hot bath `N̄ = 9.5`, probes `θ ∈ {0, π/2, π}`, `ω = 1`).
//!
//! ```json
//! { "nbar_cold": 5.5, "tau_stop": 0.5, "mc_samples": 200, "master_seed": 42 }
//! ```

use std::f64::consts::PI;
use std::path::Path;

use qthermo::channel::BathSpec;
use qthermo::qubit::{Hamiltonian, ProbeState};
use qthermo::tomography::NoiseModel;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Upper bound on the number of points in the `τ` grid.
pub const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub nbar_cold: f64,
    pub nbar_hot: f64,
    pub probe_theta_list: Vec<f64>,
    pub tau_start: f64,
    pub tau_stop: f64,
    pub tau_step: f64,
    /// Relative standard deviation of the tomography intensities.
    pub noise_sigma: f64,
    /// Monte Carlo repetitions per grid point; 0 disables Monte Carlo.
    pub mc_samples: usize,
    pub master_seed: u64,
    pub omega: f64,
    /// Number of phases `φ_k = kπ/phi_points` in the calibration table.
    pub phi_points: usize,
    /// Calibration weights are `p_k = k/(2·p_points)` for `0 < k < p_points`.
    pub p_points: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            nbar_cold: 5.5,
            nbar_hot: 9.5,
            probe_theta_list: vec![0.0, PI / 2.0, PI],
            tau_start: 0.0,
            tau_stop: 1.0,
            tau_step: 0.01,
            noise_sigma: 0.01,
            mc_samples: 0,
            master_seed: 0,
            omega: 1.0,
            phi_points: 180,
            p_points: 500,
        }
    }
}

/// Validated objects built from an [`ExperimentConfig`].
#[derive(Debug, Clone)]
pub struct Resolved {
    pub cold: BathSpec,
    pub hot: BathSpec,
    pub probes: Vec<ProbeState>,
    pub taus: Vec<f64>,
    pub noise: NoiseModel,
    pub hamiltonian: Hamiltonian,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let cfg: Self = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("invalid config: {e}")))?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// `τ_k = tau_start + k·tau_step` for every `τ_k ≤ tau_stop`.
    pub fn tau_grid(&self) -> Result<Vec<f64>, CliError> {
        let (start, stop, step) = (self.tau_start, self.tau_stop, self.tau_step);
        if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
            return Err(CliError::Config("tau grid bounds must be finite".into()));
        }
        if step <= 0.0 {
            return Err(CliError::Config(format!(
                "tau_step must be positive, got {step}"
            )));
        }
        if start < 0.0 {
            return Err(CliError::Config(format!(
                "tau_start must be non-negative, got {start}"
            )));
        }
        if stop < start {
            return Err(CliError::Config(format!(
                "tau_stop ({stop}) is smaller than tau_start ({start})"
            )));
        }
        // Tolerate round-off so that e.g. 0..1 step 0.01 includes 1.
        let span = (stop - start) / step;
        if span > MAX_GRID_POINTS as f64 {
            return Err(CliError::Config(format!(
                "tau grid exceeds {MAX_GRID_POINTS} points"
            )));
        }
        let n = (span * (1.0 + 1e-12) + 1e-9).floor() as usize;
        Ok((0..=n).map(|k| start + k as f64 * step).collect())
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let cfg_err = |e: qthermo::Error| CliError::Config(e.to_string());
        if !(self.nbar_cold < self.nbar_hot) {
            return Err(CliError::Config(format!(
                "nbar_cold ({}) must be smaller than nbar_hot ({}): nothing to discriminate",
                self.nbar_cold, self.nbar_hot
            )));
        }
        let cold = BathSpec::new(self.nbar_cold).map_err(cfg_err)?;
        let hot = BathSpec::new(self.nbar_hot).map_err(cfg_err)?;
        if self.probe_theta_list.is_empty() {
            return Err(CliError::Config("probe_theta_list is empty".into()));
        }
        let probes = self
            .probe_theta_list
            .iter()
            .map(|&t| ProbeState::new(t))
            .collect::<Result<Vec<_>, _>>()
            .map_err(cfg_err)?;
        if self.mc_samples == 1 {
            return Err(CliError::Config(
                "mc_samples must be 0 (disabled) or at least 2".into(),
            ));
        }
        if self.phi_points == 0 || self.p_points < 2 {
            return Err(CliError::Config(
                "phi_points must be ≥ 1 and p_points ≥ 2".into(),
            ));
        }
        Ok(Resolved {
            cold,
            hot,
            probes,
            taus: self.tau_grid()?,
            noise: NoiseModel::new(self.noise_sigma).map_err(cfg_err)?,
            hamiltonian: Hamiltonian::new(self.omega).map_err(cfg_err)?,
        })
    }
}
