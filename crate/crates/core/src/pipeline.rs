//! The simulated optical experiment end to end.
//!
//! For a probe, a bath and an interaction time:
//!
//! 1. the time is converted into the modulator phase `φ` and the weight `p`;
//! 2. the interferometer is run once per phase-mask setting, and the six
//!    analyser intensities are collected over both output ports;
//! 3. each intensity set goes through noisy tomography;
//! 4. the two reconstructed states are mixed with weights `p` and `1 − p`.
//!
//! Without noise the result reproduces [`apply_channel`](crate::channel::apply_channel).

use crate::channel::{params_from_bath, phase_from_tau, BathSpec, ChannelParams};
use crate::error::Result;
use crate::optics::{collected_intensity, sagnac_transform, AnalyzerSetting, PairSelector};
use crate::qubit::{DensityMatrix, ProbeState};
use crate::tomography::{
    combine_weighted, noisy_dataset, reconstruct, stream_seed, NoiseModel, DEFAULT_FLUX,
};

/// Experimental settings realising one `(bath, τ)` point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentSettings {
    pub phi: f64,
    pub channel: ChannelParams,
}

impl ExperimentSettings {
    pub fn for_bath(bath: &BathSpec, tau: f64) -> Result<Self> {
        let channel = params_from_bath(bath, tau)?;
        let phi = phase_from_tau(tau, bath)?;
        Ok(Self { phi, channel })
    }
}

/// Collected analyser intensities for the interferometer programmed for `pair`.
pub fn pair_intensities(rho_in: &DensityMatrix, phi: f64, pair: PairSelector) -> Result<[f64; 6]> {
    let eig = rho_in.eigen();
    let mut out = [0.0; 6];
    for (&weight, ket) in eig.values.iter().zip(eig.vectors.iter()) {
        let weight = weight.max(0.0);
        if weight == 0.0 {
            continue;
        }
        let state = sagnac_transform(ket, phi, pair)?;
        for (slot, setting) in out.iter_mut().zip(AnalyzerSetting::ALL) {
            *slot += DEFAULT_FLUX * weight * collected_intensity(&state, setting);
        }
    }
    Ok(out)
}

/// Outcome of one simulated measurement run.
#[derive(Debug, Clone, Copy)]
pub struct MeasuredState {
    pub settings: ExperimentSettings,
    /// Reconstructed `(E0, E1)` and `(E2, E3)` outputs.
    pub pair_states: [DensityMatrix; 2],
    pub combined: DensityMatrix,
}

/// Runs the optical experiment once. The two tomography runs use seeds
/// `stream_seed(seed, 0)` and `stream_seed(seed, 1)`.
pub fn simulate_measurement(
    probe: &ProbeState,
    bath: &BathSpec,
    tau: f64,
    noise: &NoiseModel,
    seed: u64,
) -> Result<MeasuredState> {
    let settings = ExperimentSettings::for_bath(bath, tau)?;
    let rho_in = probe.density();
    let mut states = [rho_in; 2];
    for (k, pair) in PairSelector::ALL.into_iter().enumerate() {
        let ideal = pair_intensities(&rho_in, settings.phi, pair)?;
        states[k] = reconstruct(&noisy_dataset(ideal, noise, stream_seed(seed, k as u64)))?;
    }
    let combined = combine_weighted(&states[0], &states[1], settings.channel.p())?;
    Ok(MeasuredState {
        settings,
        pair_states: states,
        combined,
    })
}
