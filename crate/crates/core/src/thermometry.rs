//! Two-temperature discrimination with a single qubit probe.
//!
//! A probe prepared in a pure state touches either a cold or a hot bath for a
//! time `τ`. The two possible outcomes `ρ_cold(τ)` and `ρ_hot(τ)` are then
//! told apart with the two-outcome observable `Ĝ = Π₊ − Π₋` built on the sign
//! eigenspaces of `ρ_cold − ρ_hot`; its expectation gap equals the trace norm
//! `‖ρ_cold − ρ_hot‖₁`, the largest achievable by any observable with spectrum
//! in `[−1, 1]`.
//!
//! The module also tracks the Helmholtz free-energy change of the probe,
//! `ΔF = ΔU − TΔS`, along its relaxation.

use crate::channel::{lindblad_closed_form, temperature_from_occupation, BathSpec};
use crate::error::{out_of_range, Error, Result};
use crate::mat::ComplexMat2;
use crate::qubit::{density_from_bloch, eig_hermitian2, DensityMatrix, Hamiltonian, ProbeState};

/// Trace norms below this are treated as indistinguishable states.
pub const DEGENERATE_TOL: f64 = 1e-10;
/// Interaction time standing in for `τ → ∞`.
pub const ASYMPTOTIC_TAU: f64 = 50.0;

/// Coarse search grid for [`optimal_time`].
pub const OPT_GRID_STEP: f64 = 1e-3;
pub const OPT_TAU_MAX: f64 = 2.0;
/// Bracket width at which golden-section refinement stops.
pub const OPT_TOL: f64 = 1e-8;

/// A bounded Hermitian measurement operator (spectrum within `[−1, 1]`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observable {
    mat: ComplexMat2,
}

impl Observable {
    pub fn new(mat: ComplexMat2) -> Result<Self> {
        let defect = mat.hermiticity_defect();
        if !(defect <= 1e-12) {
            return Err(Error::NonHermitian { defect });
        }
        let eig = eig_hermitian2(&mat)?;
        if eig.values[0] > 1.0 + 1e-12 || eig.values[1] < -1.0 - 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "observable spectrum {:?} leaves [-1, 1]",
                eig.values
            )));
        }
        Ok(Self { mat })
    }

    pub fn matrix(&self) -> &ComplexMat2 {
        &self.mat
    }

    pub fn expectation(&self, rho: &DensityMatrix) -> f64 {
        rho.expectation(&self.mat)
    }
}

/// One point on a discrimination curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscriminationPoint {
    pub tau: f64,
    /// `None` when the two states coincide and no observable is meaningful.
    pub g: Option<Observable>,
    pub ev_cold: Option<f64>,
    pub ev_hot: Option<f64>,
    pub separation: f64,
}

impl DiscriminationPoint {
    pub fn is_degenerate(&self) -> bool {
        self.g.is_none()
    }
}

/// Location of the best discrimination time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimalTime {
    pub tau: f64,
    pub separation: f64,
}

/// Helstrom observable for telling `rho1` from `rho2`.
pub fn optimal_observable(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<Observable> {
    let delta = *rho1.matrix() - *rho2.matrix();
    let eig = eig_hermitian2(&delta)?;
    let trace_norm = eig.values[0].abs() + eig.values[1].abs();
    if trace_norm < DEGENERATE_TOL {
        return Err(Error::DegeneratePair { trace_norm });
    }
    let g = eig.map_spectrum(|l| if l >= 0.0 { 1.0 } else { -1.0 });
    Ok(Observable { mat: g })
}

/// Trace norm `‖ρ1 − ρ2‖₁`.
pub fn separation(rho1: &DensityMatrix, rho2: &DensityMatrix) -> f64 {
    let delta = *rho1.matrix() - *rho2.matrix();
    let eig = eig_hermitian2(&delta).expect("difference of density matrices is Hermitian");
    eig.values[0].abs() + eig.values[1].abs()
}

/// Helstrom success probability for equal priors, `1/2 + ‖ρ1 − ρ2‖₁/4`.
pub fn success_probability(rho1: &DensityMatrix, rho2: &DensityMatrix) -> f64 {
    0.5 + 0.25 * separation(rho1, rho2)
}

fn check_baths(cold: &BathSpec, hot: &BathSpec) -> Result<()> {
    if !(cold.nbar() < hot.nbar()) {
        return Err(Error::InvalidArgument(format!(
            "cold bath occupation ({}) must be below hot bath occupation ({})",
            cold.nbar(),
            hot.nbar()
        )));
    }
    Ok(())
}

fn check_taus(taus: &[f64], strict: bool) -> Result<()> {
    if let Some(&t) = taus.iter().find(|t| !(**t >= 0.0 && t.is_finite())) {
        return Err(out_of_range(
            "tau",
            t,
            "interaction times must be finite and non-negative",
        ));
    }
    let ordered = taus
        .windows(2)
        .all(|w| if strict { w[1] > w[0] } else { w[1] >= w[0] });
    if !ordered {
        return Err(Error::InvalidArgument(
            "interaction times must be increasing".into(),
        ));
    }
    Ok(())
}

/// States of the probe after `tau` in contact with each bath.
pub fn evolved_pair(
    probe: &ProbeState,
    cold: &BathSpec,
    hot: &BathSpec,
    tau: f64,
) -> Result<(DensityMatrix, DensityMatrix)> {
    let r0 = probe.bloch();
    let rc = density_from_bloch(&lindblad_closed_form(&r0, cold, tau)?)?;
    let rh = density_from_bloch(&lindblad_closed_form(&r0, hot, tau)?)?;
    Ok((rc, rh))
}

fn discrimination_point(
    probe: &ProbeState,
    cold: &BathSpec,
    hot: &BathSpec,
    tau: f64,
) -> Result<DiscriminationPoint> {
    let (rc, rh) = evolved_pair(probe, cold, hot, tau)?;
    match optimal_observable(&rc, &rh) {
        Ok(g) => {
            let ev_cold = g.expectation(&rc);
            let ev_hot = g.expectation(&rh);
            Ok(DiscriminationPoint {
                tau,
                g: Some(g),
                ev_cold: Some(ev_cold),
                ev_hot: Some(ev_hot),
                separation: (ev_hot - ev_cold).abs(),
            })
        }
        Err(Error::DegeneratePair { .. }) => Ok(DiscriminationPoint {
            tau,
            g: None,
            ev_cold: None,
            ev_hot: None,
            separation: 0.0,
        }),
        Err(e) => Err(e),
    }
}

/// Expectation values of the per-`τ` optimal observable for both baths.
pub fn discrimination_curve(
    probe: &ProbeState,
    cold: &BathSpec,
    hot: &BathSpec,
    taus: &[f64],
) -> Result<Vec<DiscriminationPoint>> {
    check_baths(cold, hot)?;
    check_taus(taus, true)?;
    taus.iter()
        .map(|&tau| discrimination_point(probe, cold, hot, tau))
        .collect()
}

/// Trace distance between the cold- and hot-bath states at `tau`.
pub fn separation_at(probe: &ProbeState, cold: &BathSpec, hot: &BathSpec, tau: f64) -> Result<f64> {
    let (rc, rh) = evolved_pair(probe, cold, hot, tau)?;
    Ok(separation(&rc, &rh))
}

/// Interaction time maximizing the separation.
///
/// Scans `(0, OPT_TAU_MAX]` with step `OPT_GRID_STEP`, then refines the best
/// bracket by golden-section search down to `OPT_TOL`.
pub fn optimal_time(probe: &ProbeState, cold: &BathSpec, hot: &BathSpec) -> Result<OptimalTime> {
    check_baths(cold, hot)?;
    let sep = |tau: f64| separation_at(probe, cold, hot, tau);

    let n = (OPT_TAU_MAX / OPT_GRID_STEP).round() as usize;
    let mut best = (OPT_GRID_STEP, f64::NEG_INFINITY);
    for k in 1..=n {
        let tau = k as f64 * OPT_GRID_STEP;
        let s = sep(tau)?;
        if s > best.1 {
            best = (tau, s);
        }
    }

    let mut lo = (best.0 - OPT_GRID_STEP).max(0.0);
    let mut hi = (best.0 + OPT_GRID_STEP).min(OPT_TAU_MAX);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = sep(x1)?;
    let mut f2 = sep(x2)?;
    while hi - lo > OPT_TOL {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = sep(x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = sep(x1)?;
        }
    }
    let tau = 0.5 * (lo + hi);
    let refined = sep(tau)?;
    Ok(if refined >= best.1 {
        OptimalTime {
            tau,
            separation: refined,
        }
    } else {
        OptimalTime {
            tau: best.0,
            separation: best.1,
        }
    })
}

/// Total length of the set `{τ ∈ [0, OPT_TAU_MAX] : separation(τ) ≥ fraction · max}`,
/// measured on a grid of spacing `step`.
pub fn discrimination_window(
    probe: &ProbeState,
    cold: &BathSpec,
    hot: &BathSpec,
    fraction: f64,
    step: f64,
) -> Result<f64> {
    let best = optimal_time(probe, cold, hot)?;
    let threshold = fraction * best.separation;
    let n = (OPT_TAU_MAX / step).round() as usize;
    let mut count = 0usize;
    for k in 0..=n {
        if separation_at(probe, cold, hot, k as f64 * step)? >= threshold {
            count += 1;
        }
    }
    Ok(count as f64 * step)
}

/// Energy, entropy and free-energy change of one transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergyChange {
    pub du: f64,
    pub ds: f64,
    pub df: f64,
}

/// Free-energy bookkeeping at one interaction time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeEnergyRecord {
    pub tau: f64,
    pub temperature: f64,
    pub du: f64,
    pub ds: f64,
    pub df: f64,
    /// `dF(τ)/dF_∞`
    pub df_normalized: f64,
}

impl FreeEnergyRecord {
    pub fn new(tau: f64, temperature: f64, du: f64, ds: f64, df_asymptotic: f64) -> Self {
        let df = du - temperature * ds;
        let df_normalized = if df_asymptotic == 0.0 {
            0.0
        } else {
            df / df_asymptotic
        };
        Self {
            tau,
            temperature,
            du,
            ds,
            df,
            df_normalized,
        }
    }
}

/// `ΔF = ΔU − TΔS` between a pure input and an arbitrary output state.
///
/// `ΔU` is taken out-minus-in; `ΔS = S(ρ_out)` because the input is pure.
pub fn free_energy_change(
    rho_in: &DensityMatrix,
    rho_out: &DensityMatrix,
    temperature: f64,
    h: &Hamiltonian,
) -> Result<FreeEnergyChange> {
    if !(temperature > 0.0 && temperature.is_finite()) {
        return Err(out_of_range("temperature", temperature, "must be positive"));
    }
    let purity = rho_in.purity();
    if (1.0 - purity).abs() > 1e-10 {
        return Err(Error::NotPure { purity });
    }
    let du = rho_out.energy(h) - rho_in.energy(h);
    let ds = rho_out.entropy();
    Ok(FreeEnergyChange {
        du,
        ds,
        df: du - temperature * ds,
    })
}

/// Free-energy change along the relaxation of `probe` in `bath`.
///
/// The bath temperature is `ω · T(N̄)`, i.e. the Bose–Einstein temperature
/// expressed in the same energy unit as `h`.
pub fn free_energy_trajectory(
    probe: &ProbeState,
    bath: &BathSpec,
    taus: &[f64],
    h: &Hamiltonian,
) -> Result<Vec<FreeEnergyRecord>> {
    check_taus(taus, false)?;
    let temperature = h.omega() * temperature_from_occupation(bath);
    let r0 = probe.bloch();
    let rho_in = density_from_bloch(&r0)?;
    let change_at = |tau: f64| -> Result<FreeEnergyChange> {
        let out = density_from_bloch(&lindblad_closed_form(&r0, bath, tau)?)?;
        free_energy_change(&rho_in, &out, temperature, h)
    };
    let asymptotic = change_at(ASYMPTOTIC_TAU)?.df;
    taus.iter()
        .map(|&tau| {
            let c = change_at(tau)?;
            Ok(FreeEnergyRecord::new(
                tau,
                temperature,
                c.du,
                c.ds,
                asymptotic,
            ))
        })
        .collect()
}
