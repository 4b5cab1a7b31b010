//! Generalized amplitude damping (GAD) channel.
//!
//! The same dynamics is available in three forms that must agree:
//!
//! * the Kraus representation [`apply_channel`],
//! * the affine action on the Bloch vector [`bloch_map`],
//! * the closed-form Markovian solution [`lindblad_closed_form`] in terms of
//!   the bath occupation `N̄` and dimensionless interaction time `τ`.
//!
//! [`params_from_bath`] links the last form to the first two. The pair
//! `(E0, E1)`, weighted by `p`, pumps population into index 0 (`|H⟩`); the
//! pair `(E2, E3)`, weighted by `1 − p`, pumps it into index 1 (`|V⟩`). With
//! `1 − 2p = 1/(1 + 2N̄)` the channel's fixed point is the bath's Gibbs state.

use crate::error::{out_of_range, Error, Result};
use crate::mat::ComplexMat2;
use crate::qubit::{density_from_bloch, BlochVector, DensityMatrix};

/// One application of the GAD channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    p: f64,
    gamma: f64,
    /// `1 − γ`, kept separately so that it stays accurate when `γ → 1`.
    survival: f64,
}

impl ChannelParams {
    pub fn new(p: f64, gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(out_of_range("p", p, "must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&gamma) {
            return Err(out_of_range("gamma", gamma, "must lie in [0, 1]"));
        }
        Ok(Self {
            p,
            gamma,
            survival: 1.0 - gamma,
        })
    }

    /// Parameters from the survival factor `1 − γ`.
    pub fn from_survival(p: f64, survival: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&survival) {
            return Err(out_of_range("survival", survival, "must lie in [0, 1]"));
        }
        let mut cp = Self::new(p, 1.0 - survival)?;
        cp.survival = survival;
        Ok(cp)
    }

    /// Weight of the `(E0, E1)` pair.
    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn survival(&self) -> f64 {
        self.survival
    }
}

/// Thermal bath described by its mean occupation number `N̄`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BathSpec {
    nbar: f64,
}

impl BathSpec {
    pub fn new(nbar: f64) -> Result<Self> {
        if !(nbar >= 0.0 && nbar.is_finite()) {
            return Err(out_of_range(
                "nbar",
                nbar,
                "must be finite and non-negative",
            ));
        }
        Ok(Self { nbar })
    }

    pub fn nbar(&self) -> f64 {
        self.nbar
    }

    /// Relaxation rate `1 + 2N̄` of the populations.
    pub fn rate(&self) -> f64 {
        1.0 + 2.0 * self.nbar
    }

    /// Equilibrium value of `r_z`, `−1/(1 + 2N̄)`.
    pub fn equilibrium_rz(&self) -> f64 {
        -1.0 / self.rate()
    }

    pub fn temperature(&self) -> f64 {
        temperature_from_occupation(self)
    }
}

/// The four Kraus operators of the channel.
#[derive(Debug, Clone, Copy)]
pub struct GADKraus {
    pub e0: ComplexMat2,
    pub e1: ComplexMat2,
    pub e2: ComplexMat2,
    pub e3: ComplexMat2,
}

impl GADKraus {
    pub fn operators(&self) -> [ComplexMat2; 4] {
        [self.e0, self.e1, self.e2, self.e3]
    }

    /// `max |Σ E†E − I|`
    pub fn completeness_defect(&self) -> f64 {
        self.operators()
            .iter()
            .map(|e| e.adjoint() * *e)
            .sum::<ComplexMat2>()
            .max_abs_diff(&ComplexMat2::identity())
    }
}

pub fn kraus_ops(cp: &ChannelParams) -> GADKraus {
    let sp = cp.p.sqrt();
    let sq = (1.0 - cp.p).sqrt();
    let keep = cp.survival.sqrt();
    let jump = cp.gamma.sqrt();
    GADKraus {
        e0: ComplexMat2::diag(1.0, keep).scale_re(sp),
        e1: ComplexMat2::real(0.0, jump, 0.0, 0.0).scale_re(sp),
        e2: ComplexMat2::diag(keep, 1.0).scale_re(sq),
        e3: ComplexMat2::real(0.0, 0.0, jump, 0.0).scale_re(sq),
    }
}

/// `ρ ↦ Σ_k E_k ρ E_k†`
pub fn apply_channel(rho: &DensityMatrix, cp: &ChannelParams) -> DensityMatrix {
    let out = kraus_ops(cp)
        .operators()
        .iter()
        .map(|e| e.sandwich(rho.matrix()))
        .sum();
    DensityMatrix::from_mat_unchecked(out)
}

/// Affine action `(r_x√(1−γ), r_y√(1−γ), γ(2p−1) + r_z(1−γ))`.
pub fn bloch_map(r: &BlochVector, cp: &ChannelParams) -> BlochVector {
    let keep = cp.survival;
    let s = keep.sqrt();
    BlochVector::new(
        r.rx * s,
        r.ry * s,
        cp.gamma * (2.0 * cp.p - 1.0) + r.rz * keep,
    )
}

/// Exact Markovian evolution of the Bloch vector after time `tau`.
pub fn lindblad_closed_form(r0: &BlochVector, bath: &BathSpec, tau: f64) -> Result<BlochVector> {
    check_tau(tau)?;
    let a = bath.rate();
    let decay = (-a * tau).exp();
    let coherence = (-0.5 * a * tau).exp();
    // [e^{-aτ}(1 + a r_z) − 1]/a, rearranged to be exact at τ = 0
    let relaxed = -(-a * tau).exp_m1() / a;
    Ok(BlochVector::new(
        r0.rx * coherence,
        r0.ry * coherence,
        decay * r0.rz - relaxed,
    ))
}

/// Density matrix after contact with `bath` for time `tau`.
pub fn evolve(rho0: &DensityMatrix, bath: &BathSpec, tau: f64) -> Result<DensityMatrix> {
    let r = lindblad_closed_form(&rho0.bloch(), bath, tau)?;
    density_from_bloch(&r)
}

/// Channel parameters reproducing the closed-form evolution:
/// `γ = 1 − e^{−(1+2N̄)τ}` and `p = (1 − 1/(1+2N̄))/2`.
pub fn params_from_bath(bath: &BathSpec, tau: f64) -> Result<ChannelParams> {
    check_tau(tau)?;
    let a = bath.rate();
    let p = bath.nbar / a;
    let mut cp = ChannelParams::from_survival(p, (-a * tau).exp())?;
    cp.gamma = -(-a * tau).exp_m1();
    Ok(cp)
}

/// SLM calibration `γ = sin²(φ/2)`, `φ ∈ [0, π]`.
pub fn gamma_from_phase(phi: f64) -> Result<f64> {
    check_phase(phi)?;
    Ok((0.5 * phi).sin().powi(2))
}

/// Inverse of [`gamma_from_phase`].
pub fn phase_from_gamma(gamma: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(out_of_range("gamma", gamma, "must lie in [0, 1]"));
    }
    Ok(2.0 * gamma.sqrt().atan2((1.0 - gamma).sqrt()))
}

/// Interaction time encoded by the phase `phi` for a given bath,
/// `τ = −ln(1 − sin²(φ/2))/(1 + 2N̄)`.
pub fn tau_from_phase(phi: f64, bath: &BathSpec) -> Result<f64> {
    check_phase(phi)?;
    if phi == std::f64::consts::PI {
        return Err(Error::InfiniteTime);
    }
    // 1 − sin²(φ/2) = cos²(φ/2)
    let tau = -2.0 * (0.5 * phi).cos().ln() / bath.rate();
    if !tau.is_finite() {
        return Err(Error::InfiniteTime);
    }
    Ok(tau.max(0.0))
}

/// Phase setting needed to emulate interaction time `tau`.
///
/// Fails when `γ` rounds to 1, since `φ = π` stands for infinite time.
pub fn phase_from_tau(tau: f64, bath: &BathSpec) -> Result<f64> {
    let cp = params_from_bath(bath, tau)?;
    if cp.gamma >= 1.0 {
        return Err(out_of_range(
            "tau",
            tau,
            "damping saturates; the phase mask would need φ = π",
        ));
    }
    Ok(2.0 * cp.gamma.sqrt().atan2(cp.survival.sqrt()))
}

/// `T = 1/(2 artanh(1 − 2p))` in units of ħω/k_B.
pub fn temperature_from_p(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(out_of_range(
            "p",
            p,
            "finite positive temperature requires p in (0, 0.5)",
        ));
    }
    Ok(1.0 / (2.0 * (1.0 - 2.0 * p).atanh()))
}

/// Bose–Einstein temperature `T = 1/ln(1 + 1/N̄)`; zero for an empty bath.
pub fn temperature_from_occupation(bath: &BathSpec) -> f64 {
    if bath.nbar == 0.0 {
        return 0.0;
    }
    1.0 / (1.0 / bath.nbar).ln_1p()
}

/// Inverse of [`temperature_from_occupation`], `N̄ = 1/(e^{1/T} − 1)`.
pub fn occupation_from_temperature(temperature: f64) -> Result<f64> {
    if !(temperature > 0.0) {
        return Err(out_of_range("temperature", temperature, "must be positive"));
    }
    Ok(1.0 / (1.0 / temperature).exp_m1())
}

/// Gibbs state of the qubit in equilibrium with `bath`.
pub fn thermal_state(bath: &BathSpec) -> DensityMatrix {
    let rz = bath.equilibrium_rz();
    DensityMatrix::from_mat_unchecked(ComplexMat2::diag(0.5 * (1.0 + rz), 0.5 * (1.0 - rz)))
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau >= 0.0) {
        return Err(out_of_range(
            "tau",
            tau,
            "interaction time must be non-negative",
        ));
    }
    Ok(())
}

fn check_phase(phi: f64) -> Result<()> {
    if !(0.0..=std::f64::consts::PI).contains(&phi) {
        return Err(out_of_range("phi", phi, "phase mask domain is [0, π]"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qubit::ProbeState;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, LN_2, PI, TAU};

    fn bath(n: f64) -> BathSpec {
        BathSpec::new(n).unwrap()
    }

    #[test]
    fn kraus_examples() {
        let k = kraus_ops(&ChannelParams::new(1.0, 0.0).unwrap());
        assert_eq!(k.e0, ComplexMat2::identity());
        for e in [k.e1, k.e2, k.e3] {
            assert_eq!(e, ComplexMat2::zero());
        }

        let k = kraus_ops(&ChannelParams::new(0.5, 1.0).unwrap());
        let s = 0.5f64.sqrt();
        assert!(k.e0.max_abs_diff(&ComplexMat2::diag(s, 0.0)) < 1e-15);
        assert!(k.e1.max_abs_diff(&ComplexMat2::real(0.0, s, 0.0, 0.0)) < 1e-15);
        assert!(k.e2.max_abs_diff(&ComplexMat2::diag(0.0, s)) < 1e-15);
        assert!(k.e3.max_abs_diff(&ComplexMat2::real(0.0, 0.0, s, 0.0)) < 1e-15);
    }

    #[test]
    fn cptp_on_grid() {
        for i in 0..=20 {
            for j in 0..=20 {
                let cp = ChannelParams::new(i as f64 / 20.0, j as f64 / 20.0).unwrap();
                assert!(kraus_ops(&cp).completeness_defect() <= 1e-12);
            }
        }
    }

    #[test]
    fn apply_channel_examples() {
        let rho = ProbeState::plus().density();
        let cp = ChannelParams::new(0.3, 0.0).unwrap();
        assert!(apply_channel(&rho, &cp).max_abs_diff(&rho) < 1e-15);

        let full = ChannelParams::new(1.0, 1.0).unwrap();
        let out = apply_channel(&DensityMatrix::ground(), &full);
        assert!(out.max_abs_diff(&DensityMatrix::excited()) < 1e-15);

        let cp = ChannelParams::new(0.475, 0.5).unwrap();
        let r = apply_channel(&rho, &cp).bloch();
        assert!(r.max_abs_diff(&BlochVector::new(FRAC_1_SQRT_2, 0.0, -0.025)) < 1e-12);
    }

    #[test]
    fn bloch_map_examples() {
        let cp = ChannelParams::new(0.475, 1.0).unwrap();
        let r = bloch_map(&BlochVector::default(), &cp);
        assert!(r.max_abs_diff(&BlochVector::new(0.0, 0.0, -0.05)) < 1e-15);

        let r0 = BlochVector::new(0.2, -0.3, 0.4);
        let id = ChannelParams::new(0.475, 0.0).unwrap();
        assert_eq!(bloch_map(&r0, &id), r0);

        let cp = ChannelParams::new(0.475, 0.5).unwrap();
        let r = bloch_map(&BlochVector::new(1.0, 0.0, 0.0), &cp);
        assert!(r.max_abs_diff(&BlochVector::new(FRAC_1_SQRT_2, 0.0, -0.025)) < 1e-5);
    }

    #[test]
    fn closed_form_examples() {
        let r0 = BlochVector::new(0.6, 0.0, 0.8);
        assert_eq!(lindblad_closed_form(&r0, &bath(5.5), 0.0).unwrap(), r0);

        let late = lindblad_closed_form(&r0, &bath(5.5), 50.0).unwrap();
        assert!(late.max_abs_diff(&BlochVector::new(0.0, 0.0, -1.0 / 12.0)) < 1e-10);

        let r = lindblad_closed_form(&BlochVector::new(0.0, 0.0, 1.0), &bath(0.0), LN_2).unwrap();
        assert!(r.rz.abs() < 1e-15);

        assert!(lindblad_closed_form(&r0, &bath(5.5), -1e-3).is_err());
    }

    #[test]
    fn params_examples() {
        let cold = params_from_bath(&bath(5.5), 1.0).unwrap();
        assert!((cold.p() - 11.0 / 24.0).abs() < 1e-15);
        let hot = params_from_bath(&bath(9.5), 1.0).unwrap();
        assert!((hot.p() - 0.475).abs() < 1e-15);
        assert_eq!(params_from_bath(&bath(5.5), 0.0).unwrap().gamma(), 0.0);
        assert!(params_from_bath(&bath(5.5), -1.0).is_err());
    }

    #[test]
    fn phase_calibration_examples() {
        assert_eq!(gamma_from_phase(0.0).unwrap(), 0.0);
        assert!((gamma_from_phase(PI).unwrap() - 1.0).abs() < 1e-15);
        assert!((gamma_from_phase(FRAC_PI_2).unwrap() - 0.5).abs() < 1e-15);
        assert!(gamma_from_phase(-0.1).is_err());
        assert!(gamma_from_phase(PI + 0.1).is_err());

        assert_eq!(tau_from_phase(0.0, &bath(5.5)).unwrap(), 0.0);
        assert!((tau_from_phase(FRAC_PI_2, &bath(5.5)).unwrap() - LN_2 / 12.0).abs() < 1e-15);
        assert!((tau_from_phase(FRAC_PI_2, &bath(5.5)).unwrap() - 0.057762).abs() < 1e-6);
        assert!((tau_from_phase(FRAC_PI_2, &bath(9.5)).unwrap() - 0.034657).abs() < 1e-6);
        assert!(matches!(
            tau_from_phase(PI, &bath(5.5)),
            Err(Error::InfiniteTime)
        ));
    }

    #[test]
    fn tau_from_phase_is_monotone() {
        let b = bath(5.5);
        let taus: Vec<f64> = (0..100)
            .map(|i| tau_from_phase(PI * i as f64 / 100.0, &b).unwrap())
            .collect();
        assert!(taus.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn temperature_examples() {
        let t_cold = temperature_from_occupation(&bath(5.5));
        assert!((t_cold - 1.0 / (13.0f64 / 11.0).ln()).abs() < 1e-12);
        assert!((t_cold - 5.9861).abs() < 1e-4);
        let t_hot = temperature_from_occupation(&bath(9.5));
        assert!((t_hot - 9.9917).abs() < 1e-4);

        for n in [0.5, 5.5, 9.5, 100.0] {
            let p = params_from_bath(&bath(n), 0.0).unwrap().p();
            let t = temperature_from_p(p).unwrap();
            assert!((t - 1.0 / (1.0 + 1.0 / n).ln()).abs() < 1e-12 * t.max(1.0));
            assert!((occupation_from_temperature(t).unwrap() - n).abs() < 1e-9 * n);
        }

        assert!(temperature_from_p(0.5 - 1e-7).unwrap() > 1e6);
        assert!(temperature_from_p(0.5).is_err());
        assert!(temperature_from_p(0.0).is_err());
        assert!(temperature_from_p(0.7).is_err());
    }

    #[test]
    fn thermal_state_examples() {
        assert!(thermal_state(&bath(0.0)).max_abs_diff(&DensityMatrix::ground()) < 1e-15);
        assert!((thermal_state(&bath(5.5)).bloch().rz + 1.0 / 12.0).abs() < 1e-15);
        let hot = thermal_state(&bath(1e9));
        assert!(hot.max_abs_diff(&DensityMatrix::maximally_mixed()) < 1e-8);

        // Boltzmann ratio of excited to ground population.
        for n in [0.5, 5.5, 9.5] {
            let b = bath(n);
            let m = *thermal_state(&b).matrix();
            let ratio = m.get(0, 0).re / m.get(1, 1).re;
            assert!((ratio - (-1.0 / b.temperature()).exp()).abs() < 1e-12);
        }
    }

    #[test]
    fn three_way_equivalence_small_grid() {
        for n in [0.0, 0.5, 5.5, 9.5] {
            let b = bath(n);
            for k in 0..=50 {
                let tau = k as f64 * 0.1;
                let cp = params_from_bath(&b, tau).unwrap();
                for probe_theta in [0.0, PI / 4.0, FRAC_PI_2, 3.0 * PI / 4.0, PI] {
                    let probe = ProbeState::new(probe_theta).unwrap();
                    let rho0 = probe.density();
                    let kraus = apply_channel(&rho0, &cp);
                    let affine = density_from_bloch(&bloch_map(&probe.bloch(), &cp)).unwrap();
                    let closed =
                        density_from_bloch(&lindblad_closed_form(&probe.bloch(), &b, tau).unwrap())
                            .unwrap();
                    assert!(kraus.max_abs_diff(&affine) <= 1e-12);
                    assert!(
                        kraus.max_abs_diff(&closed) <= 1e-12,
                        "n={n} tau={tau} theta={probe_theta} {}",
                        kraus.max_abs_diff(&closed)
                    );
                }
            }
        }
    }

    proptest! {
        #[test]
        fn thermal_state_is_fixed_point(n in 0.0..20.0f64, tau in 0.0..10.0f64) {
            let b = bath(n);
            let th = thermal_state(&b);
            let out = apply_channel(&th, &params_from_bath(&b, tau).unwrap());
            prop_assert!(out.max_abs_diff(&th) <= 1e-12);
        }

        #[test]
        fn closed_form_is_a_semigroup(
            n in 0.0..10.0f64, t1 in 0.0..2.0f64, t2 in 0.0..2.0f64,
            theta in 0.0..PI, phase in 0.0..TAU,
        ) {
            let b = bath(n);
            let r0 = ProbeState::with_phase(theta, phase).unwrap().bloch();
            let two_step = lindblad_closed_form(&lindblad_closed_form(&r0, &b, t1).unwrap(), &b, t2).unwrap();
            let one_step = lindblad_closed_form(&r0, &b, t1 + t2).unwrap();
            prop_assert!(two_step.max_abs_diff(&one_step) <= 1e-12);
        }

        #[test]
        fn phase_calibration_consistent(phi in 0.0..3.1f64, n in 0.0..20.0f64) {
            let b = bath(n);
            let tau = tau_from_phase(phi, &b).unwrap();
            let gamma = params_from_bath(&b, tau).unwrap().gamma();
            prop_assert!((gamma - gamma_from_phase(phi).unwrap()).abs() <= 1e-12);
            let back = phase_from_tau(tau, &b).unwrap();
            prop_assert!((back - phi).abs() <= 1e-7);
        }
    }
}
