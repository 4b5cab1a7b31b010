//! Cross-module workflows through the public API.

use std::f64::consts::PI;

use qthermo::channel::{
    apply_channel, evolve, params_from_bath, phase_from_tau, tau_from_phase, BathSpec,
};
use qthermo::optics::{simulate_kraus_pair, PairSelector};
use qthermo::pipeline::{pair_intensities, simulate_measurement};
use qthermo::thermometry::{
    discrimination_curve, evolved_pair, optimal_observable, optimal_time, separation,
    success_probability,
};
use qthermo::tomography::{
    combine_weighted, monte_carlo_errors, reconstruct, Functional, NoiseModel, TomographyDataset,
};
use qthermo::{DensityMatrix, ProbeState};

fn baths() -> (BathSpec, BathSpec) {
    (BathSpec::new(5.5).unwrap(), BathSpec::new(9.5).unwrap())
}

#[test]
fn optics_pairs_recombine_into_the_channel() {
    let (cold, _) = baths();
    let probe = ProbeState::with_phase(1.2, 0.8).unwrap();
    for tau in [0.02, 0.1, 0.4] {
        let cp = params_from_bath(&cold, tau).unwrap();
        let phi = phase_from_tau(tau, &cold).unwrap();
        let a = simulate_kraus_pair(&probe.density(), phi, PairSelector::PairA).unwrap();
        let b = simulate_kraus_pair(&probe.density(), phi, PairSelector::PairB).unwrap();
        let mixed = combine_weighted(&a, &b, cp.p()).unwrap();
        assert!(mixed.max_abs_diff(&apply_channel(&probe.density(), &cp)) < 1e-12);
        assert!(mixed.max_abs_diff(&evolve(&probe.density(), &cold, tau).unwrap()) < 1e-12);
    }
}

#[test]
fn measured_intensities_survive_a_csv_round_trip() {
    let (_, hot) = baths();
    let phi = phase_from_tau(0.07, &hot).unwrap();
    let ideal = pair_intensities(&ProbeState::plus().density(), phi, PairSelector::PairB).unwrap();
    let ds = TomographyDataset::new(ideal, 0.0, 0).unwrap();
    let mut buf = Vec::new();
    ds.write_csv(&mut buf).unwrap();
    let back = TomographyDataset::read_csv(buf.as_slice()).unwrap();
    assert_eq!(back, ds);
    let rho = reconstruct(&back).unwrap();
    let direct =
        simulate_kraus_pair(&ProbeState::plus().density(), phi, PairSelector::PairB).unwrap();
    assert!(rho.max_abs_diff(&direct) < 1e-12);
}

#[test]
fn thermometer_decision_from_noisy_data() {
    let (cold, hot) = baths();
    let probe = ProbeState::plus();
    let best = optimal_time(&probe, &cold, &hot).unwrap();
    let (rc, rh) = evolved_pair(&probe, &cold, &hot, best.tau).unwrap();
    let g = optimal_observable(&rc, &rh).unwrap();
    let threshold = (g.expectation(&rc) + g.expectation(&rh)) / 2.0;
    let noise = NoiseModel::new(0.01).unwrap();
    // With 1% intensity noise the sign of ⟨G⟩ − threshold identifies the bath.
    for seed in 0..50 {
        let c = simulate_measurement(&probe, &cold, best.tau, &noise, seed).unwrap();
        let h = simulate_measurement(&probe, &hot, best.tau, &noise, seed + 1000).unwrap();
        // G is positive on the cold-bath side.
        assert!(g.expectation(&c.combined) > threshold);
        assert!(g.expectation(&h.combined) < threshold);
    }
    let p = success_probability(&rc, &rh);
    assert!((p - 0.5 * (1.0 + 0.5 * separation(&rc, &rh))).abs() < 1e-15);
}

#[test]
fn curve_peak_agrees_with_optimizer() {
    let (cold, hot) = baths();
    let probe = ProbeState::ground();
    let taus: Vec<f64> = (0..=1000).map(|k| k as f64 * 1e-3).collect();
    let curve = discrimination_curve(&probe, &cold, &hot, &taus).unwrap();
    let peak = curve
        .iter()
        .max_by(|a, b| a.separation.total_cmp(&b.separation))
        .unwrap();
    let best = optimal_time(&probe, &cold, &hot).unwrap();
    assert!((peak.tau - best.tau).abs() <= 1e-3);
    assert!(best.separation >= peak.separation);
}

#[test]
fn calibration_round_trip_across_baths() {
    let (cold, hot) = baths();
    for k in 0..20 {
        let phi = k as f64 * PI / 20.0;
        let tc = tau_from_phase(phi, &cold).unwrap();
        let th = tau_from_phase(phi, &hot).unwrap();
        // Same phase, same damping: the times scale with 1/(1 + 2N̄).
        assert!((tc * 12.0 - th * 20.0).abs() < 1e-12);
        assert!((phase_from_tau(th, &hot).unwrap() - phi).abs() < 1e-12);
    }
}

#[test]
fn monte_carlo_spread_grows_with_noise() {
    let rho = evolve(&ProbeState::plus().density(), &baths().0, 0.1).unwrap();
    let mut last = 0.0;
    for sigma in [0.005, 0.01, 0.02] {
        let s = monte_carlo_errors(
            &rho,
            &NoiseModel::new(sigma).unwrap(),
            300,
            &Functional::Entropy,
            4,
        )
        .unwrap();
        assert!(s.std > last);
        last = s.std;
    }
    let exact = monte_carlo_errors(
        &DensityMatrix::maximally_mixed(),
        &NoiseModel::noiseless(),
        2,
        &Functional::Entropy,
        0,
    )
    .unwrap();
    assert!((exact.mean - 2f64.ln()).abs() < 1e-12 && exact.std == 0.0);
}
