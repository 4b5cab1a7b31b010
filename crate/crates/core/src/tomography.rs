//! Simulated six-setting polarisation tomography.
//!
//! Intensities are recorded for the analyser settings `H, V, D, A, R, L`,
//! perturbed by multiplicative Gaussian noise, inverted linearly through the
//! Stokes parameters and, when noise pushes the estimate outside the Bloch
//! ball, pulled back by clipping negative eigenvalues.
//!
//! Every random draw comes from a `ChaCha8Rng` seeded with an explicit
//! integer. Monte Carlo sample `i` of a run with master seed `m` uses seed
//! `m.wrapping_add(i)`, so results do not depend on execution order.

use std::io::{Read, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;

use crate::error::{out_of_range, Error, Result};
use crate::mat::ComplexMat2;
use crate::optics::AnalyzerSetting;
use crate::qubit::{DensityMatrix, Hamiltonian};
use crate::thermometry::{free_energy_change, Observable};

/// Detected intensity for a perfect projection, arbitrary units.
pub const DEFAULT_FLUX: f64 = 1000.0;

/// Multiplicative Gaussian intensity noise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseModel {
    relative_sigma: f64,
}

impl NoiseModel {
    pub fn new(relative_sigma: f64) -> Result<Self> {
        if !(0.0..0.5).contains(&relative_sigma) {
            return Err(out_of_range(
                "relative_sigma",
                relative_sigma,
                "must lie in [0, 0.5)",
            ));
        }
        Ok(Self { relative_sigma })
    }

    pub fn noiseless() -> Self {
        Self {
            relative_sigma: 0.0,
        }
    }

    pub fn relative_sigma(&self) -> f64 {
        self.relative_sigma
    }
}

/// Intensities for the six analyser settings, in [`AnalyzerSetting::ALL`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct TomographyDataset {
    intensities: [f64; 6],
    noise_sigma: f64,
    seed: u64,
}

impl TomographyDataset {
    pub fn new(intensities: [f64; 6], noise_sigma: f64, seed: u64) -> Result<Self> {
        if let Some(&bad) = intensities.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
            return Err(out_of_range(
                "intensity",
                bad,
                "must be finite and non-negative",
            ));
        }
        Ok(Self {
            intensities,
            noise_sigma,
            seed,
        })
    }

    pub fn intensity(&self, setting: AnalyzerSetting) -> f64 {
        self.intensities[setting_index(setting)]
    }

    pub fn intensities(&self) -> &[f64; 6] {
        &self.intensities
    }

    pub fn noise_sigma(&self) -> f64 {
        self.noise_sigma
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Writes the `setting,intensity,sigma,seed` audit table.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["setting", "intensity", "sigma", "seed"])?;
        for s in AnalyzerSetting::ALL {
            w.write_record([
                s.label().to_string(),
                format!("{:.16e}", self.intensity(s)),
                format!("{:.16e}", self.noise_sigma),
                self.seed.to_string(),
            ])?;
        }
        w.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let headers = r.headers()?.clone();
        if headers != vec!["setting", "intensity", "sigma", "seed"] {
            return Err(Error::InvalidArgument(format!(
                "unexpected header {headers:?}"
            )));
        }
        let mut intensities = [f64::NAN; 6];
        let mut sigma = 0.0;
        let mut seed = 0;
        for rec in r.records() {
            let rec = rec?;
            let setting = AnalyzerSetting::from_label(&rec[0])
                .ok_or_else(|| Error::InvalidArgument(format!("unknown setting {}", &rec[0])))?;
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| Error::InvalidArgument(format!("bad number {s:?}: {e}")))
            };
            intensities[setting_index(setting)] = parse(&rec[1])?;
            sigma = parse(&rec[2])?;
            seed = rec[3]
                .parse()
                .map_err(|e| Error::InvalidArgument(format!("bad seed: {e}")))?;
        }
        Self::new(intensities, sigma, seed)
    }
}

fn setting_index(s: AnalyzerSetting) -> usize {
    AnalyzerSetting::ALL
        .iter()
        .position(|&x| x == s)
        .expect("setting listed in ALL")
}

/// Noise-free intensities `flux · ⟨s|ρ|s⟩`.
pub fn ideal_intensities(rho: &DensityMatrix, flux: f64) -> [f64; 6] {
    AnalyzerSetting::ALL.map(|s| flux * rho.expectation(&ComplexMat2::projector(&s.ket())).max(0.0))
}

/// Applies seeded multiplicative noise to ideal intensities.
pub fn noisy_dataset(ideal: [f64; 6], noise: &NoiseModel, seed: u64) -> TomographyDataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma = noise.relative_sigma;
    let intensities = ideal.map(|i| {
        let g: f64 = StandardNormal.sample(&mut rng);
        (i * (1.0 + sigma * g)).max(0.0)
    });
    TomographyDataset {
        intensities,
        noise_sigma: sigma,
        seed,
    }
}

pub fn generate_dataset(rho: &DensityMatrix, noise: &NoiseModel, seed: u64) -> TomographyDataset {
    noisy_dataset(ideal_intensities(rho, DEFAULT_FLUX), noise, seed)
}

/// Stokes inversion, normalised by `I_H + I_V`. The result is Hermitian with
/// unit trace but may lie outside the Bloch ball.
pub fn linear_reconstruct(ds: &TomographyDataset) -> Result<ComplexMat2> {
    use AnalyzerSetting::*;
    let n = ds.intensity(H) + ds.intensity(V);
    if !(n > 0.0) {
        return Err(Error::ZeroFlux);
    }
    let s1 = (ds.intensity(H) - ds.intensity(V)) / n;
    let s2 = (ds.intensity(D) - ds.intensity(A)) / n;
    let s3 = (ds.intensity(R) - ds.intensity(L)) / n;
    // s1, s2, s3 are the z, x and y Bloch components.
    let off = num_complex::Complex64::new(0.5 * s2, -0.5 * s3);
    Ok(ComplexMat2::new(
        (0.5 * (1.0 + s1)).into(),
        off,
        off.conj(),
        (0.5 * (1.0 - s1)).into(),
    ))
}

/// Nearest-spectrum physical state: negative eigenvalues are clipped to zero
/// and the rest renormalised, keeping the eigenbasis.
pub fn project_physical(m: &ComplexMat2) -> Result<DensityMatrix> {
    let eig = crate::qubit::eig_hermitian2(m)?;
    // round-off negativity of rank-one states counts as physical
    if eig.values[1] >= -1e-14 {
        return DensityMatrix::new(*m);
    }
    let clipped = eig.values.map(|l| l.max(0.0));
    let total: f64 = clipped.iter().sum();
    if !(total > 0.0) {
        return Err(Error::InvalidState("no positive spectral weight".into()));
    }
    let out = eig.map_spectrum(|l| l.max(0.0) / total);
    DensityMatrix::new(out)
}

/// Linear reconstruction followed by [`project_physical`].
pub fn reconstruct(ds: &TomographyDataset) -> Result<DensityMatrix> {
    project_physical(&linear_reconstruct(ds)?)
}

/// `p ρ_a + (1 − p) ρ_b`.
pub fn combine_weighted(
    rho_a: &DensityMatrix,
    rho_b: &DensityMatrix,
    p: f64,
) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(out_of_range("p", p, "must lie in [0, 1]"));
    }
    let m = rho_a.matrix().scale_re(p) + rho_b.matrix().scale_re(1.0 - p);
    Ok(DensityMatrix::from_mat_unchecked(m))
}

/// Scalar quantity evaluated on each reconstructed state.
#[derive(Debug, Clone, Copy)]
pub enum Functional {
    Expectation(Observable),
    FreeEnergy {
        rho_in: DensityMatrix,
        temperature: f64,
        hamiltonian: Hamiltonian,
    },
    Entropy,
}

impl Functional {
    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<f64> {
        match self {
            Functional::Expectation(g) => Ok(g.expectation(rho)),
            Functional::FreeEnergy {
                rho_in,
                temperature,
                hamiltonian,
            } => Ok(free_energy_change(rho_in, rho, *temperature, hamiltonian)?.df),
            Functional::Entropy => Ok(rho.entropy()),
        }
    }
}

/// Sample mean and (n − 1)-normalised standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonteCarloSummary {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl MonteCarloSummary {
    pub fn from_samples(values: &[f64]) -> Self {
        let n = values.len();
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = if n > 1 {
            values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64
        } else {
            0.0
        };
        Self {
            mean,
            std: var.sqrt(),
            n,
        }
    }
}

/// Seed for Monte Carlo sample `index` of a run started from `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    master.wrapping_add(index)
}

/// Independent seed for sub-stream `stream` of a run seeded with `seed`
/// (splitmix64 finaliser over the pair).
pub fn stream_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Evaluates `f(seed)` for `n` derived seeds in parallel, returning results in
/// sample order.
pub fn run_samples<T, F>(n: usize, master_seed: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    (0..n as u64)
        .into_par_iter()
        .map(|i| f(derive_seed(master_seed, i)))
        .collect()
}

/// Monte Carlo error bar of `functional` under intensity noise.
pub fn monte_carlo_errors(
    rho_true: &DensityMatrix,
    noise: &NoiseModel,
    n_samples: usize,
    functional: &Functional,
    master_seed: u64,
) -> Result<MonteCarloSummary> {
    if n_samples < 2 {
        return Err(Error::InvalidArgument(format!(
            "Monte Carlo needs at least 2 samples, got {n_samples}"
        )));
    }
    let ideal = ideal_intensities(rho_true, DEFAULT_FLUX);
    let values = run_samples(n_samples, master_seed, |seed| {
        let rho = reconstruct(&noisy_dataset(ideal, noise, seed))?;
        functional.evaluate(&rho)
    })?;
    Ok(MonteCarloSummary::from_samples(&values))
}
