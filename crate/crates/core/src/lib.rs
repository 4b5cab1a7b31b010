//! # qthermo
//!
//! Simulation of a single-qubit thermometer that tells a cold bath from a hot
//! one.
//!
//! A qubit probe is prepared in a pure state, left in contact with a thermal
//! bath for a dimensionless time `τ`, and then measured. Contact with the bath
//! is a generalized amplitude damping (GAD) channel. The crate provides:
//!
//! * [`qubit`]: 2×2 states, Bloch vectors, entropy and energy;
//! * [`channel`]: the GAD channel as Kraus operators, as a Bloch-vector map
//!   and as the closed-form Markovian solution, plus the calibration curves
//!   linking `(N̄, τ)` to `(p, γ)`, phases and temperatures;
//! * [`thermometry`]: the optimal discrimination observable, separation
//!   curves, the optimal interaction time and free-energy diagnostics;
//! * [`optics`]: a Jones-calculus model of the Sagnac interferometer that
//!   realises the channel on polarisation;
//! * [`tomography`]: noisy six-setting tomography with Monte Carlo error bars;
//! * [`pipeline`]: the complete simulated experiment.
//!
//! Index 0 of every matrix is the excited level (`|H⟩`), index 1 the ground
//! level (`|V⟩`). Energies are in units of ħω, temperatures in ħω/k_B and
//! entropies in k_B.
//!
//! ```
//! use qthermo::channel::BathSpec;
//! use qthermo::qubit::ProbeState;
//! use qthermo::thermometry::optimal_time;
//!
//! let cold = BathSpec::new(5.5)?;
//! let hot = BathSpec::new(9.5)?;
//! let best = optimal_time(&ProbeState::ground(), &cold, &hot)?;
//! // Discrimination peaks well before the probe thermalises.
//! assert!(best.separation > 1.0 / 12.0 - 1.0 / 20.0);
//! # Ok::<(), qthermo::Error>(())
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod channel;
pub mod error;
pub mod mat;
pub mod optics;
pub mod pipeline;
pub mod qubit;
pub mod thermometry;
pub mod tomography;

pub use error::{Error, Result};
pub use mat::{Complex64, ComplexMat2, Ket};
pub use qubit::{BlochVector, DensityMatrix, Hamiltonian, ProbeState};

// The guide under `book/` is compiled here so its snippets run as doctests.
#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
pub struct ReadmeDoctests;

#[cfg(doctest)]
pub mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/states.md")]
    pub mod states {}
    #[doc = include_str!("../../../book/src/channel.md")]
    pub mod channel {}
    #[doc = include_str!("../../../book/src/discrimination.md")]
    pub mod discrimination {}
    #[doc = include_str!("../../../book/src/free_energy.md")]
    pub mod free_energy {}
    #[doc = include_str!("../../../book/src/optics.md")]
    pub mod optics {}
    #[doc = include_str!("../../../book/src/tomography.md")]
    pub mod tomography {}
}
