//! Qubit states, Bloch-sphere conversions and thermodynamic functionals.
//!
//! Basis convention used everywhere: index 0 is the excited level `|0⟩`,
//! encoded optically as horizontal polarisation `|H⟩`; index 1 is the ground
//! level `|1⟩`, encoded as vertical polarisation `|V⟩`. Energies are in units
//! of ħω, entropies in units of k_B (natural log), temperatures in ħω/k_B.

use std::f64::consts::PI;

use crate::error::{out_of_range, Error, Result};
use crate::mat::{re, Complex64, ComplexMat2, Ket, ONE, ZERO};

/// Tolerance used when accepting matrices from outside the crate.
pub const INPUT_TOL: f64 = 1e-10;
/// Tolerance on the Bloch-vector norm.
pub const BLOCH_TOL: f64 = 1e-12;

/// Bloch vector `r` with `ρ = (I + r·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BlochVector {
    pub rx: f64,
    pub ry: f64,
    pub rz: f64,
}

impl BlochVector {
    pub const fn new(rx: f64, ry: f64, rz: f64) -> Self {
        Self { rx, ry, rz }
    }

    pub fn norm(&self) -> f64 {
        (self.rx * self.rx + self.ry * self.ry + self.rz * self.rz).sqrt()
    }

    pub fn distance(&self, other: &BlochVector) -> f64 {
        BlochVector::new(self.rx - other.rx, self.ry - other.ry, self.rz - other.rz).norm()
    }

    pub fn max_abs_diff(&self, other: &BlochVector) -> f64 {
        (self.rx - other.rx)
            .abs()
            .max((self.ry - other.ry).abs())
            .max((self.rz - other.rz).abs())
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.rx, self.ry, self.rz]
    }
}

/// Initial probe preparation `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeState {
    theta: f64,
    relative_phase: f64,
}

impl ProbeState {
    pub fn new(theta: f64) -> Result<Self> {
        Self::with_phase(theta, 0.0)
    }

    pub fn with_phase(theta: f64, relative_phase: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(out_of_range("theta", theta, "must lie in [0, π]"));
        }
        if !relative_phase.is_finite() {
            return Err(out_of_range(
                "relative_phase",
                relative_phase,
                "must be finite",
            ));
        }
        Ok(Self {
            theta,
            relative_phase,
        })
    }

    /// `|H⟩`, the excited level.
    pub fn excited() -> Self {
        Self {
            theta: 0.0,
            relative_phase: 0.0,
        }
    }

    /// `|V⟩`, the ground level.
    pub fn ground() -> Self {
        Self {
            theta: PI,
            relative_phase: 0.0,
        }
    }

    /// `|+⟩ = (|H⟩ + |V⟩)/√2`.
    pub fn plus() -> Self {
        Self {
            theta: PI / 2.0,
            relative_phase: 0.0,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn relative_phase(&self) -> f64 {
        self.relative_phase
    }

    pub fn ket(&self) -> Ket {
        ket_from_probe(self)
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_ket(&self.ket())
    }

    pub fn bloch(&self) -> BlochVector {
        let (s, c) = self.theta.sin_cos();
        BlochVector::new(
            s * self.relative_phase.cos(),
            s * self.relative_phase.sin(),
            c,
        )
    }
}

pub fn ket_from_probe(probe: &ProbeState) -> Ket {
    let (s, c) = (probe.theta / 2.0).sin_cos();
    [re(c), Complex64::from_polar(s, probe.relative_phase)]
}

/// Qubit Hamiltonian `H_S = (ħω/2) σ_z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hamiltonian {
    omega: f64,
}

impl Hamiltonian {
    pub fn new(omega: f64) -> Result<Self> {
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(out_of_range("omega", omega, "must be positive and finite"));
        }
        Ok(Self { omega })
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn matrix(&self) -> ComplexMat2 {
        ComplexMat2::pauli_z().scale_re(self.omega / 2.0)
    }
}

impl Default for Hamiltonian {
    fn default() -> Self {
        Self { omega: 1.0 }
    }
}

/// Spectral decomposition of a Hermitian 2×2 matrix.
#[derive(Debug, Clone, Copy)]
pub struct Eigen2 {
    /// Sorted descending.
    pub values: [f64; 2],
    /// `vectors[k]` belongs to `values[k]`.
    pub vectors: [Ket; 2],
}

impl Eigen2 {
    /// `Σ f(λ_k) |v_k⟩⟨v_k|`
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMat2 {
        self.values
            .iter()
            .zip(self.vectors.iter())
            .map(|(&l, v)| ComplexMat2::projector(v).scale_re(f(l)))
            .sum()
    }

    pub fn reconstruct(&self) -> ComplexMat2 {
        self.map_spectrum(|l| l)
    }
}

/// Closed-form eigen-decomposition of a Hermitian 2×2 matrix.
///
/// The second eigenvector is built as the orthogonal complement of the first,
/// so the returned basis is orthonormal to machine precision.
pub fn eig_hermitian2(m: &ComplexMat2) -> Result<Eigen2> {
    let defect = m.hermiticity_defect();
    if !(defect <= INPUT_TOL) {
        return Err(Error::NonHermitian { defect });
    }
    let a = m.get(0, 0).re;
    let d = m.get(1, 1).re;
    let b = (m.get(0, 1) + m.get(1, 0).conj()) * 0.5;

    let mean = 0.5 * (a + d);
    let half_diff = 0.5 * (a - d);
    let radius = half_diff.hypot(b.norm());
    let values = [mean + radius, mean - radius];

    let v0: Ket = if b.norm() == 0.0 {
        if a >= d {
            [ONE, ZERO]
        } else {
            [ZERO, ONE]
        }
    } else {
        let raw: Ket = if half_diff >= 0.0 {
            [re(half_diff + radius), b.conj()]
        } else {
            [b, re(radius - half_diff)]
        };
        let n = (raw[0].norm_sqr() + raw[1].norm_sqr()).sqrt();
        [raw[0] / n, raw[1] / n]
    };
    let v1: Ket = [-v0[1].conj(), v0[0].conj()];
    Ok(Eigen2 {
        values,
        vectors: [v0, v1],
    })
}

/// A valid single-qubit density matrix: Hermitian, unit trace, PSD.
#[derive(Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    mat: ComplexMat2,
}

impl std::fmt::Debug for DensityMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "DensityMatrix({:?})", self.mat)
    }
}

impl DensityMatrix {
    /// Validates an externally supplied matrix at tolerance [`INPUT_TOL`].
    pub fn new(mat: ComplexMat2) -> Result<Self> {
        if !mat.is_finite() {
            return Err(Error::InvalidState("non-finite entries".into()));
        }
        let eig = eig_hermitian2(&mat)?;
        let tr = mat.trace();
        if (tr - ONE).norm() > INPUT_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        if eig.values[1] < -INPUT_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {}",
                eig.values[1]
            )));
        }
        Ok(Self { mat })
    }

    /// For results of operations that preserve validity by construction.
    pub(crate) fn from_mat_unchecked(mat: ComplexMat2) -> Self {
        debug_assert!(mat.is_hermitian(1e-9), "{mat:?}");
        Self { mat }
    }

    pub fn from_ket(k: &Ket) -> Self {
        let n = k[0].norm_sqr() + k[1].norm_sqr();
        Self::from_mat_unchecked(ComplexMat2::projector(k).scale_re(1.0 / n))
    }

    pub fn from_bloch(r: &BlochVector) -> Result<Self> {
        density_from_bloch(r)
    }

    pub fn maximally_mixed() -> Self {
        Self::from_mat_unchecked(ComplexMat2::diag(0.5, 0.5))
    }

    /// `|0⟩⟨0| = |H⟩⟨H|`
    pub fn excited() -> Self {
        Self::from_mat_unchecked(ComplexMat2::diag(1.0, 0.0))
    }

    /// `|1⟩⟨1| = |V⟩⟨V|`
    pub fn ground() -> Self {
        Self::from_mat_unchecked(ComplexMat2::diag(0.0, 1.0))
    }

    pub fn matrix(&self) -> &ComplexMat2 {
        &self.mat
    }

    pub fn bloch(&self) -> BlochVector {
        bloch_from_density(self)
    }

    pub fn eigen(&self) -> Eigen2 {
        eig_hermitian2(&self.mat).expect("density matrices are Hermitian")
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        let r = self.bloch().norm();
        0.5 * (1.0 + r * r)
    }

    pub fn entropy(&self) -> f64 {
        von_neumann_entropy(self)
    }

    pub fn energy(&self, h: &Hamiltonian) -> f64 {
        internal_energy(self, h)
    }

    /// `Re Tr[ρ A]`
    pub fn expectation(&self, op: &ComplexMat2) -> f64 {
        let t = (self.mat * *op).trace();
        debug_assert!(
            !op.is_hermitian(1e-12) || t.im.abs() < 1e-12,
            "imaginary residual {}",
            t.im
        );
        t.re
    }

    /// Uhlmann fidelity in its squared form, `(Tr√(√ρ σ √ρ))²`.
    ///
    /// For qubits this reduces to `Tr[ρσ] + 2√(det ρ · det σ)`.
    pub fn fidelity(&self, other: &DensityMatrix) -> f64 {
        let overlap = (self.mat * other.mat).trace().re;
        let dets = self.mat.det().re.max(0.0) * other.mat.det().re.max(0.0);
        (overlap + 2.0 * dets.sqrt()).clamp(0.0, 1.0)
    }

    pub fn max_abs_diff(&self, other: &DensityMatrix) -> f64 {
        self.mat.max_abs_diff(&other.mat)
    }
}

pub fn density_from_bloch(r: &BlochVector) -> Result<DensityMatrix> {
    let n = r.norm();
    if !(n <= 1.0 + BLOCH_TOL) {
        return Err(Error::InvalidState(format!(
            "Bloch vector norm {n} exceeds 1"
        )));
    }
    let off = Complex64::new(r.rx, -r.ry) * 0.5;
    Ok(DensityMatrix::from_mat_unchecked(ComplexMat2::new(
        re(0.5 * (1.0 + r.rz)),
        off,
        off.conj(),
        re(0.5 * (1.0 - r.rz)),
    )))
}

pub fn bloch_from_density(rho: &DensityMatrix) -> BlochVector {
    let m = rho.matrix();
    // ρ01 = (rx − i ry)/2
    let off = m.get(0, 1) + m.get(1, 0).conj();
    BlochVector::new(off.re, -off.im, (m.get(0, 0) - m.get(1, 1)).re)
}

/// `−Σ λ ln λ` with `0 ln 0 = 0`, in units of k_B.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    rho.eigen()
        .values
        .iter()
        .map(|&l| l.clamp(0.0, 1.0))
        .filter(|&l| l > 0.0)
        .map(|l| -l * l.ln())
        .sum()
}

/// `Tr[H_S ρ]`, in units of ħω.
pub fn internal_energy(rho: &DensityMatrix, h: &Hamiltonian) -> f64 {
    rho.expectation(&h.matrix())
}
