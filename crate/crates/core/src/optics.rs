//! Jones-calculus model of the displaced Sagnac interferometer.
//!
//! The input polarisation qubit is split by a polarising beam splitter into
//! the clockwise (`|H⟩`) and counter-clockwise (`|V⟩`) loops. In each loop
//! the light crosses a half-wave plate at 22.5°, one half of a spatial light
//! modulator and a second half-wave plate at 22.5°. The modulator imparts the
//! birefringent phase `diag(e^{iφ/2}, e^{−iφ/2})` on one loop only. Back at
//! the splitter, light that kept its loop's polarisation leaves through port 1
//! and light whose polarisation was flipped leaves through port 2.
//!
//! With the phase on the counter-clockwise loop the device acts on the
//! polarisation as the Kraus pair `(E0, E1)` with `γ = sin²(φ/2)`: port 1
//! carries `E0` and port 2 carries `E1`. With the mask inverted it realises
//! `(E2, E3)`.

use crate::error::{out_of_range, Result};
use crate::mat::{re, Complex64, ComplexMat2, Ket, ZERO};
use crate::qubit::DensityMatrix;
use std::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarisation {
    H,
    V,
}

impl Polarisation {
    fn index(self) -> usize {
        match self {
            Polarisation::H => 0,
            Polarisation::V => 1,
        }
    }
}

/// Propagation direction inside the Sagnac loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Loop {
    Cw,
    Ccw,
}

/// Output port of the interferometer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Port {
    Out1,
    Out2,
}

/// Which pair of spatial modes a [`PolPathState`] lives on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Loops,
    Outputs,
}

/// Complex amplitudes over polarisation × path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolPathState {
    /// `amps[path][pol]`; path 0 is cw/out1, path 1 is ccw/out2.
    amps: [[Complex64; 2]; 2],
    stage: Stage,
}

impl PolPathState {
    pub fn stage(&self) -> Stage {
        self.stage
    }

    pub fn loop_amplitude(&self, path: Loop, pol: Polarisation) -> Complex64 {
        debug_assert_eq!(self.stage, Stage::Loops);
        self.amps[loop_index(path)][pol.index()]
    }

    pub fn port_amplitude(&self, port: Port, pol: Polarisation) -> Complex64 {
        debug_assert_eq!(self.stage, Stage::Outputs);
        self.amps[port_index(port)][pol.index()]
    }

    /// Unnormalised polarisation state leaving `port`.
    pub fn port_ket(&self, port: Port) -> Ket {
        debug_assert_eq!(self.stage, Stage::Outputs);
        self.amps[port_index(port)]
    }

    pub fn port_probability(&self, port: Port) -> f64 {
        let k = self.port_ket(port);
        k[0].norm_sqr() + k[1].norm_sqr()
    }

    pub fn total_intensity(&self) -> f64 {
        self.amps.iter().flatten().map(|a| a.norm_sqr()).sum()
    }

    /// Applies the same Jones matrix to both spatial modes.
    pub fn apply_to_both(&self, m: &ComplexMat2) -> Self {
        Self {
            amps: [m.apply(&self.amps[0]), m.apply(&self.amps[1])],
            stage: self.stage,
        }
    }
}

fn loop_index(l: Loop) -> usize {
    match l {
        Loop::Cw => 0,
        Loop::Ccw => 1,
    }
}

fn port_index(p: Port) -> usize {
    match p {
        Port::Out1 => 0,
        Port::Out2 => 1,
    }
}

/// Birefringent phase displayed on one half of the modulator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseMask {
    phi: f64,
    target: Loop,
}

impl PhaseMask {
    pub fn new(phi: f64, target: Loop) -> Result<Self> {
        if !(0.0..=PI).contains(&phi) {
            return Err(out_of_range("phi", phi, "phase mask domain is [0, π]"));
        }
        Ok(Self { phi, target })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn target(&self) -> Loop {
        self.target
    }
}

/// Which Kraus pair the interferometer is programmed to implement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairSelector {
    /// `(E0, E1)`: damps `|V⟩` into `|H⟩`; phase on the counter-clockwise loop.
    PairA,
    /// `(E2, E3)`: damps `|H⟩` into `|V⟩`; phase on the clockwise loop.
    PairB,
}

impl PairSelector {
    pub const ALL: [PairSelector; 2] = [PairSelector::PairA, PairSelector::PairB];

    pub fn masked_loop(self) -> Loop {
        match self {
            PairSelector::PairA => Loop::Ccw,
            PairSelector::PairB => Loop::Cw,
        }
    }

    /// The polarisation whose amplitude leaks into port 2.
    pub fn damped(self) -> Polarisation {
        match self {
            PairSelector::PairA => Polarisation::V,
            PairSelector::PairB => Polarisation::H,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PairSelector::PairA => "E0E1",
            PairSelector::PairB => "E2E3",
        }
    }
}

/// Half-wave plate with its fast axis at `angle` (radians), up to global phase.
pub fn jones_hwp(angle: f64) -> ComplexMat2 {
    let (s, c) = (2.0 * angle).sin_cos();
    ComplexMat2::real(c, s, s, -c)
}

/// Quarter-wave plate with its fast axis at `angle` (radians), up to global phase.
pub fn jones_qwp(angle: f64) -> ComplexMat2 {
    let (s, c) = angle.sin_cos();
    let i = Complex64::new(0.0, 1.0);
    let cross = Complex64::new(s * c, -s * c);
    ComplexMat2::new(
        re(c * c) + i * (s * s),
        cross,
        cross,
        re(s * s) + i * (c * c),
    )
}

/// The half-wave plate at 22.5° that maps `|H⟩ → |+⟩`, `|V⟩ → |−⟩`.
pub fn hadamard_plate() -> ComplexMat2 {
    jones_hwp(FRAC_PI_8)
}

/// Birefringent modulator phase `diag(e^{iφ/2}, e^{−iφ/2})`.
pub fn slm_matrix(phi: f64) -> ComplexMat2 {
    ComplexMat2::new(
        Complex64::from_polar(1.0, 0.5 * phi),
        ZERO,
        ZERO,
        Complex64::from_polar(1.0, -0.5 * phi),
    )
}

/// Input splitter: `α|H⟩ + β|V⟩ ↦ α|H⟩_cw + β|V⟩_ccw`.
pub fn pbs_split(input: &Ket) -> PolPathState {
    let mut amps = [[ZERO; 2]; 2];
    amps[loop_index(Loop::Cw)][Polarisation::H.index()] = input[0];
    amps[loop_index(Loop::Ccw)][Polarisation::V.index()] = input[1];
    PolPathState {
        amps,
        stage: Stage::Loops,
    }
}

pub fn apply_slm(state: &PolPathState, mask: &PhaseMask) -> PolPathState {
    debug_assert_eq!(state.stage, Stage::Loops);
    let mut out = *state;
    let k = loop_index(mask.target);
    out.amps[k] = slm_matrix(mask.phi).apply(&state.amps[k]);
    out
}

/// Recombination on the splitter: the cw loop's `H` and the ccw loop's `V`
/// leave through port 1, the flipped components through port 2.
pub fn pbs_recombine(state: &PolPathState) -> PolPathState {
    debug_assert_eq!(state.stage, Stage::Loops);
    let (h, v) = (Polarisation::H.index(), Polarisation::V.index());
    let cw = state.amps[loop_index(Loop::Cw)];
    let ccw = state.amps[loop_index(Loop::Ccw)];
    let mut amps = [[ZERO; 2]; 2];
    amps[port_index(Port::Out1)][h] = cw[h];
    amps[port_index(Port::Out1)][v] = ccw[v];
    amps[port_index(Port::Out2)][h] = ccw[h];
    amps[port_index(Port::Out2)][v] = cw[v];
    PolPathState {
        amps,
        stage: Stage::Outputs,
    }
}

/// Full pass through the interferometer programmed for `pair`.
pub fn sagnac_transform(input: &Ket, phi: f64, pair: PairSelector) -> Result<PolPathState> {
    let mask = PhaseMask::new(phi, pair.masked_loop())?;
    let hg = hadamard_plate();
    let inside = pbs_split(input).apply_to_both(&hg);
    let inside = apply_slm(&inside, &mask).apply_to_both(&hg);
    Ok(pbs_recombine(&inside))
}

/// Output density matrix with both ports collected together.
pub fn simulate_kraus_pair(
    rho: &DensityMatrix,
    phi: f64,
    pair: PairSelector,
) -> Result<DensityMatrix> {
    let eig = rho.eigen();
    let mut out = ComplexMat2::zero();
    for (&weight, ket) in eig.values.iter().zip(eig.vectors.iter()) {
        let weight = weight.max(0.0);
        if weight == 0.0 {
            continue;
        }
        let state = sagnac_transform(ket, phi, pair)?;
        for port in [Port::Out1, Port::Out2] {
            out = out + ComplexMat2::projector(&state.port_ket(port)).scale_re(weight);
        }
    }
    Ok(DensityMatrix::from_mat_unchecked(out))
}

/// Projective settings of a polarisation analyser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AnalyzerSetting {
    H,
    V,
    D,
    A,
    R,
    L,
}

impl AnalyzerSetting {
    pub const ALL: [AnalyzerSetting; 6] = [
        AnalyzerSetting::H,
        AnalyzerSetting::V,
        AnalyzerSetting::D,
        AnalyzerSetting::A,
        AnalyzerSetting::R,
        AnalyzerSetting::L,
    ];

    pub fn label(self) -> &'static str {
        match self {
            AnalyzerSetting::H => "H",
            AnalyzerSetting::V => "V",
            AnalyzerSetting::D => "D",
            AnalyzerSetting::A => "A",
            AnalyzerSetting::R => "R",
            AnalyzerSetting::L => "L",
        }
    }

    pub fn from_label(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|a| a.label() == s)
    }

    /// The polarisation state this setting transmits.
    pub fn ket(self) -> Ket {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        match self {
            AnalyzerSetting::H => [re(1.0), ZERO],
            AnalyzerSetting::V => [ZERO, re(1.0)],
            AnalyzerSetting::D => [re(s), re(s)],
            AnalyzerSetting::A => [re(s), re(-s)],
            AnalyzerSetting::R => [re(s), Complex64::new(0.0, s)],
            AnalyzerSetting::L => [re(s), Complex64::new(0.0, -s)],
        }
    }

    /// `(quarter-wave, half-wave)` plate angles in radians, QWP first,
    /// followed by a splitter transmitting `|H⟩`.
    pub fn plate_angles(self) -> (f64, f64) {
        let q90 = 2.0 * FRAC_PI_4;
        let q135 = 3.0 * FRAC_PI_4;
        match self {
            AnalyzerSetting::H => (q90, 0.0),
            AnalyzerSetting::V => (q90, FRAC_PI_4),
            AnalyzerSetting::D => (q135, FRAC_PI_8),
            AnalyzerSetting::A => (q135, 3.0 * FRAC_PI_8),
            AnalyzerSetting::R => (q90, FRAC_PI_8),
            AnalyzerSetting::L => (q90, 3.0 * FRAC_PI_8),
        }
    }
}

/// Intensity transmitted by the analyser on `port`, not normalised by the
/// port probability.
pub fn analyzer_intensity(state: &PolPathState, port: Port, setting: AnalyzerSetting) -> f64 {
    let (q, h) = setting.plate_angles();
    let k = (jones_hwp(h) * jones_qwp(q)).apply(&state.port_ket(port));
    k[0].norm_sqr()
}

/// Analyser intensity summed over both output ports.
pub fn collected_intensity(state: &PolPathState, setting: AnalyzerSetting) -> f64 {
    analyzer_intensity(state, Port::Out1, setting) + analyzer_intensity(state, Port::Out2, setting)
}
