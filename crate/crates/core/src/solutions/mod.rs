//! Closed-form evaluation of the analytic solution families.
//!
//! Wave functions are reported as `ψ = Φ/Φ0` with `Φ0 = 1`. The coefficient
//! families share the ansatz `ψ = [1 − (1−q)(a x² + b x + c)]^{1/(1−q)}`; every
//! power of `ψ` is taken from one logarithm of the base polynomial so that
//! `ψ`, `ψ^q` and `ψ^{2−q}` sit on the same branch.

mod free;
mod special;

use num_complex::Complex64;

pub use free::{
    ansatz_log_psi, base_polynomial, coefficient_path, constants_from_initial, eval_ansatz, free_coeff_rates,
    free_coeffs, quadratic,
};
pub use special::{
    frozen_log_psi, frozen_psi, gaussian_limit_initial, gaussian_limit_log_psi, gaussian_limit_psi,
    harmonic_a_c, harmonic_coeffs, harmonic_ground_state, harmonic_quasistationary, harmonic_singular_time,
    plane_wave_coeffs, pulsating_coeffs, q3_pulsating, singular_packet_abs2, singular_packet_coeffs,
    zero_curvature_coeffs,
};

use crate::error::{NrtError, Result};
use crate::qcalc;

/// Physical constants. `k` is the spring constant of `V(x) = ½Kx²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    pub q: f64,
    pub hbar: f64,
    pub m: f64,
    pub k: Option<f64>,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self { q: 1.0, hbar: 1.0, m: 1.0, k: None }
    }
}

impl ModelParams {
    /// Dimensionless units (`ħ = m = 1`) at the given `q`.
    pub fn with_q(q: f64) -> Self {
        Self { q, ..Self::default() }
    }

    pub fn with_spring(mut self, k: f64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !self.q.is_finite() {
            return Err(NrtError::InvalidParams(format!("q must be finite, got {}", self.q)));
        }
        if !(self.hbar > 0.0) || !self.hbar.is_finite() {
            return Err(NrtError::InvalidParams(format!("hbar must be > 0, got {}", self.hbar)));
        }
        if !(self.m > 0.0) || !self.m.is_finite() {
            return Err(NrtError::InvalidParams(format!("m must be > 0, got {}", self.m)));
        }
        if let Some(k) = self.k {
            if !(k >= 0.0) || !k.is_finite() {
                return Err(NrtError::InvalidParams(format!("K must be ≥ 0, got {k}")));
            }
        }
        Ok(())
    }
}

/// External potential in the governing equation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Potential {
    Free,
    /// `V(x) = ½Kx²`
    Harmonic {
        k: f64,
    },
}

impl Potential {
    pub fn value(&self, x: f64) -> f64 {
        match *self {
            Potential::Free => 0.0,
            Potential::Harmonic { k } => 0.5 * k * x * x,
        }
    }
}

/// Ansatz coefficients at time `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientState {
    pub t: f64,
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
}

/// Integration constants `α = 1/a(0)`, `β = b(0)/a(0)` and `γ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PacketConstants {
    pub alpha: Complex64,
    pub beta: Complex64,
    pub gamma: Complex64,
}

/// A q-plane wave mode with the de Broglie quantities attached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveMode {
    pub k: f64,
    pub w: f64,
    pub energy: f64,
    pub momentum: f64,
}

impl PlaneWaveMode {
    /// `w = ħk²/(2m)`, `E = ħw`, `p = ħk`.
    pub fn new(k: f64, params: &ModelParams) -> Self {
        let w = params.hbar * k * k / (2.0 * params.m);
        Self { k, w, energy: params.hbar * w, momentum: params.hbar * k }
    }
}

/// The analytic solution families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SolutionFamily {
    FreeQGaussian {
        constants: PacketConstants,
    },
    QPlaneWave {
        mode: PlaneWaveMode,
    },
    /// General `a = 0` packet, `b = b_c`, `c = −iħb_c²t/(2m) + c_0`.
    ZeroCurvature {
        b_c: Complex64,
        c_0: Complex64,
    },
    SingularPacket {
        b_c: f64,
        t0: f64,
    },
    PulsatingQ3 {
        a_c: Complex64,
        b_c: Complex64,
        c_1: Complex64,
    },
    Frozen {
        b: f64,
        c: f64,
    },
    HarmonicQuasiStationary {
        a_c: f64,
    },
    GaussianLimit {
        k0: f64,
        alpha: f64,
    },
}

impl SolutionFamily {
    pub fn free_from_initial(
        a0: Complex64,
        b0: Complex64,
        c0: Complex64,
        params: &ModelParams,
    ) -> Result<Self> {
        Ok(Self::FreeQGaussian { constants: constants_from_initial(a0, b0, c0, params.q)? })
    }

    pub fn plane_wave(k: f64, params: &ModelParams) -> Self {
        Self::QPlaneWave { mode: PlaneWaveMode::new(k, params) }
    }

    pub fn harmonic(params: &ModelParams) -> Result<Self> {
        Ok(Self::HarmonicQuasiStationary { a_c: harmonic_a_c(params)? })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::FreeQGaussian { .. } => "free-q-gaussian",
            Self::QPlaneWave { .. } => "q-plane-wave",
            Self::ZeroCurvature { .. } => "zero-curvature",
            Self::SingularPacket { .. } => "singular-packet",
            Self::PulsatingQ3 { .. } => "pulsating-q3",
            Self::Frozen { .. } => "frozen",
            Self::HarmonicQuasiStationary { .. } => "harmonic-quasi-stationary",
            Self::GaussianLimit { .. } => "gaussian-limit",
        }
    }

    /// The `q` of the equation this family solves.
    pub fn effective_q(&self, params: &ModelParams) -> f64 {
        match self {
            Self::GaussianLimit { .. } => 1.0,
            _ => params.q,
        }
    }

    /// The potential of the governing equation.
    pub fn potential(&self, params: &ModelParams) -> Potential {
        match self {
            Self::HarmonicQuasiStationary { .. } => Potential::Harmonic { k: params.k.unwrap_or(0.0) },
            _ => Potential::Free,
        }
    }

    /// Checks the family's parameter constraints against `params`.
    pub fn validate(&self, params: &ModelParams) -> Result<()> {
        params.validate()?;
        let q = params.q;
        let near = |target: f64| (q - target).abs() < qcalc::Q_ONE_EPS;
        match *self {
            Self::FreeQGaussian { constants } => {
                if near(3.0) {
                    return Err(NrtError::InvalidParams("q = 3 is served by the pulsating-q3 family".into()));
                }
                if constants.alpha == Complex64::new(0.0, 0.0) {
                    return Err(NrtError::DegenerateInitial);
                }
            }
            Self::QPlaneWave { mode } => {
                let expected = PlaneWaveMode::new(mode.k, params);
                if (expected.w - mode.w).abs() > 1e-12 * expected.w.abs().max(1.0) {
                    return Err(NrtError::InvalidParams(
                        "plane-wave mode off the dispersion relation".into(),
                    ));
                }
            }
            Self::ZeroCurvature { .. } => {}
            Self::SingularPacket { b_c, .. } => {
                if b_c == 0.0 {
                    return Err(NrtError::DegenerateInput("singular packet needs b_c ≠ 0".into()));
                }
            }
            Self::PulsatingQ3 { a_c, .. } => {
                if !near(3.0) {
                    return Err(NrtError::InvalidParams("pulsating family needs q = 3".into()));
                }
                if a_c == Complex64::new(0.0, 0.0) {
                    return Err(NrtError::DegenerateInput("pulsating packet needs a_c ≠ 0".into()));
                }
            }
            Self::Frozen { b, c } => {
                if b == 0.0 || c == 0.0 {
                    return Err(NrtError::DegenerateInput("frozen solution needs b ≠ 0 and c ≠ 0".into()));
                }
                if near(2.0) {
                    return Err(NrtError::InvalidParams("frozen solution undefined at q = 2".into()));
                }
            }
            Self::HarmonicQuasiStationary { a_c } => {
                let expected = harmonic_a_c(params)?;
                if qcalc::is_q_one(q) {
                    return Err(NrtError::Domain("quasi-stationary packet needs q ≠ 1".into()));
                }
                if (expected - a_c).abs() > 1e-12 * expected {
                    return Err(NrtError::InvalidParams(format!(
                        "a_c = {a_c} does not match the fixed point {expected}"
                    )));
                }
            }
            Self::GaussianLimit { alpha, .. } => {
                if !(alpha > 0.0) {
                    return Err(NrtError::Domain("Gaussian width α must be > 0".into()));
                }
            }
        }
        Ok(())
    }

    /// Ansatz coefficients at `t`, for the families that have them.
    pub fn coefficients(&self, t: f64, params: &ModelParams) -> Result<Option<CoefficientState>> {
        Ok(Some(match *self {
            Self::FreeQGaussian { constants } => free_coeffs(t, &constants, params)?,
            Self::QPlaneWave { mode } => plane_wave_coeffs(mode.k, t, params),
            Self::ZeroCurvature { b_c, c_0 } => zero_curvature_coeffs(b_c, c_0, t, params),
            Self::SingularPacket { b_c, t0 } => singular_packet_coeffs(b_c, t0, t, params),
            Self::PulsatingQ3 { a_c, b_c, c_1 } => pulsating_coeffs(a_c, b_c, c_1, t, params)?,
            Self::HarmonicQuasiStationary { .. } => harmonic_coeffs(t, params)?,
            Self::Frozen { .. } | Self::GaussianLimit { .. } => return Ok(None),
        }))
    }

    /// Time derivatives `(ȧ, ḃ, ċ)` of the closed-form coefficients,
    /// differentiated directly rather than read off the coefficient equations.
    pub fn coefficient_rates(
        &self,
        t: f64,
        params: &ModelParams,
    ) -> Result<Option<(Complex64, Complex64, Complex64)>> {
        let zero = Complex64::new(0.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        let (hbar, m) = (params.hbar, params.m);
        Ok(Some(match *self {
            Self::FreeQGaussian { constants } => free_coeff_rates(t, &constants, params)?,
            Self::QPlaneWave { mode } => (zero, zero, Complex64::new(0.0, mode.w)),
            Self::ZeroCurvature { b_c, .. } => (zero, zero, -i * hbar * b_c * b_c / (2.0 * m)),
            Self::SingularPacket { b_c, .. } => {
                (zero, zero, Complex64::new(0.0, -hbar * b_c * b_c / (2.0 * m)))
            }
            Self::PulsatingQ3 { a_c, c_1, .. } => {
                let rate = 2.0 * i * hbar * a_c / m;
                let phase = qcalc::checked_exp(rate * t)?;
                (zero, zero, c_1 * rate * phase)
            }
            Self::HarmonicQuasiStationary { a_c } => {
                let q = params.q;
                let phase = Complex64::from_polar(1.0, -(1.0 - q) * hbar * a_c * t / m);
                (zero, zero, i * hbar * a_c / m * phase)
            }
            Self::Frozen { .. } | Self::GaussianLimit { .. } => return Ok(None),
        }))
    }

    /// `log ψ(x, t)` on the branch used for all powers of `ψ`.
    pub fn log_psi(&self, x: f64, t: f64, params: &ModelParams) -> Result<Complex64> {
        match *self {
            Self::Frozen { b, c } => frozen_log_psi(b, c, params.q, x),
            Self::GaussianLimit { k0, alpha } => gaussian_limit_log_psi(k0, alpha, t, x, params),
            _ => {
                let state = self.coefficients(t, params)?.expect("coefficient family");
                ansatz_log_psi(&state, params.q, x)
            }
        }
    }

    /// `ψ(x, t)`.
    pub fn psi(&self, x: f64, t: f64, params: &ModelParams) -> Result<Complex64> {
        match *self {
            Self::Frozen { b, c } => frozen_psi(b, c, params.q, x),
            Self::GaussianLimit { k0, alpha } => gaussian_limit_psi(k0, alpha, t, x, params),
            _ => {
                let state = self.coefficients(t, params)?.expect("coefficient family");
                eval_ansatz(&state, params.q, x)
            }
        }
    }
}
