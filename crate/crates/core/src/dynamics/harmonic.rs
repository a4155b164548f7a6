//! Integration constant of the harmonic `a(t)` equation.
//!
//! With `κ = √(mK/(2ħ²(3−q)))` the equation `iȧ = (ħ/m)(3−q)(a² − κ²)`
//! integrates to
//! `(m/(ħ(3−q))) (1/(2κ)) log((κ+a)/(κ−a)) − it = δ`.
//! The logarithm is complex and continued along the trajectory; the ratio
//! circles the origin as `a` pulsates, so the principal branch would jump.

use num_complex::Complex64;

use super::CoefficientTrajectory;
use crate::error::{NrtError, Result};
use crate::qcalc;
use crate::solutions::{harmonic_a_c, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImplicitHarmonicConstant {
    pub delta: Complex64,
}

fn ratio(a: Complex64, kappa: f64) -> Result<Complex64> {
    let tiny = 1e-12 * kappa;
    if (a - kappa).norm() < tiny || (a + kappa).norm() < tiny {
        return Err(NrtError::DegenerateInput(format!(
            "a = {a} sits on a fixed point ±{kappa} of the harmonic flow"
        )));
    }
    Ok((kappa + a) / (kappa - a))
}

fn prefactor(params: &ModelParams, kappa: f64) -> f64 {
    params.m / (params.hbar * (3.0 - params.q)) / (2.0 * kappa)
}

/// `δ` from a single sample using the principal logarithm.
pub fn harmonic_delta(a: Complex64, t: f64, params: &ModelParams) -> Result<Complex64> {
    let kappa = harmonic_a_c(params)?;
    let ln = qcalc::principal_ln(ratio(a, kappa)?)?;
    Ok(prefactor(params, kappa) * ln - Complex64::new(0.0, t))
}

/// Evaluates `δ` at every sample with the logarithm continued from sample to
/// sample. Returns the value at the first sample and the largest deviation
/// from it.
pub fn harmonic_delta_check(
    traj: &CoefficientTrajectory,
    params: &ModelParams,
) -> Result<(ImplicitHarmonicConstant, f64)> {
    let kappa = harmonic_a_c(params)?;
    let pre = prefactor(params, kappa);
    let first = traj.samples.first().ok_or(NrtError::DegenerateInput("empty trajectory".into()))?;
    let mut w_prev = ratio(first.a, kappa)?;
    let mut log = qcalc::principal_ln(w_prev)?;
    let delta0 = pre * log - Complex64::new(0.0, first.t);
    let mut max_dev = 0.0f64;
    for s in &traj.samples[1..] {
        let w = ratio(s.a, kappa)?;
        log += qcalc::principal_ln(w / w_prev)?;
        w_prev = w;
        let delta = pre * log - Complex64::new(0.0, s.t);
        max_dev = max_dev.max((delta - delta0).norm());
    }
    Ok((ImplicitHarmonicConstant { delta: delta0 }, max_dev))
}
