//! The generic q-Gaussian packet: integration constants, closed-form
//! coefficients and the ansatz itself.

use num_complex::Complex64;

use super::{CoefficientState, ModelParams, PacketConstants};
use crate::error::{NrtError, Result};
use crate::qcalc::{self, is_q_one, LinearPath};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Integration constants from the initial coefficients.
///
/// The `a0` power in `γ` is written as `α^{(1−q)/(3−q)}`, which equals the
/// principal `a0^{(q−1)/(3−q)}` except when `a0` is a negative real, where
/// the former keeps `c(0)` consistent with the closed form.
pub fn constants_from_initial(
    a0: Complex64,
    b0: Complex64,
    c0: Complex64,
    q: f64,
) -> Result<PacketConstants> {
    if a0 == ZERO {
        return Err(NrtError::DegenerateInitial);
    }
    if (q - 3.0).abs() < qcalc::Q_ONE_EPS {
        return Err(NrtError::InvalidParams(
            "q = 3 has no generic free packet; use the pulsating family".into(),
        ));
    }
    let alpha = ONE / a0;
    let beta = b0 / a0;
    let shifted = c0 - b0 * b0 / (4.0 * a0);
    let gamma = if is_q_one(q) {
        // c(t) = ½ ln Z + β²/(4Z) + γ
        shifted - 0.5 * qcalc::principal_ln(alpha)?
    } else {
        let inv = 1.0 / (1.0 - q);
        let s = (1.0 - q) / (3.0 - q);
        qcalc::qpow_from_base(alpha, s)? * (shifted - inv) + inv
    };
    Ok(PacketConstants { alpha, beta, gamma })
}

/// `c(0) − β²/(4α)`, the part of `c` carried by the fractional power.
fn reduced_c0(constants: &PacketConstants, q: f64) -> Result<Complex64> {
    if is_q_one(q) {
        return Ok(constants.gamma + 0.5 * qcalc::principal_ln(constants.alpha)?);
    }
    let inv = 1.0 / (1.0 - q);
    let s = (1.0 - q) / (3.0 - q);
    Ok(inv + (constants.gamma - inv) * qcalc::qpow_from_base(constants.alpha, -s)?)
}

/// The line `(3−q)iħt/m + α` on which the coefficient flow lives.
pub fn coefficient_path(constants: &PacketConstants, params: &ModelParams) -> Result<LinearPath> {
    let speed = Complex64::new(0.0, (3.0 - params.q) * params.hbar / params.m);
    LinearPath::new(constants.alpha, speed)
}

fn check_not_q3(q: f64) -> Result<()> {
    if (q - 3.0).abs() < qcalc::Q_ONE_EPS {
        return Err(NrtError::InvalidParams(
            "q = 3 has no generic free packet; use the pulsating family".into(),
        ));
    }
    Ok(())
}

/// Closed-form `(a, b, c)(t)`.
///
/// With `Z = (3−q)iħt/m + α`, `s = (1−q)/(3−q)` and `D = log(Z/α)` continued
/// along the path,
///
/// ```text
/// a = 1/Z,  b = β/Z,
/// c = β²/(4Z) + ρ·e^{−sD} − expm1(−sD)/(1−q),   ρ = c(0) − β²/(4α)
/// ```
///
/// which is the general solution rearranged so that the `q → 1` limit
/// (`c → β²/(4Z) + ρ + D/2`) is reached without cancellation.
pub fn free_coeffs(t: f64, constants: &PacketConstants, params: &ModelParams) -> Result<CoefficientState> {
    let q = params.q;
    check_not_q3(q)?;
    let path = coefficient_path(constants, params)?;
    let d = path.log_ratio(t)?;
    let z = path.at(t);
    let beta = constants.beta;
    let rho = reduced_c0(constants, q)?;
    let s = (1.0 - q) / (3.0 - q);
    let a = ONE / z;
    let b = beta * a;
    let c = if is_q_one(q) {
        beta * beta / (4.0 * z) + rho + 0.5 * d
    } else {
        let w = qcalc::checked_exp(-s * d)?;
        beta * beta / (4.0 * z) + rho * w - qcalc::expm1(-s * d) / (1.0 - q)
    };
    Ok(CoefficientState {
        t,
        a: qcalc::checked(a, "a(t)")?,
        b: qcalc::checked(b, "b(t)")?,
        c: qcalc::checked(c, "c(t)")?,
    })
}

/// Time derivatives of the closed form, obtained by differentiating it
/// directly (no use of the coefficient equations).
pub fn free_coeff_rates(
    t: f64,
    constants: &PacketConstants,
    params: &ModelParams,
) -> Result<(Complex64, Complex64, Complex64)> {
    let q = params.q;
    check_not_q3(q)?;
    let path = coefficient_path(constants, params)?;
    let d = path.log_ratio(t)?;
    let z = path.at(t);
    let dz = path.v;
    let beta = constants.beta;
    let rho = reduced_c0(constants, q)?;
    let s = (1.0 - q) / (3.0 - q);
    let w = qcalc::checked_exp(-s * d)?;
    let da = -dz / (z * z);
    let db = beta * da;
    let dc = dz / z * (-beta * beta / (4.0 * z) + w * (1.0 / (3.0 - q) - s * rho));
    Ok((da, db, dc))
}

/// The base polynomial `P(x) = 1 − (1−q)(a x² + b x + c)`.
pub fn base_polynomial(state: &CoefficientState, q: f64, x: f64) -> Complex64 {
    ONE - (1.0 - q) * quadratic(state, x)
}

/// `a x² + b x + c`.
pub fn quadratic(state: &CoefficientState, x: f64) -> Complex64 {
    (state.a * x + state.b) * x + state.c
}

/// `log ψ` for the ansatz, on the branch `Log P / (1−q)`.
pub fn ansatz_log_psi(state: &CoefficientState, q: f64, x: f64) -> Result<Complex64> {
    if is_q_one(q) {
        return Ok(-quadratic(state, x));
    }
    let p = base_polynomial(state, q, x);
    if p == ZERO {
        // a positive exponent sends ψ to 0; the log form can't express that
        return Err(NrtError::BranchPoint { re: 0.0, im: 0.0 });
    }
    Ok(qcalc::principal_ln(p)? / (1.0 - q))
}

/// `ψ(x) = P(x)^{1/(1−q)}` on the principal branch; `exp(−(a x² + b x + c))`
/// at `q = 1`.
pub fn eval_ansatz(state: &CoefficientState, q: f64, x: f64) -> Result<Complex64> {
    if is_q_one(q) {
        return qcalc::checked_exp(-quadratic(state, x));
    }
    qcalc::qpow_from_base(base_polynomial(state, q, x), 1.0 / (1.0 - q))
}
