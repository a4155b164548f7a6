//! Pointwise residuals of the governing equation
//! `iħ ψ_t = −(1/(2−q))(ħ²/2m) ∂²ψ^{2−q} + V ψ^q`.

use num_complex::Complex64;

use crate::error::Result;
use crate::qcalc::{self, is_q_one};
use crate::solutions::{base_polynomial, ModelParams, Potential, SolutionFamily};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Time step of the 5-point time difference for families without coefficients.
pub const FD_TIME_STEP: f64 = 1e-5;
/// Space step of the 5-point second difference in [`nrt_residual_fd`].
pub const FD_SPACE_STEP: f64 = 1e-3;

/// `ψ^{2−q}/(2−q)` up to an additive constant, continuous in `q` through 2:
/// `expm1((2−q) log ψ)/(2−q)`, which is `log ψ` at `q = 2`.
pub fn nonlinear_potential(log_psi: Complex64, q: f64) -> Complex64 {
    let e = 2.0 - q;
    if e.abs() < qcalc::Q_ONE_EPS {
        log_psi
    } else {
        qcalc::expm1(e * log_psi) / e
    }
}

fn five_point_first(f: impl Fn(f64) -> Result<Complex64>, x: f64, h: f64) -> Result<Complex64> {
    Ok((f(x - 2.0 * h)? - 8.0 * f(x - h)? + 8.0 * f(x + h)? - f(x + 2.0 * h)?) / (12.0 * h))
}

fn five_point_second(f: impl Fn(f64) -> Result<Complex64>, x: f64, h: f64) -> Result<Complex64> {
    Ok((-f(x - 2.0 * h)? + 16.0 * f(x - h)? - 30.0 * f(x)? + 16.0 * f(x + h)? - f(x + 2.0 * h)?)
        / (12.0 * h * h))
}

/// `|LHS − RHS|` with analytic derivatives.
///
/// Coefficient families differentiate their closed-form `(a, b, c)(t)` in
/// time and use `∂²ψ^{2−q}/(2−q) = −[2aP − (2ax+b)²]ψ^q` in space. Frozen
/// solutions use the power rule on `bx + ic`, the Gaussian limit its
/// quadratic exponent; those two take `ψ_t` from a 5-point time difference.
pub fn nrt_residual(
    family: &SolutionFamily,
    params: &ModelParams,
    potential: Potential,
    x: f64,
    t: f64,
) -> Result<f64> {
    let q = family.effective_q(params);
    let (hbar, m) = (params.hbar, params.m);
    let log_psi = family.log_psi(x, t, params)?;
    let psi_q = qcalc::checked_exp(q * log_psi)?;
    let v = potential.value(x);

    if let (Some(state), Some((da, db, dc))) =
        (family.coefficients(t, params)?, family.coefficient_rates(t, params)?)
    {
        let u_dot = (da * x + db) * x + dc;
        let lhs = -I * hbar * u_dot * psi_q;
        let p = if is_q_one(q) { Complex64::new(1.0, 0.0) } else { base_polynomial(&state, q, x) };
        let slope = 2.0 * state.a * x + state.b;
        let rhs = hbar * hbar / (2.0 * m) * (2.0 * state.a * p - slope * slope) * psi_q + v * psi_q;
        return Ok((lhs - rhs).norm());
    }

    let psi_t = five_point_first(|s| family.psi(x, s, params), t, FD_TIME_STEP)?;
    let lhs = I * hbar * psi_t;
    let kinetic = match *family {
        // ψ^{2−q} = bx + ic is linear in x
        SolutionFamily::Frozen { .. } => Complex64::new(0.0, 0.0),
        SolutionFamily::GaussianLimit { k0, alpha } => {
            let z = Complex64::new(alpha, 2.0 * hbar * t / m);
            let shift = x - hbar * k0 * t / m;
            let g1 = -2.0 * shift / z + I * k0;
            let g2 = -2.0 / z;
            let psi = qcalc::checked_exp(log_psi)?;
            -(g2 + g1 * g1) * psi
        }
        _ => unreachable!("coefficient families handled above"),
    };
    let rhs = hbar * hbar / (2.0 * m) * kinetic + v * psi_q;
    Ok((lhs - rhs).norm())
}

/// `|LHS − RHS|` with every derivative taken by 5-point finite differences of
/// `log ψ` supplied by `field(x, t)`.
pub fn nrt_residual_fd(
    field: impl Fn(f64, f64) -> Result<Complex64>,
    q: f64,
    params: &ModelParams,
    potential: Potential,
    x: f64,
    t: f64,
) -> Result<f64> {
    let (hbar, m) = (params.hbar, params.m);
    let log_psi = field(x, t)?;
    let psi_q = qcalc::checked_exp(q * log_psi)?;
    let psi_t = five_point_first(|s| qcalc::checked_exp(field(x, s)?), t, FD_TIME_STEP)?;
    let d2 = five_point_second(|y| Ok(nonlinear_potential(field(y, t)?, q)), x, FD_SPACE_STEP)?;
    let lhs = I * hbar * psi_t;
    let rhs = -hbar * hbar / (2.0 * m) * d2 + potential.value(x) * psi_q;
    Ok((lhs - rhs).norm())
}

/// All-finite-difference residual of a family.
pub fn family_residual_fd(
    family: &SolutionFamily,
    params: &ModelParams,
    potential: Potential,
    x: f64,
    t: f64,
) -> Result<f64> {
    nrt_residual_fd(|y, s| family.log_psi(y, s, params), family.effective_q(params), params, potential, x, t)
}
