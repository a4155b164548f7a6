//! Norms `N = ∫|ψ|² dx`, the normalizability classifier and norm rates.

use num_complex::Complex64;
use statrs::function::gamma::ln_gamma;

use super::quadrature::{integrate_line, LineIntegrand};
use super::FamilyAbs2;
use crate::error::{NrtError, Result};
use crate::qcalc::is_q_one;
use crate::solutions::{harmonic_a_c, CoefficientState, ModelParams, SolutionFamily};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalizability {
    pub normalizable: bool,
    pub reason: String,
}

impl Normalizability {
    fn yes(reason: impl Into<String>) -> Self {
        Self { normalizable: true, reason: reason.into() }
    }
    fn no(reason: impl Into<String>) -> Self {
        Self { normalizable: false, reason: reason.into() }
    }
}

/// Real zeros of `p2 x² + p1 x + p0`. `None` means the polynomial vanishes
/// identically.
fn real_roots(p2: f64, p1: f64, p0: f64) -> Option<Vec<f64>> {
    let scale = p2.abs().max(p1.abs()).max(p0.abs());
    if scale == 0.0 {
        return None;
    }
    let tiny = 1e-14 * scale;
    let (p2, p1, p0) = (
        if p2.abs() <= tiny { 0.0 } else { p2 },
        if p1.abs() <= tiny { 0.0 } else { p1 },
        if p0.abs() <= tiny { 0.0 } else { p0 },
    );
    if p2 == 0.0 {
        return Some(if p1 == 0.0 { Vec::new() } else { vec![-p0 / p1] });
    }
    let disc = p1 * p1 - 4.0 * p2 * p0;
    let slack = 1e-13 * (p1 * p1).max((4.0 * p2 * p0).abs());
    if disc < -slack {
        return Some(Vec::new());
    }
    if disc.abs() <= slack {
        return Some(vec![-p1 / (2.0 * p2)]);
    }
    // cancellation-free pair
    let sign = if p1 < 0.0 { -1.0 } else { 1.0 };
    let s = -0.5 * (p1 + sign * disc.sqrt());
    let roots = vec![s / p2, p0 / s];
    Some(roots)
}

/// Whether `P(x) = 1 − (1−q)(ax² + bx + c)` vanishes at some real `x`,
/// decided on the real and imaginary parts of `P` as real quadratics.
pub fn base_has_real_root(state: &CoefficientState, q: f64) -> bool {
    let k = -(1.0 - q);
    let re = (k * state.a.re, k * state.b.re, 1.0 + k * state.c.re);
    let im = (k * state.a.im, k * state.b.im, k * state.c.im);
    let eval = |p: (f64, f64, f64), x: f64| (p.0 * x + p.1) * x + p.2;
    let mag = |p: (f64, f64, f64), x: f64| (p.0 * x * x).abs() + (p.1 * x).abs() + p.2.abs();
    let on_zero = |p: (f64, f64, f64), x: f64| eval(p, x).abs() <= 1e-10 * mag(p, x).max(1e-300);
    match (real_roots(im.0, im.1, im.2), real_roots(re.0, re.1, re.2)) {
        (None, None) => true,
        (None, Some(r)) => !r.is_empty(),
        (Some(r), None) => !r.is_empty(),
        (Some(ri), Some(_)) => ri.iter().any(|&x| on_zero(re, x)),
    }
}

fn open_range(q: f64, lo: f64, hi: f64) -> bool {
    q > lo && q < hi
}

/// Classifies whether `∫|ψ(x, t)|² dx` is finite.
///
/// `a ≠ 0`: `1 < q < 5` and no real zero of the base polynomial. `a = 0`:
/// `1 < q < 3`, `b ≠ 0` and no real zero. Frozen: `2 < q < 4`. At `q = 1`
/// the packet is Gaussian and needs `Re a > 0`.
pub fn normalizable(family: &SolutionFamily, params: &ModelParams, t: f64) -> Normalizability {
    let q = family.effective_q(params);
    match *family {
        SolutionFamily::GaussianLimit { alpha, .. } => {
            return if alpha > 0.0 {
                Normalizability::yes("Gaussian packet with α > 0")
            } else {
                Normalizability::no("Gaussian width α ≤ 0")
            };
        }
        SolutionFamily::Frozen { b, c } => {
            if b == 0.0 || c == 0.0 {
                return Normalizability::no("frozen solution needs b ≠ 0 and c ≠ 0");
            }
            return if open_range(q, 2.0, 4.0) {
                Normalizability::yes("frozen solution with 2 < q < 4")
            } else {
                Normalizability::no(format!("frozen solution needs 2 < q < 4, got q = {q}"))
            };
        }
        _ => {}
    }
    let state = match family.coefficients(t, params) {
        Ok(Some(s)) => s,
        Ok(None) => return Normalizability::no("family has no coefficients"),
        Err(e) => return Normalizability::no(format!("coefficients unavailable: {e}")),
    };
    if is_q_one(q) {
        return if state.a.re > 0.0 {
            Normalizability::yes("Gaussian with Re a > 0")
        } else {
            Normalizability::no("q = 1 needs Re a > 0")
        };
    }
    let zero = Complex64::new(0.0, 0.0);
    if state.a != zero {
        if !open_range(q, 1.0, 5.0) {
            return Normalizability::no(format!("a ≠ 0 needs 1 < q < 5, got q = {q}"));
        }
    } else {
        if !open_range(q, 1.0, 3.0) {
            return Normalizability::no(format!("a = 0 needs 1 < q < 3, got q = {q}"));
        }
        if state.b == zero {
            return Normalizability::no("a = b = 0 gives a constant |ψ|²");
        }
    }
    if base_has_real_root(&state, q) {
        return Normalizability::no("the base polynomial has a real root");
    }
    Normalizability::yes(if state.a != zero {
        "1 < q < 5 with no real root"
    } else {
        "1 < q < 3 with no real root"
    })
}

/// Quadrature of `|ψ|²` over the real line, regardless of the classifier.
/// `converged` is false when the core refinement or the tail power law fails.
pub fn norm_quadrature(
    family: &SolutionFamily,
    params: &ModelParams,
    t: f64,
    tol: f64,
) -> Result<NormResult> {
    if !(tol > 0.0) {
        return Err(NrtError::InvalidParams(format!("tolerance must be > 0, got {tol}")));
    }
    let FamilyAbs2 { f, center, core } = FamilyAbs2::new(family, params, t)?;
    let r = integrate_line(LineIntegrand { f, center, core }, tol);
    Ok(NormResult { value: r.value, abs_error_estimate: r.abs_error, converged: r.converged })
}

/// `N(t)`; fails with `DivergentNorm` when the classifier says no.
pub fn norm(family: &SolutionFamily, params: &ModelParams, t: f64, tol: f64) -> Result<NormResult> {
    let verdict = normalizable(family, params, t);
    if !verdict.normalizable {
        return Err(NrtError::DivergentNorm(verdict.reason));
    }
    norm_quadrature(family, params, t, tol)
}

/// Closed-form norm of the singular packet,
/// `(1/(|1−q|b_c)) S^{1+2/(1−q)} √π Γ((3−q)/(2(q−1))) / Γ(1/(q−1))` with
/// `S = |1−q| ħ b_c² (t+t0)/(2m)`.
pub fn norm_closed_form_singular(b_c: f64, t0: f64, t: f64, params: &ModelParams) -> Result<f64> {
    let q = params.q;
    if !open_range(q, 1.0, 3.0) {
        return Err(NrtError::Domain(format!("closed-form norm needs 1 < q < 3, got q = {q}")));
    }
    if !(b_c > 0.0) {
        return Err(NrtError::Domain(format!("closed-form norm needs b_c > 0, got {b_c}")));
    }
    let tau = t + t0;
    if !(tau > 0.0) {
        return Err(NrtError::Domain(format!("closed-form norm needs t > −t0, got t + t0 = {tau}")));
    }
    let s = (q - 1.0) * params.hbar * b_c * b_c * tau / (2.0 * params.m);
    let ln_n = -((q - 1.0) * b_c).ln()
        + (1.0 + 2.0 / (1.0 - q)) * s.ln()
        + 0.5 * std::f64::consts::PI.ln()
        + ln_gamma((3.0 - q) / (2.0 * (q - 1.0)))
        - ln_gamma(1.0 / (q - 1.0));
    Ok(ln_n.exp())
}

/// `dN/dt` of the harmonic quasi-stationary packet from
/// `2(1−q)(ħa_c²/m) sin φ ∫ x² [1 − 2a_c(1−q) cos φ x² + (1−q)²a_c² x⁴]^{q/(1−q)} dx`,
/// `φ = (1−q)ħa_c t/m`.
pub fn harmonic_norm_rate(params: &ModelParams, t: f64, tol: f64) -> Result<NormResult> {
    let q = params.q;
    if !open_range(q, 1.0, 3.0) {
        return Err(NrtError::Domain(format!("harmonic norm rate needs 1 < q < 3, got q = {q}")));
    }
    let a_c = harmonic_a_c(params)?;
    let phi = (1.0 - q) * params.hbar * a_c * t / params.m;
    let (sin, cos) = phi.sin_cos();
    let pre = 2.0 * (1.0 - q) * params.hbar * a_c * a_c / params.m * sin;
    let e = q / (1.0 - q);
    let k = (1.0 - q) * a_c;
    let f = move |x: f64| {
        let x2 = x * x;
        let bracket = (1.0 - 2.0 * k * cos * x2 + k * k * x2 * x2).max(0.0);
        x2 * bracket.powf(e)
    };
    let core = 10.0 / k.abs().sqrt();
    let r = integrate_line(LineIntegrand { f, center: 0.0, core }, tol / pre.abs().max(1e-300));
    Ok(NormResult {
        value: pre * r.value,
        abs_error_estimate: pre.abs() * r.abs_error,
        converged: r.converged,
    })
}

/// `dN/dt` by a 5-point central difference of quadrature norms.
pub fn norm_rate_numeric(
    family: &SolutionFamily,
    params: &ModelParams,
    t: f64,
    dt: f64,
    tol: f64,
) -> Result<f64> {
    let n = |s: f64| -> Result<f64> {
        let r = norm(family, params, s, tol)?;
        if !r.converged {
            return Err(NrtError::DivergentNorm(format!("quadrature did not converge at t = {s}")));
        }
        Ok(r.value)
    };
    Ok((n(t - 2.0 * dt)? - 8.0 * n(t - dt)? + 8.0 * n(t + dt)? - n(t + 2.0 * dt)?) / (12.0 * dt))
}
