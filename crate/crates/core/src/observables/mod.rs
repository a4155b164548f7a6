//! Squared modulus on grids, norms, normalizability and peak analysis.

mod norm;
mod peaks;
pub mod quadrature;

pub use norm::{
    base_has_real_root, harmonic_norm_rate, norm, norm_closed_form_singular, norm_quadrature,
    norm_rate_numeric, normalizable, NormResult, Normalizability,
};
pub use peaks::{find_peaks, Peak, PeakSet};

use crate::error::{NrtError, Result};
use crate::qcalc::is_q_one;
use crate::solutions::{quadratic, CoefficientState, ModelParams, SolutionFamily};

/// Relative tolerance between the real closed form of `|ψ|²` and `|ψ|²`
/// from the complex ansatz.
pub const PROFILE_CROSSCHECK_TOL: f64 = 1e-9;

/// `ψ` and `|ψ|²` on a grid at one time.
#[derive(Debug, Clone, PartialEq)]
pub struct GridProfile {
    pub t: f64,
    pub x: Vec<f64>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub abs2: Vec<f64>,
}

/// `|ψ|² = [1 − 2(1−q) Re u + (1−q)²|u|²]^{1/(1−q)}`, `u = ax² + bx + c`;
/// `exp(−2 Re u)` at `q = 1`.
pub fn abs2_eq34(state: &CoefficientState, q: f64, x: f64) -> f64 {
    let u = quadratic(state, x);
    if is_q_one(q) {
        return (-2.0 * u.re).exp();
    }
    let k = 1.0 - q;
    let base = (1.0 - 2.0 * k * u.re + k * k * u.norm_sqr()).max(0.0);
    base.powf(1.0 / k)
}

/// Real-valued `|ψ(·, t)|²` of a family together with the window where its
/// algebraic tail takes over.
pub(crate) struct FamilyAbs2 {
    pub f: Box<dyn Fn(f64) -> f64>,
    pub center: f64,
    pub core: f64,
}

fn dominance_radius(a: f64, b: f64, c: f64) -> f64 {
    if a > 0.0 {
        // |a|X² = 100(|b|X + |c| + 1)
        let (p, r) = (100.0 * b, 100.0 * (c + 1.0));
        (p + (p * p + 4.0 * a * r).sqrt()) / (2.0 * a)
    } else if b > 0.0 {
        100.0 * (c + 1.0) / b
    } else {
        10.0
    }
}

impl FamilyAbs2 {
    pub(crate) fn new(family: &SolutionFamily, params: &ModelParams, t: f64) -> Result<Self> {
        family.validate(params)?;
        match *family {
            SolutionFamily::Frozen { b, c } => {
                let e = 1.0 / (2.0 - params.q);
                Ok(Self {
                    f: Box::new(move |x| (b * b * x * x + c * c).powf(e)),
                    center: 0.0,
                    core: dominance_radius(0.0, b.abs(), c.abs()),
                })
            }
            SolutionFamily::GaussianLimit { k0, alpha } => {
                let p = *params;
                let fam = *family;
                let width = (alpha * alpha + (2.0 * p.hbar * t / p.m).powi(2)).sqrt();
                Ok(Self {
                    f: Box::new(move |x| fam.psi(x, t, &p).map(|z| z.norm_sqr()).unwrap_or(f64::NAN)),
                    center: p.hbar * k0 * t / p.m,
                    core: width * (400.0 / alpha).sqrt(),
                })
            }
            _ => {
                let state = family
                    .coefficients(t, params)?
                    .ok_or_else(|| NrtError::Domain("family has no coefficients".into()))?;
                let q = family.effective_q(params);
                Ok(Self {
                    f: Box::new(move |x| abs2_eq34(&state, q, x)),
                    center: 0.0,
                    core: dominance_radius(state.a.norm(), state.b.norm(), state.c.norm()),
                })
            }
        }
    }
}

/// `ψ` and `|ψ|²` on `grid`. For coefficient families `|ψ|²` comes from the
/// real closed form and is checked against `|ψ|²` of the complex ansatz.
pub fn abs2_profile(
    family: &SolutionFamily,
    params: &ModelParams,
    t: f64,
    grid: &[f64],
) -> Result<GridProfile> {
    let state = family.coefficients(t, params)?;
    let q = family.effective_q(params);
    let n = grid.len();
    let mut out = GridProfile {
        t,
        x: grid.to_vec(),
        re: Vec::with_capacity(n),
        im: Vec::with_capacity(n),
        abs2: Vec::with_capacity(n),
    };
    for &x in grid {
        let psi = family.psi(x, t, params)?;
        let direct = psi.norm_sqr();
        let abs2 = match state {
            Some(s) => {
                let closed = abs2_eq34(&s, q, x);
                let gap = (closed - direct).abs();
                if gap > PROFILE_CROSSCHECK_TOL * closed.max(direct).max(f64::MIN_POSITIVE) {
                    return Err(NrtError::Domain(format!(
                        "|ψ|² cross-check failed at x = {x}, t = {t}: {closed:e} vs {direct:e}"
                    )));
                }
                closed
            }
            None => direct,
        };
        out.re.push(psi.re);
        out.im.push(psi.im);
        out.abs2.push(abs2);
    }
    Ok(out)
}

/// `n` equispaced nodes on `[x_min, x_max]`.
pub fn uniform_grid(x_min: f64, x_max: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![x_min];
    }
    let h = (x_max - x_min) / (n - 1) as f64;
    (0..n).map(|j| if j == n - 1 { x_max } else { x_min + j as f64 * h }).collect()
}
