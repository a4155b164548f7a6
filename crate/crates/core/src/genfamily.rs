//! Generalized nonlinear Schrödinger equations
//! `iħ ∂Φ/∂t = −(ħ²/2m) ∂²L(Φ)/∂x²` built from pairs `(L, F)` with
//! `d²/du² L(F(u)) = F′(u)`, and their plane-wave-like solutions
//! `Φ = F(i(kx − ωt))`, `ħω = ħ²k²/(2m)`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{NrtError, Result};
use crate::qcalc;
use crate::solutions::ModelParams;

/// Step of the 5-point differences in `u`.
pub const PAIR_FD_STEP: f64 = 1e-4;
/// Tolerance the pair relation must meet when a pair is constructed.
pub const PAIR_TOL: f64 = 1e-6;
/// Space and time step of [`generalized_residual`].
pub const WAVE_FD_STEP: f64 = 1e-3;

pub type ComplexFn = Arc<dyn Fn(Complex64) -> Result<Complex64> + Send + Sync>;
pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

const I: Complex64 = Complex64::new(0.0, 1.0);

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// A pair `(L, F)` together with `F′`.
#[derive(Clone)]
pub struct LFPair {
    pub name: String,
    pub domain_notes: String,
    f: ComplexFn,
    f_prime: ComplexFn,
    l: ComplexFn,
}

impl std::fmt::Debug for LFPair {
    fn fmt(&self, out: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        out.debug_struct("LFPair")
            .field("name", &self.name)
            .field("domain_notes", &self.domain_notes)
            .finish()
    }
}

impl LFPair {
    /// Builds a pair and checks the relation on `check_samples`.
    pub fn new(
        name: impl Into<String>,
        domain_notes: impl Into<String>,
        f: ComplexFn,
        f_prime: ComplexFn,
        l: ComplexFn,
        check_samples: &[f64],
    ) -> Result<Self> {
        let pair = Self::unchecked(name, domain_notes, f, f_prime, l);
        let worst = verify_pair_relation(&pair, check_samples)?;
        if !(worst <= PAIR_TOL) {
            return Err(NrtError::Domain(format!(
                "pair {} violates d²L(F)/du² = F′ by {worst:e}",
                pair.name
            )));
        }
        Ok(pair)
    }

    /// Builds a pair without checking the relation.
    pub fn unchecked(
        name: impl Into<String>,
        domain_notes: impl Into<String>,
        f: ComplexFn,
        f_prime: ComplexFn,
        l: ComplexFn,
    ) -> Self {
        Self { name: name.into(), domain_notes: domain_notes.into(), f, f_prime, l }
    }

    pub fn f(&self, u: Complex64) -> Result<Complex64> {
        (self.f)(u)
    }

    pub fn f_prime(&self, u: Complex64) -> Result<Complex64> {
        (self.f_prime)(u)
    }

    pub fn l(&self, v: Complex64) -> Result<Complex64> {
        (self.l)(v)
    }

    pub fn l_of_f(&self, u: Complex64) -> Result<Complex64> {
        self.l(self.f(u)?)
    }

    /// The same pair with `L` multiplied by `factor`, unchecked.
    pub fn with_scaled_l(&self, factor: f64) -> Self {
        let l = self.l.clone();
        Self {
            name: format!("{} (L × {factor})", self.name),
            domain_notes: self.domain_notes.clone(),
            f: self.f.clone(),
            f_prime: self.f_prime.clone(),
            l: Arc::new(move |v| Ok(factor * l(v)?)),
        }
    }
}

/// `F = e_q(u)`, `F′ = F^q`, `L(u) = u^{2−q}/(2−q)` (`log u` at `q = 2`).
pub fn nrt_pair(q: f64) -> Result<LFPair> {
    if !q.is_finite() {
        return Err(NrtError::InvalidParams(format!("q must be finite, got {q}")));
    }
    let f: ComplexFn = Arc::new(move |u| qcalc::qexp(q, u));
    let f_prime: ComplexFn = Arc::new(move |u| {
        if qcalc::is_q_one(q) {
            qcalc::checked_exp(u)
        } else {
            qcalc::qpow_from_base(1.0 + (1.0 - q) * u, q / (1.0 - q))
        }
    });
    let l: ComplexFn = Arc::new(move |v| {
        let e = 2.0 - q;
        if e.abs() < qcalc::Q_ONE_EPS {
            qcalc::principal_ln(v)
        } else {
            Ok(qcalc::qpow_from_base(v, e)? / e)
        }
    });
    // keep 1 + (1−q)u ≥ 1/2 on the check window
    let span = if qcalc::is_q_one(q) { 0.4 } else { 0.4f64.min(0.5 / (1.0 - q).abs()) };
    let samples: Vec<f64> = (0..=16).map(|j| span * (j as f64 / 8.0 - 1.0)).collect();
    LFPair::new(
        format!("nrt(q={q})"),
        "real u with 1 + (1−q)u > 0; complex u off the branch cut of the principal power",
        f,
        f_prime,
        l,
        &samples,
    )
}

/// `F = sinh`, `L(u) = √(1+u²)`.
pub fn sinh_pair() -> Result<LFPair> {
    let samples: Vec<f64> = (0..=40).map(|j| -2.0 + 0.1 * j as f64).collect();
    LFPair::new(
        "sinh",
        "real u; on the imaginary line u = iθ the principal root gives |cos θ|, so the relation holds only where cos θ > 0",
        Arc::new(|u: Complex64| Ok(u.sinh())),
        Arc::new(|u: Complex64| Ok(u.cosh())),
        Arc::new(|v: Complex64| Ok((1.0 + v * v).sqrt())),
        &samples,
    )
}

/// `F = u`, `L = u²/2`: the linear equation.
pub fn linear_pair() -> Result<LFPair> {
    let samples: Vec<f64> = (0..=20).map(|j| -1.0 + 0.1 * j as f64).collect();
    LFPair::new(
        "linear",
        "all complex u",
        Arc::new(Ok),
        Arc::new(|_| Ok(real(1.0))),
        Arc::new(|v| Ok(0.5 * v * v)),
        &samples,
    )
}

/// `max_u |d²/du² L(F(u)) − F′(u)|` over real `u_samples`, 5-point
/// differences with step [`PAIR_FD_STEP`].
pub fn verify_pair_relation(pair: &LFPair, u_samples: &[f64]) -> Result<f64> {
    let h = PAIR_FD_STEP;
    let g = |u: f64| pair.l_of_f(real(u));
    let mut worst = 0.0f64;
    for &u in u_samples {
        let d2 = (-g(u - 2.0 * h)? + 16.0 * g(u - h)? - 30.0 * g(u)? + 16.0 * g(u + h)? - g(u + 2.0 * h)?)
            / (12.0 * h * h);
        let r = (d2 - pair.f_prime(real(u))?).norm();
        if !r.is_finite() {
            return Err(NrtError::Domain(format!("pair {} not finite at u = {u}", pair.name)));
        }
        worst = worst.max(r);
    }
    Ok(worst)
}

/// `G` with its derivative, on an interval where `G′` is strictly monotone.
#[derive(Clone)]
pub struct GeneratorG {
    pub g: RealFn,
    pub g_prime: RealFn,
    pub g_second: Option<RealFn>,
    pub g_prime_inverse: Option<RealFn>,
    pub interval: (f64, f64),
}

fn invert_monotone(f: &RealFn, lo: f64, hi: f64, target: f64) -> Result<f64> {
    let (flo, fhi) = (f(lo), f(hi));
    let increasing = fhi > flo;
    let (min, max) = if increasing { (flo, fhi) } else { (fhi, flo) };
    if !(target >= min && target <= max) {
        return Err(NrtError::Domain(format!("{target} outside the range [{min}, {max}] of G′")));
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        if (f(mid) < target) == increasing {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// `F = G′`, `L(v) = G((G′)⁻¹(v))`, valid for real arguments.
pub fn pair_from_g(gen: GeneratorG, u_samples: &[f64]) -> Result<LFPair> {
    let (lo, hi) = gen.interval;
    if !(hi > lo) {
        return Err(NrtError::InvalidParams(format!("empty interval [{lo}, {hi}]")));
    }
    let mut sorted: Vec<f64> = u_samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    if sorted.first().is_some_and(|&u| u < lo) || sorted.last().is_some_and(|&u| u > hi) {
        return Err(NrtError::NonInvertible("samples leave the declared interval".into()));
    }
    let values: Vec<f64> = sorted.iter().map(|&u| (gen.g_prime)(u)).collect();
    let increasing = values.windows(2).all(|w| w[1] > w[0]);
    let decreasing = values.windows(2).all(|w| w[1] < w[0]);
    if !(increasing || decreasing) {
        return Err(NrtError::NonInvertible("G′ is not strictly monotone on the samples".into()));
    }

    let real_only = |u: Complex64| -> Result<f64> {
        if u.im != 0.0 {
            return Err(NrtError::Domain("generated pairs take real arguments only".into()));
        }
        Ok(u.re)
    };
    let gp = gen.g_prime.clone();
    let f: ComplexFn = Arc::new(move |u| Ok(real(gp(real_only(u)?))));
    let f_prime: ComplexFn = match gen.g_second.clone() {
        Some(g2) => Arc::new(move |u| Ok(real(g2(real_only(u)?)))),
        None => {
            let gp = gen.g_prime.clone();
            Arc::new(move |u| {
                let u = real_only(u)?;
                let h = PAIR_FD_STEP;
                Ok(real((gp(u - 2.0 * h) - 8.0 * gp(u - h) + 8.0 * gp(u + h) - gp(u + 2.0 * h)) / (12.0 * h)))
            })
        }
    };
    let g = gen.g.clone();
    let gp = gen.g_prime.clone();
    let inverse = gen.g_prime_inverse.clone();
    let l: ComplexFn = Arc::new(move |v| {
        let v = real_only(v)?;
        let u = match &inverse {
            Some(inv) => inv(v),
            None => invert_monotone(&gp, lo, hi, v)?,
        };
        Ok(real(g(u)))
    });
    LFPair::new("generated", format!("real u in [{lo}, {hi}]"), f, f_prime, l, u_samples)
}

fn frequency(k: f64, params: &ModelParams) -> f64 {
    params.hbar * k * k / (2.0 * params.m)
}

/// `Φ/Φ0 = F(i(kx − ωt))` with `ω = ħk²/(2m)`.
pub fn general_plane_wave(pair: &LFPair, k: f64, params: &ModelParams, t: f64, x: f64) -> Result<Complex64> {
    pair.f(I * (k * x - frequency(k, params) * t))
}

/// `|iħ ∂Φ/∂t + (ħ²/2m) ∂²L(Φ)/∂x²|` for `Φ = F(i(kx − ωt))` with the given
/// `ω`, all derivatives by 5-point differences with step [`WAVE_FD_STEP`].
pub fn generalized_residual(
    pair: &LFPair,
    k: f64,
    w: f64,
    params: &ModelParams,
    x: f64,
    t: f64,
) -> Result<f64> {
    let h = WAVE_FD_STEP;
    let phi = |x: f64, t: f64| pair.f(I * (k * x - w * t));
    let lphi = |x: f64| pair.l(phi(x, t)?);
    let dt = (phi(x, t - 2.0 * h)? - 8.0 * phi(x, t - h)? + 8.0 * phi(x, t + h)? - phi(x, t + 2.0 * h)?)
        / (12.0 * h);
    let dxx = (-lphi(x - 2.0 * h)? + 16.0 * lphi(x - h)? - 30.0 * lphi(x)? + 16.0 * lphi(x + h)?
        - lphi(x + 2.0 * h)?)
        / (12.0 * h * h);
    Ok((I * params.hbar * dt + params.hbar * params.hbar / (2.0 * params.m) * dxx).norm())
}

/// Residual at the dispersion relation `ω = ħk²/(2m)`.
pub fn plane_wave_residual(pair: &LFPair, k: f64, params: &ModelParams, x: f64, t: f64) -> Result<f64> {
    generalized_residual(pair, k, frequency(k, params), params, x, t)
}

/// Fit of `d/du L(F(u)) = (r1 + r2 u) F′(u)` and the reconstruction
/// `F ≈ F0 (r1 + r2 u)^{1/r2} + F1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniquenessProbe {
    pub r1: f64,
    pub r2: f64,
    pub f0: Option<f64>,
    pub f1: Option<f64>,
    /// Largest pointwise residual at the least-squares optimum.
    pub residual: f64,
    /// RMS residual at the optimum; no choice of `(r1, r2)` brings the
    /// largest residual below it.
    pub lower_bound: f64,
}

fn solve2(m: [[f64; 2]; 2], r: [f64; 2]) -> Option<[f64; 2]> {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let scale = m[0][0].abs().max(m[1][1].abs()).max(m[0][1].abs());
    if det.abs() <= 1e-14 * scale * scale {
        return None;
    }
    Some([(r[0] * m[1][1] - r[1] * m[0][1]) / det, (m[0][0] * r[1] - m[1][0] * r[0]) / det])
}

fn least_squares(c1: &[f64], c2: &[f64], y: &[f64]) -> Option<[f64; 2]> {
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    solve2([[dot(c1, c1), dot(c1, c2)], [dot(c2, c1), dot(c2, c2)]], [dot(c1, y), dot(c2, y)])
}

/// Least-squares `(r1, r2)` on real samples, with `d/du L(F(u))` from a
/// 5-point difference.
pub fn uniqueness_residual(pair: &LFPair, u_samples: &[f64]) -> Result<UniquenessProbe> {
    if u_samples.len() < 10 {
        return Err(NrtError::InvalidParams(format!("need at least 10 samples, got {}", u_samples.len())));
    }
    let h = PAIR_FD_STEP;
    let g = |u: f64| pair.l_of_f(real(u)).map(|z| z.re);
    let mut lhs = Vec::with_capacity(u_samples.len());
    let mut fp = Vec::with_capacity(u_samples.len());
    let mut ufp = Vec::with_capacity(u_samples.len());
    let mut fv = Vec::with_capacity(u_samples.len());
    for &u in u_samples {
        let d = (g(u - 2.0 * h)? - 8.0 * g(u - h)? + 8.0 * g(u + h)? - g(u + 2.0 * h)?) / (12.0 * h);
        let p = pair.f_prime(real(u))?.re;
        if p == 0.0 {
            return Err(NrtError::DegenerateInput(format!("F′ vanishes at u = {u}")));
        }
        lhs.push(d);
        fp.push(p);
        ufp.push(u * p);
        fv.push(pair.f(real(u))?.re);
    }
    let [r1, r2] = least_squares(&fp, &ufp, &lhs)
        .ok_or_else(|| NrtError::DegenerateInput("fit matrix is singular".into()))?;
    let res: Vec<f64> = (0..lhs.len()).map(|j| lhs[j] - (r1 * fp[j] + r2 * ufp[j])).collect();
    let residual = res.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    let lower_bound = (res.iter().map(|r| r * r).sum::<f64>() / res.len() as f64).sqrt();

    let basis: Option<Vec<f64>> = u_samples
        .iter()
        .map(|&u| {
            if r2.abs() < 1e-12 {
                (r1 != 0.0).then(|| (u / r1).exp())
            } else {
                let base = r1 + r2 * u;
                (base > 0.0).then(|| base.powf(1.0 / r2))
            }
        })
        .collect();
    let (f0, f1) = match basis.and_then(|b| least_squares(&b, &vec![1.0; b.len()], &fv)) {
        Some([a, b]) => (Some(a), Some(b)),
        None => (None, None),
    };
    Ok(UniquenessProbe { r1, r2, f0, f1, residual, lower_bound })
}
