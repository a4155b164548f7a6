//! q-deformed complex arithmetic.
//!
//! Everything here works on the principal branch `Arg ∈ (−π, π]`, except the
//! path functions, which follow the argument continuously along a straight
//! line `z(t) = z0 + v·t` starting from the principal value at `t = 0`.

use num_complex::Complex64;

use crate::error::{NrtError, Result};

/// Below this distance from 1, `q` is treated as exactly 1.
pub const Q_ONE_EPS: f64 = 1e-9;

/// Magnitudes above this raise [`NrtError::Overflow`].
pub const OVERFLOW_LIMIT: f64 = 1e300;

const LN_OVERFLOW_LIMIT: f64 = 690.7755278982137; // ln(1e300)

pub fn is_q_one(q: f64) -> bool {
    (q - 1.0).abs() < Q_ONE_EPS
}

/// Rejects non-finite values and magnitudes above [`OVERFLOW_LIMIT`].
pub fn checked(z: Complex64, what: &str) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() || z.norm() > OVERFLOW_LIMIT {
        return Err(NrtError::Overflow(what.to_string()));
    }
    Ok(z)
}

/// Principal argument in `(−π, π]`. A signed zero imaginary part on the
/// negative real axis maps to `+π`.
pub fn principal_arg(z: Complex64) -> f64 {
    if z.im == 0.0 && z.re < 0.0 {
        std::f64::consts::PI
    } else {
        z.im.atan2(z.re)
    }
}

/// Principal logarithm `ln|z| + i·Arg z`.
pub fn principal_ln(z: Complex64) -> Result<Complex64> {
    if z == Complex64::new(0.0, 0.0) {
        return Err(NrtError::BranchPoint { re: 0.0, im: 0.0 });
    }
    Ok(Complex64::new(z.norm().ln(), principal_arg(z)))
}

/// `exp(w)` with the overflow guard applied before evaluation.
pub fn checked_exp(w: Complex64) -> Result<Complex64> {
    if w.re > LN_OVERFLOW_LIMIT || w.re.is_nan() || !w.im.is_finite() {
        return Err(NrtError::Overflow(format!("exp({w})")));
    }
    checked(w.exp(), "exp")
}

/// `exp(w) − 1` without cancellation for small `|w|`.
pub fn expm1(w: Complex64) -> Complex64 {
    let half = (0.5 * w.im).sin();
    let e = w.re.exp();
    Complex64::new(w.re.exp_m1() * w.im.cos() - 2.0 * half * half, e * w.im.sin())
}

/// Tsallis q-exponential `[1 + (1−q)z]^{1/(1−q)}`, principal branch; `exp(z)`
/// at `q = 1`.
pub fn qexp(q: f64, z: Complex64) -> Result<Complex64> {
    if is_q_one(q) {
        return checked_exp(z);
    }
    let base = Complex64::new(1.0, 0.0) + (1.0 - q) * z;
    qpow_from_base(base, 1.0 / (1.0 - q))
}

/// Principal power `P^s = exp(s·(ln|P| + i·Arg P))`.
pub fn qpow_from_base(base: Complex64, s: f64) -> Result<Complex64> {
    if base == Complex64::new(0.0, 0.0) {
        return if s < 0.0 {
            Err(NrtError::BranchPoint { re: 0.0, im: 0.0 })
        } else if s == 0.0 {
            Ok(Complex64::new(1.0, 0.0))
        } else {
            Ok(Complex64::new(0.0, 0.0))
        };
    }
    checked_exp(s * principal_ln(base)?)
}

/// Straight line `z(t) = z0 + v·t` in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearPath {
    pub z0: Complex64,
    pub v: Complex64,
}

impl LinearPath {
    pub fn new(z0: Complex64, v: Complex64) -> Result<Self> {
        if z0 == Complex64::new(0.0, 0.0) {
            return Err(NrtError::PathThroughOrigin { t_hit: 0.0 });
        }
        Ok(Self { z0, v })
    }

    pub fn at(&self, t: f64) -> Complex64 {
        self.z0 + self.v * t
    }

    /// Real parameter at which the line passes through the origin, if any.
    ///
    /// The line hits 0 only when its perpendicular distance from the origin
    /// vanishes (relative to `|z0|`).
    pub fn origin_crossing(&self) -> Option<f64> {
        let vv = self.v.norm_sqr();
        if vv == 0.0 {
            return None;
        }
        let cross = (self.v.conj() * self.z0).im;
        let dist = cross.abs() / vv.sqrt();
        if dist > 4.0 * f64::EPSILON * self.z0.norm() {
            return None;
        }
        Some(-(self.v.conj() * self.z0).re / vv)
    }

    fn check_segment(&self, t: f64) -> Result<()> {
        if let Some(t_hit) = self.origin_crossing() {
            let (lo, hi) = if t >= 0.0 { (0.0, t) } else { (t, 0.0) };
            if t_hit >= lo && t_hit <= hi {
                return Err(NrtError::PathThroughOrigin { t_hit });
            }
        }
        if self.at(t) == Complex64::new(0.0, 0.0) {
            return Err(NrtError::PathThroughOrigin { t_hit: t });
        }
        Ok(())
    }

    /// Continuous logarithm of `z(t)/z0`, zero at `t = 0`.
    ///
    /// A segment that avoids the origin subtends an angle strictly less than
    /// π at the origin, so the swept angle is the principal argument of
    /// `z(t)·conj(z0)`.
    pub fn log_ratio(&self, t: f64) -> Result<Complex64> {
        self.check_segment(t)?;
        let zt = self.at(t);
        let swept = principal_arg(zt * self.z0.conj());
        Ok(Complex64::new((zt.norm() / self.z0.norm()).ln(), swept))
    }
}

/// Continuous argument of `z(t)` with `θ(0) = Arg z0`.
pub fn path_arg_unwrapped(path: &LinearPath, t: f64) -> Result<f64> {
    Ok(principal_arg(path.z0) + path.log_ratio(t)?.im)
}

/// Continuous logarithm of `z(t)` starting from the principal logarithm of `z0`.
pub fn log_along_path(path: &LinearPath, t: f64) -> Result<Complex64> {
    Ok(principal_ln(path.z0)? + path.log_ratio(t)?)
}

/// `|z(t)|^s · exp(i·s·θ(t))` with the unwrapped argument.
pub fn cpow_along_path(path: &LinearPath, s: f64, t: f64) -> Result<Complex64> {
    checked_exp(s * log_along_path(path, t)?)
}
