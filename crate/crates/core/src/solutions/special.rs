//! Particular solution families: q-plane waves, the a = 0 singular packet,
//! the q = 3 pulsating packet, frozen solutions, the Gaussian limit and the
//! harmonic quasi-stationary packet.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{CoefficientState, ModelParams};
use crate::error::{NrtError, Result};
use crate::qcalc::{self, is_q_one};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `a = 0, b = −ik, c = iħk²t/(2m)`.
pub fn plane_wave_coeffs(k: f64, t: f64, params: &ModelParams) -> CoefficientState {
    CoefficientState {
        t,
        a: Complex64::new(0.0, 0.0),
        b: Complex64::new(0.0, -k),
        c: Complex64::new(0.0, params.hbar * k * k * t / (2.0 * params.m)),
    }
}

/// General `a = 0` coefficients: `b = b_c`, `c = −iħb_c²t/(2m) + c_0`.
pub fn zero_curvature_coeffs(
    b_c: Complex64,
    c_0: Complex64,
    t: f64,
    params: &ModelParams,
) -> CoefficientState {
    CoefficientState {
        t,
        a: Complex64::new(0.0, 0.0),
        b: b_c,
        c: c_0 - I * params.hbar * b_c * b_c * t / (2.0 * params.m),
    }
}

/// The singular packet: real `b_c`, `c_0 = −iħb_c²t0/(2m)`.
pub fn singular_packet_coeffs(b_c: f64, t0: f64, t: f64, params: &ModelParams) -> CoefficientState {
    CoefficientState {
        t,
        a: Complex64::new(0.0, 0.0),
        b: Complex64::new(b_c, 0.0),
        c: Complex64::new(0.0, -params.hbar * b_c * b_c * (t + t0) / (2.0 * params.m)),
    }
}

/// `|ψ|²` of the singular packet in its factored real form.
pub fn singular_packet_abs2(b_c: f64, t0: f64, t: f64, x: f64, params: &ModelParams) -> Result<f64> {
    let q = params.q;
    if is_q_one(q) {
        return Ok((-2.0 * b_c * x).exp());
    }
    let tau = t + t0;
    let scale = (1.0 - q) * params.hbar * b_c * b_c * tau / (2.0 * params.m);
    if scale == 0.0 {
        return Err(NrtError::SingularTime { t, reason: "t = −t0".into() });
    }
    let e = 1.0 / (1.0 - q);
    let ratio = (1.0 - (1.0 - q) * b_c * x) / scale;
    Ok((scale * scale).powf(e) * (1.0 + ratio * ratio).powf(e))
}

/// Coefficients of the q = 3 pulsating packet:
/// `a = a_c, b = b_c, c = (b_c² − 2a_c)/(4a_c) + c_1·exp(2iħa_c t/m)`.
pub fn pulsating_coeffs(
    a_c: Complex64,
    b_c: Complex64,
    c_1: Complex64,
    t: f64,
    params: &ModelParams,
) -> Result<CoefficientState> {
    if a_c == Complex64::new(0.0, 0.0) {
        return Err(NrtError::DegenerateInput("pulsating packet needs a_c ≠ 0".into()));
    }
    let phase = qcalc::checked_exp(2.0 * I * params.hbar * a_c * t / params.m)?;
    Ok(CoefficientState { t, a: a_c, b: b_c, c: (b_c * b_c - 2.0 * a_c) / (4.0 * a_c) + c_1 * phase })
}

/// `ψ = (1/√2)[a_c x² + b_c x + b_c²/(4a_c) + c_1 exp(2iħa_c t/m)]^{−1/2}`.
pub fn q3_pulsating(
    a_c: Complex64,
    b_c: Complex64,
    c_1: Complex64,
    t: f64,
    x: f64,
    params: &ModelParams,
) -> Result<Complex64> {
    if a_c == Complex64::new(0.0, 0.0) {
        return Err(NrtError::DegenerateInput("pulsating packet needs a_c ≠ 0".into()));
    }
    let phase = qcalc::checked_exp(2.0 * I * params.hbar * a_c * t / params.m)?;
    let bracket = (a_c * x + b_c) * x + b_c * b_c / (4.0 * a_c) + c_1 * phase;
    Ok(std::f64::consts::FRAC_1_SQRT_2 * qcalc::qpow_from_base(bracket, -0.5)?)
}

fn check_frozen(b: f64, c: f64, q: f64) -> Result<()> {
    if b == 0.0 || c == 0.0 {
        return Err(NrtError::DegenerateInput("frozen solution needs b ≠ 0 and c ≠ 0".into()));
    }
    if (q - 2.0).abs() < qcalc::Q_ONE_EPS {
        return Err(NrtError::InvalidParams("frozen solution undefined at q = 2".into()));
    }
    Ok(())
}

/// `log ψ` of the frozen solution `(bx + ic)^{1/(2−q)}`.
pub fn frozen_log_psi(b: f64, c: f64, q: f64, x: f64) -> Result<Complex64> {
    check_frozen(b, c, q)?;
    Ok(qcalc::principal_ln(Complex64::new(b * x, c))? / (2.0 - q))
}

/// `ψ = (bx + ic)^{1/(2−q)}`.
pub fn frozen_psi(b: f64, c: f64, q: f64, x: f64) -> Result<Complex64> {
    check_frozen(b, c, q)?;
    qcalc::qpow_from_base(Complex64::new(b * x, c), 1.0 / (2.0 - q))
}

fn check_gaussian(alpha: f64) -> Result<()> {
    if !(alpha > 0.0) {
        return Err(NrtError::Domain(format!("Gaussian width α must be > 0, got {alpha}")));
    }
    Ok(())
}

/// `log ψ` of the normalized free Gaussian packet of the linear equation.
pub fn gaussian_limit_log_psi(
    k0: f64,
    alpha: f64,
    t: f64,
    x: f64,
    params: &ModelParams,
) -> Result<Complex64> {
    check_gaussian(alpha)?;
    let (hbar, m) = (params.hbar, params.m);
    let z = Complex64::new(alpha, 2.0 * hbar * t / m);
    // tan 2θ = 2ħt/(mα)
    let theta = 0.5 * (2.0 * hbar * t).atan2(m * alpha);
    let amp = 0.25 * (2.0 * alpha / PI / z.norm_sqr()).ln();
    let shift = x - hbar * k0 * t / m;
    Ok(amp - I * (theta + hbar * k0 * k0 * t / (2.0 * m)) + I * k0 * x - shift * shift / z)
}

pub fn gaussian_limit_psi(k0: f64, alpha: f64, t: f64, x: f64, params: &ModelParams) -> Result<Complex64> {
    qcalc::checked_exp(gaussian_limit_log_psi(k0, alpha, t, x, params)?)
}

/// Initial coefficients of the Gaussian packet in ansatz form.
pub fn gaussian_limit_initial(k0: f64, alpha: f64) -> Result<(Complex64, Complex64, Complex64)> {
    check_gaussian(alpha)?;
    Ok((
        Complex64::new(1.0 / alpha, 0.0),
        Complex64::new(0.0, -k0),
        Complex64::new(-0.25 * (2.0 / (PI * alpha)).ln(), 0.0),
    ))
}

fn spring(params: &ModelParams) -> Result<f64> {
    match params.k {
        Some(k) if k > 0.0 => Ok(k),
        _ => Err(NrtError::InvalidParams("harmonic solution needs K > 0".into())),
    }
}

/// `a_c = (1/ħ)√(mK/(2(3−q)))`, the fixed point of the harmonic `a` equation.
pub fn harmonic_a_c(params: &ModelParams) -> Result<f64> {
    let k = spring(params)?;
    if params.q >= 3.0 {
        return Err(NrtError::Domain("harmonic fixed point needs q < 3".into()));
    }
    Ok((params.m * k / (2.0 * (3.0 - params.q))).sqrt() / params.hbar)
}

/// Singularity time `t_c = πm/(|q−1|ħa_c)`; infinite at `q = 1`.
pub fn harmonic_singular_time(params: &ModelParams) -> Result<f64> {
    let a_c = harmonic_a_c(params)?;
    if is_q_one(params.q) {
        return Ok(f64::INFINITY);
    }
    Ok(PI * params.m / ((params.q - 1.0).abs() * params.hbar * a_c))
}

fn check_harmonic(params: &ModelParams) -> Result<f64> {
    let a_c = harmonic_a_c(params)?;
    if is_q_one(params.q) {
        return Err(NrtError::Domain("quasi-stationary packet needs q ≠ 1".into()));
    }
    Ok(a_c)
}

/// `a = a_c, b = 0, c = [1 − exp(−i(1−q)ħa_c t/m)]/(1−q)`.
pub fn harmonic_coeffs(t: f64, params: &ModelParams) -> Result<CoefficientState> {
    let a_c = check_harmonic(params)?;
    let q = params.q;
    let w = Complex64::new(0.0, -(1.0 - q) * params.hbar * a_c * t / params.m);
    Ok(CoefficientState {
        t,
        a: Complex64::new(a_c, 0.0),
        b: Complex64::new(0.0, 0.0),
        c: -qcalc::expm1(w) / (1.0 - q),
    })
}

/// `ψ = [exp(−i(1−q)ħa_c t/m) − (1−q)a_c x²]^{1/(1−q)}`.
pub fn harmonic_quasistationary(t: f64, x: f64, params: &ModelParams) -> Result<Complex64> {
    let a_c = check_harmonic(params)?;
    let q = params.q;
    let phase = Complex64::from_polar(1.0, -(1.0 - q) * params.hbar * a_c * t / params.m);
    qcalc::qpow_from_base(phase - (1.0 - q) * a_c * x * x, 1.0 / (1.0 - q))
}

/// The `q → 1` limit: `exp(−iωt/2)·exp(−mωx²/(2ħ))`, `ω = √(K/m)`.
pub fn harmonic_ground_state(t: f64, x: f64, params: &ModelParams) -> Result<Complex64> {
    let k = spring(params)?;
    let omega = (k / params.m).sqrt();
    Ok(Complex64::from_polar(1.0, -0.5 * omega * t) * (-params.m * omega * x * x / (2.0 * params.hbar)).exp())
}

#[cfg(test)]
mod tests {
    use super::super::free::{base_polynomial, eval_ansatz};
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn plane_wave_examples() {
        let p = ModelParams::with_q(2.0);
        let s = plane_wave_coeffs(1.0, 0.0, &p);
        assert_eq!((s.a, s.b, s.c), (c(0.0, 0.0), c(0.0, -1.0), c(0.0, 0.0)));
        assert!((eval_ansatz(&s, 2.0, 0.0).unwrap() - 1.0).norm() < 1e-15);

        let s = plane_wave_coeffs(2.0, 1.0, &p);
        assert_eq!(s.c, c(0.0, 2.0));
        // P = 1 + c = 1 + 2i
        assert!((eval_ansatz(&s, 2.0, 0.0).unwrap() - c(0.2, -0.4)).norm() < 1e-15);
    }

    #[test]
    fn plane_wave_modulus_closed_form() {
        let q = 2.0;
        let p = ModelParams::with_q(q);
        let (k, t) = (1.3, 0.7);
        let w = p.hbar * k * k / (2.0 * p.m);
        let s = plane_wave_coeffs(k, t, &p);
        for i in 0..=100 {
            let x = -5.0 + 0.1 * i as f64;
            let phase = k * x - w * t;
            let closed = (1.0 + (1.0 - q) * (1.0 - q) * phase * phase).powf(1.0 / (1.0 - q));
            assert!((eval_ansatz(&s, q, x).unwrap().norm_sqr() - closed).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_packet_value() {
        let p = ModelParams::with_q(2.0);
        let s = singular_packet_coeffs(1.0, 1.0, 0.0, &p);
        let via_ansatz = eval_ansatz(&s, 2.0, 0.0).unwrap().norm_sqr();
        let closed = singular_packet_abs2(1.0, 1.0, 0.0, 0.0, &p).unwrap();
        assert!((via_ansatz - 0.8).abs() < 1e-15);
        assert!((closed - 0.8).abs() < 1e-15);
        for x in [-4.0, -1.0, 0.3, 2.0] {
            for t in [0.0, 0.5, 3.0] {
                let s = singular_packet_coeffs(1.0, 1.0, t, &p);
                let a = eval_ansatz(&s, 2.0, x).unwrap().norm_sqr();
                let b = singular_packet_abs2(1.0, 1.0, t, x, &p).unwrap();
                assert!((a - b).abs() < 1e-14 * b.max(1.0));
            }
        }
    }

    #[test]
    fn singular_packet_q1_limit_is_exponential() {
        let p = ModelParams::with_q(1.0 + 1e-7);
        for x in [-1.0, 0.0, 0.5, 1.5] {
            let s = singular_packet_coeffs(0.8, 1.0, 0.2, &p);
            let v = eval_ansatz(&s, p.q, x).unwrap().norm_sqr();
            let limit = (-2.0 * 0.8 * x).exp();
            assert!((v - limit).abs() < 1e-5 * limit);
        }
    }

    #[test]
    fn pulsating_examples() {
        let p = ModelParams::with_q(3.0);
        let (a_c, b_c) = (c(1.0, 0.0), c(0.0, 1.0));
        let stationary = |t| q3_pulsating(a_c, b_c, c(0.0, 0.0), t, 0.7, &p).unwrap();
        assert_eq!(stationary(0.0), stationary(2.3));

        let c_1 = c(0.1, 0.0);
        let period = PI * p.m / (p.hbar * a_c.re);
        for i in 0..=100 {
            let x = -5.0 + 0.1 * i as f64;
            for t in [0.0, 0.4, 1.9] {
                let now = q3_pulsating(a_c, b_c, c_1, t, x, &p).unwrap().norm_sqr();
                let later = q3_pulsating(a_c, b_c, c_1, t + period, x, &p).unwrap().norm_sqr();
                assert!((now - later).abs() < 1e-12 * now.max(1.0));
            }
        }
    }

    #[test]
    fn pulsating_matches_ansatz_at_q3() {
        let p = ModelParams::with_q(3.0);
        let (a_c, b_c, c_1) = (c(0.8, 0.3), c(-0.4, 0.9), c(0.2, -0.1));
        for t in [0.0, 0.6, 2.0] {
            let s = pulsating_coeffs(a_c, b_c, c_1, t, &p).unwrap();
            for x in [-3.0, -0.5, 0.0, 1.2] {
                let direct = q3_pulsating(a_c, b_c, c_1, t, x, &p).unwrap();
                let ansatz = eval_ansatz(&s, 3.0, x).unwrap();
                assert!((direct - ansatz).norm() < 1e-13 * direct.norm().max(1.0));
            }
        }
        assert!(pulsating_coeffs(c(0.0, 0.0), b_c, c_1, 0.0, &p).is_err());
    }

    #[test]
    fn frozen_examples() {
        assert!((frozen_psi(1.0, 1.0, 3.0, 0.0).unwrap() - c(0.0, -1.0)).norm() < 1e-15);
        assert!((frozen_psi(1.0, 1.0, 3.0, 1.0).unwrap().norm_sqr() - 0.5).abs() < 1e-15);
        for q in [2.5, 3.5] {
            for x in [-2.0, 0.0, 1.5] {
                let closed = (x * x + 0.25f64).powf(1.0 / (2.0 - q));
                let v = frozen_psi(1.0, 0.5, q, x).unwrap().norm_sqr();
                assert!((v - closed).abs() < 1e-14 * closed.max(1.0));
            }
        }
        assert!(matches!(frozen_psi(0.0, 1.0, 3.0, 0.0), Err(NrtError::DegenerateInput(_))));
        assert!(matches!(frozen_psi(1.0, 0.0, 3.0, 0.0), Err(NrtError::DegenerateInput(_))));
    }

    #[test]
    fn gaussian_initial_slice() {
        let p = ModelParams::with_q(1.0);
        let alpha = 1.7;
        for x in [-2.0, 0.0, 0.4, 3.0] {
            let v = gaussian_limit_psi(0.0, alpha, 0.0, x, &p).unwrap();
            let real = (2.0 / (PI * alpha)).powf(0.25) * (-x * x / alpha).exp();
            assert!((v - c(real, 0.0)).norm() < 1e-15);
        }
        assert!(gaussian_limit_psi(0.0, 0.0, 0.0, 0.0, &p).is_err());
    }

    #[test]
    fn gaussian_matches_ansatz_initial_data() {
        let p = ModelParams::with_q(1.0);
        let (a0, b0, c0) = gaussian_limit_initial(1.1, 0.8).unwrap();
        let s = CoefficientState { t: 0.0, a: a0, b: b0, c: c0 };
        for x in [-2.0, 0.0, 1.3] {
            let g = gaussian_limit_psi(1.1, 0.8, 0.0, x, &p).unwrap();
            assert!((eval_ansatz(&s, 1.0, x).unwrap() - g).norm() < 1e-15);
        }
    }

    #[test]
    fn harmonic_initial_slice_and_routes() {
        let p = ModelParams::with_q(2.0).with_spring(1.0);
        let a_c = harmonic_a_c(&p).unwrap();
        assert!((a_c - 0.5f64.sqrt()).abs() < 1e-15);
        for x in [-2.0, 0.0, 1.0] {
            let v = harmonic_quasistationary(0.0, x, &p).unwrap();
            let qg = (1.0 - (1.0 - 2.0) * a_c * x * x).powf(-1.0);
            assert!((v - c(qg, 0.0)).norm() < 1e-15);
            for t in [0.3, 1.1, -0.8] {
                let s = harmonic_coeffs(t, &p).unwrap();
                let a = eval_ansatz(&s, 2.0, x).unwrap();
                let b = harmonic_quasistationary(t, x, &p).unwrap();
                assert!((a - b).norm() < 1e-14);
            }
        }
        let tc = harmonic_singular_time(&p).unwrap();
        assert!((tc - PI / a_c).abs() < 1e-14);
        // the base polynomial touches zero at x = 1/√a_c when t = t_c
        let s = harmonic_coeffs(tc, &p).unwrap();
        let xr = (1.0 / a_c).sqrt();
        assert!(base_polynomial(&s, 2.0, xr).norm() < 1e-14);
    }

    #[test]
    fn harmonic_q1_limit() {
        let p = ModelParams::with_q(1.0 + 1e-4).with_spring(1.0);
        for i in 0..=60 {
            let x = -3.0 + 0.1 * i as f64;
            for j in 0..=10 {
                let t = 0.1 * j as f64;
                let v = harmonic_quasistationary(t, x, &p).unwrap();
                let g = harmonic_ground_state(t, x, &p).unwrap();
                assert!((v - g).norm() <= 1e-3 * g.norm());
            }
        }
    }

    #[test]
    fn harmonic_preconditions() {
        assert!(harmonic_a_c(&ModelParams::with_q(2.0)).is_err());
        assert!(harmonic_a_c(&ModelParams::with_q(3.5).with_spring(1.0)).is_err());
        assert!(harmonic_coeffs(0.0, &ModelParams::with_q(1.0).with_spring(1.0)).is_err());
    }
}
