//! Adaptive Dormand–Prince 5(4) integration of the coefficient equations.

use num_complex::Complex64;

use super::coeff_rhs;
use crate::error::{NrtError, Result};
use crate::solutions::{CoefficientState, ModelParams, Potential};

/// Smallest admissible step; reaching it signals a coefficient singularity.
pub const DT_MIN: f64 = 1e-12;

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// 5th-order weights equal the last row of A (FSAL)
const B: [f64; 7] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
const B_HAT: [f64; 7] =
    [5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0, -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0];

type State = [Complex64; 3];

/// Integrator settings. `tol` is used as both absolute and relative tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub tol: f64,
    pub max_step: f64,
    pub dt_min: f64,
}

impl OdeOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, max_step: f64::INFINITY, dt_min: DT_MIN }
    }
}

/// Accepted samples of an integration together with step statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTrajectory {
    pub samples: Vec<CoefficientState>,
    pub steps: usize,
    pub rejected: usize,
    /// Largest accepted local error estimate, in the units of `tol`.
    pub max_local_error: f64,
}

impl CoefficientTrajectory {
    pub fn last(&self) -> &CoefficientState {
        self.samples.last().expect("trajectory has at least the initial sample")
    }
}

fn rhs(t: f64, y: &State, params: &ModelParams, potential: Potential) -> State {
    let s = CoefficientState { t, a: y[0], b: y[1], c: y[2] };
    let (da, db, dc) = coeff_rhs(&s, params, potential);
    [da, db, dc]
}

fn axpy(y: &State, h: f64, coeffs: &[f64], k: &[State; 7]) -> State {
    let mut out = *y;
    for (j, &w) in coeffs.iter().enumerate() {
        if w != 0.0 {
            for i in 0..3 {
                out[i] += h * w * k[j][i];
            }
        }
    }
    out
}

fn error_norm(y: &State, y_new: &State, err: &State, tol: f64) -> f64 {
    let mut acc = 0.0f64;
    for i in 0..3 {
        let scale = tol + tol * y[i].norm().max(y_new[i].norm());
        acc = acc.max(err[i].norm() / scale);
    }
    acc
}

pub fn integrate_coeffs(
    initial: &CoefficientState,
    t_end: f64,
    params: &ModelParams,
    potential: Potential,
    tol: f64,
) -> Result<CoefficientTrajectory> {
    integrate_coeffs_with(initial, t_end, params, potential, &OdeOptions::with_tol(tol))
}

/// Integrates from `initial.t` to `t_end` (either direction).
pub fn integrate_coeffs_with(
    initial: &CoefficientState,
    t_end: f64,
    params: &ModelParams,
    potential: Potential,
    opts: &OdeOptions,
) -> Result<CoefficientTrajectory> {
    if !(opts.tol > 0.0) {
        return Err(NrtError::InvalidParams(format!("tolerance must be > 0, got {}", opts.tol)));
    }
    let span = t_end - initial.t;
    let dir = span.signum();
    let mut t = initial.t;
    let mut y: State = [initial.a, initial.b, initial.c];
    let mut samples = vec![*initial];
    let mut traj = CoefficientTrajectory { samples: Vec::new(), steps: 0, rejected: 0, max_local_error: 0.0 };
    if span == 0.0 {
        traj.samples = samples;
        return Ok(traj);
    }

    let mut k = [[Complex64::new(0.0, 0.0); 3]; 7];
    k[0] = rhs(t, &y, params, potential);
    let scale0 = y.iter().map(|v| v.norm()).fold(0.0, f64::max) + 1.0;
    let slope0 = k[0].iter().map(|v| v.norm()).fold(0.0, f64::max);
    let mut h = (0.01 * scale0 / slope0.max(1e-12)).min(span.abs()).min(opts.max_step).max(opts.dt_min);

    while (t_end - t) * dir > 0.0 {
        if h < opts.dt_min {
            return Err(NrtError::Stiffness { t, dt_min: opts.dt_min });
        }
        let last = (t_end - t).abs() <= h;
        let step = if last { t_end - t } else { dir * h };

        for stage in 1..7 {
            let ys = axpy(&y, step, &A[stage][..stage], &k);
            k[stage] = rhs(t + C[stage] * step, &ys, params, potential);
        }
        let y_new = axpy(&y, step, &B, &k);
        let mut err = [Complex64::new(0.0, 0.0); 3];
        for i in 0..3 {
            for j in 0..7 {
                err[i] += step * (B[j] - B_HAT[j]) * k[j][i];
            }
        }
        let e = error_norm(&y, &y_new, &err, opts.tol);
        let finite = y_new.iter().all(|v| v.re.is_finite() && v.im.is_finite());

        if finite && e <= 1.0 {
            t = if last { t_end } else { t + step };
            y = y_new;
            k[0] = k[6];
            traj.steps += 1;
            traj.max_local_error = traj.max_local_error.max(e * opts.tol);
            samples.push(CoefficientState { t, a: y[0], b: y[1], c: y[2] });
            let grow = if e == 0.0 { 5.0 } else { (0.9 * e.powf(-0.2)).clamp(0.2, 5.0) };
            h = (step.abs() * grow).min(opts.max_step);
        } else {
            traj.rejected += 1;
            let shrink = if finite { (0.9 * e.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
            h = step.abs() * shrink;
        }
    }
    traj.samples = samples;
    Ok(traj)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plane_wave_phase_flow_is_exact() {
        // a = 0 keeps b constant and c linear in t
        let p = ModelParams { q: 1.7, hbar: 0.8, m: 1.3, k: None };
        let b0 = Complex64::new(0.4, -1.1);
        let init =
            CoefficientState { t: 0.0, a: Complex64::new(0.0, 0.0), b: b0, c: Complex64::new(0.2, 0.0) };
        let tr = integrate_coeffs(&init, 3.0, &p, Potential::Free, 1e-12).unwrap();
        let end = tr.last();
        assert_eq!(end.t, 3.0);
        let expected = init.c - Complex64::new(0.0, 1.0) * p.hbar * b0 * b0 * 3.0 / (2.0 * p.m);
        assert!((end.c - expected).norm() < 1e-13);
        assert_eq!(end.b, b0);
        assert!(tr.max_local_error <= 1e-12);
    }

    #[test]
    fn rejects_bad_tolerance() {
        let init = CoefficientState {
            t: 0.0,
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
        };
        let p = ModelParams::with_q(2.0);
        assert!(integrate_coeffs(&init, 1.0, &p, Potential::Free, 0.0).is_err());
    }

    #[test]
    fn samples_strictly_monotone_both_directions() {
        let init = CoefficientState {
            t: 0.0,
            a: Complex64::new(1.0, 0.2),
            b: Complex64::new(0.3, 0.0),
            c: Complex64::new(0.0, 0.1),
        };
        let p = ModelParams::with_q(1.5);
        let fwd = integrate_coeffs(&init, 2.0, &p, Potential::Free, 1e-9).unwrap();
        assert!(fwd.samples.windows(2).all(|w| w[1].t > w[0].t));
        let back = integrate_coeffs(&init, -2.0, &p, Potential::Free, 1e-9).unwrap();
        assert!(back.samples.windows(2).all(|w| w[1].t < w[0].t));
        assert_eq!(back.last().t, -2.0);
    }
}
