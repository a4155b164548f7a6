//! Method-of-lines evolution of the full equation on a uniform grid.
//!
//! Space: 4th-order differences of `L(ψ) = expm1((2−q) log ψ)/(2−q)`, which
//! equals `ψ^{2−q}/(2−q)` up to a constant and is `log ψ` at `q = 2`.
//! Time: classical RK4.
//!
//! `log ψ` is taken on the principal branch node by node. The scheme is
//! only meaningful while `ψ` keeps clear of the negative real axis (for
//! non-integer `2−q`); compare against a closed form where one exists.

use num_complex::Complex64;

use super::residual::nonlinear_potential;
use crate::error::{NrtError, Result};
use crate::qcalc;
use crate::solutions::{ModelParams, Potential};

/// Nodes whose modulus exceeds this abort the evolution.
pub const BLOWUP_LIMIT: f64 = 1e6;

#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    pub x_min: f64,
    pub h: f64,
    pub psi: Vec<Complex64>,
    pub t: f64,
}

impl FieldState {
    /// Samples `f` on `n` equispaced nodes spanning `[x_min, x_max]`.
    pub fn from_fn(
        x_min: f64,
        x_max: f64,
        n: usize,
        t: f64,
        mut f: impl FnMut(f64) -> Result<Complex64>,
    ) -> Result<Self> {
        if n < 6 || !(x_max > x_min) {
            return Err(NrtError::InvalidParams(format!(
                "grid needs at least 6 nodes on a non-empty interval, got {n} on [{x_min}, {x_max}]"
            )));
        }
        let h = (x_max - x_min) / (n - 1) as f64;
        let psi = (0..n).map(|j| f(x_min + j as f64 * h)).collect::<Result<Vec<_>>>()?;
        Ok(Self { x_min, h, psi, t })
    }

    pub fn x(&self, j: usize) -> f64 {
        self.x_min + j as f64 * self.h
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.psi.len()).map(|j| self.x(j)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// End nodes held at their initial values.
    Pinned,
    /// Every node evolves; the two outermost nodes on each side use
    /// one-sided 4th-order stencils.
    OneSided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PdeOptions {
    /// Fixed time step; `None` picks [`stable_dt`] of the initial field.
    pub dt: Option<f64>,
    pub boundary: Boundary,
    pub stability_factor: f64,
    /// Largest boundary modulus accepted with [`Boundary::Pinned`].
    pub boundary_eps: f64,
}

impl Default for PdeOptions {
    fn default() -> Self {
        Self { dt: None, boundary: Boundary::Pinned, stability_factor: 0.1, boundary_eps: 1e-8 }
    }
}

/// `factor · h² · (2m/ħ) / max_j |ψ_j|^{1−q}`, zero nodes skipped.
pub fn stable_dt(field: &FieldState, params: &ModelParams, factor: f64) -> f64 {
    let stiff = field
        .psi
        .iter()
        .map(|z| z.norm())
        .filter(|&r| r > 0.0)
        .map(|r| r.powf(1.0 - params.q))
        .fold(1e-300, f64::max);
    let stiff = if field.psi.iter().all(|z| z.norm() == 0.0) { 1.0 } else { stiff };
    factor * field.h * field.h * 2.0 * params.m / params.hbar / stiff
}

/// `‖a − b‖₂ / ‖b‖₂`.
pub fn relative_l2(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    (num / den).sqrt()
}

fn potential_of(psi: Complex64, q: f64) -> Complex64 {
    if psi.norm() == 0.0 {
        // limit of expm1((2−q) log ψ)/(2−q) for q < 2
        return Complex64::new(-1.0 / (2.0 - q), 0.0);
    }
    nonlinear_potential(Complex64::new(psi.norm().ln(), qcalc::principal_arg(psi)), q)
}

fn power_q(psi: Complex64, q: f64) -> Complex64 {
    if psi.norm() == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let log = Complex64::new(psi.norm().ln(), qcalc::principal_arg(psi));
    (q * log).exp()
}

fn second_difference(f: &[Complex64], h: f64, boundary: Boundary, out: &mut [Complex64]) {
    let n = f.len();
    let s = 1.0 / (12.0 * h * h);
    for j in 2..n - 2 {
        out[j] = (-f[j - 2] + 16.0 * f[j - 1] - 30.0 * f[j] + 16.0 * f[j + 1] - f[j + 2]) * s;
    }
    let near = |g: &dyn Fn(usize) -> Complex64| {
        (10.0 * g(0) - 15.0 * g(1) - 4.0 * g(2) + 14.0 * g(3) - 6.0 * g(4) + g(5)) * s
    };
    let edge = |g: &dyn Fn(usize) -> Complex64| {
        (45.0 * g(0) - 154.0 * g(1) + 214.0 * g(2) - 156.0 * g(3) + 61.0 * g(4) - 10.0 * g(5)) * s
    };
    let left = |i: usize| f[i];
    let right = |i: usize| f[n - 1 - i];
    out[1] = near(&left);
    out[n - 2] = near(&right);
    match boundary {
        Boundary::OneSided => {
            out[0] = edge(&left);
            out[n - 1] = edge(&right);
        }
        Boundary::Pinned => {
            out[0] = Complex64::new(0.0, 0.0);
            out[n - 1] = Complex64::new(0.0, 0.0);
        }
    }
}

struct Workspace {
    l: Vec<Complex64>,
    d2: Vec<Complex64>,
}

fn rhs(
    field: &FieldState,
    psi: &[Complex64],
    params: &ModelParams,
    potential: Potential,
    boundary: Boundary,
    ws: &mut Workspace,
    out: &mut [Complex64],
) {
    let q = params.q;
    for (l, &z) in ws.l.iter_mut().zip(psi) {
        *l = potential_of(z, q);
    }
    second_difference(&ws.l, field.h, boundary, &mut ws.d2);
    let kin = Complex64::new(0.0, params.hbar / (2.0 * params.m));
    let pot = Complex64::new(0.0, -1.0 / params.hbar);
    let n = psi.len();
    for j in 0..n {
        let v = potential.value(field.x(j));
        let mut r = kin * ws.d2[j];
        if v != 0.0 {
            r += pot * v * power_q(psi[j], q);
        }
        out[j] = r;
    }
    if boundary == Boundary::Pinned {
        out[0] = Complex64::new(0.0, 0.0);
        out[n - 1] = Complex64::new(0.0, 0.0);
    }
}

fn combine(out: &mut [Complex64], y: &[Complex64], w: f64, d: &[Complex64]) {
    for ((o, y), d) in out.iter_mut().zip(y).zip(d) {
        *o = y + w * d;
    }
}

/// Advances `initial` to `t_end` with fixed RK4 steps.
pub fn evolve_pde(
    initial: &FieldState,
    params: &ModelParams,
    potential: Potential,
    t_end: f64,
    opts: &PdeOptions,
) -> Result<FieldState> {
    let n = initial.psi.len();
    if n < 6 {
        return Err(NrtError::InvalidParams(format!("grid needs at least 6 nodes, got {n}")));
    }
    if params.q >= 2.0 && initial.psi.iter().any(|z| z.norm() == 0.0) {
        return Err(NrtError::Domain(format!("ψ^(2−q) is singular at zero nodes for q = {} ≥ 2", params.q)));
    }
    if opts.boundary == Boundary::Pinned {
        let edge = initial.psi[0].norm().max(initial.psi[n - 1].norm());
        if edge >= opts.boundary_eps {
            return Err(NrtError::Domain(format!(
                "pinned boundaries need |ψ| < {} at the edges, got {edge:e}",
                opts.boundary_eps
            )));
        }
    }
    let bound = stable_dt(initial, params, opts.stability_factor);
    let dt_req = opts.dt.unwrap_or(bound);
    if !(dt_req > 0.0) || dt_req > bound * (1.0 + 1e-12) {
        return Err(NrtError::Stability {
            t: initial.t,
            reason: format!("dt = {dt_req:e} exceeds the stability bound {bound:e}"),
        });
    }
    let span = t_end - initial.t;
    if span < 0.0 {
        return Err(NrtError::InvalidParams("evolve_pde runs forward in time only".into()));
    }
    let steps = (span / dt_req).ceil().max(if span > 0.0 { 1.0 } else { 0.0 }) as usize;
    let dt = if steps == 0 { 0.0 } else { span / steps as f64 };

    let zero = Complex64::new(0.0, 0.0);
    let mut ws = Workspace { l: vec![zero; n], d2: vec![zero; n] };
    let (mut k1, mut k2, mut k3, mut k4) = (vec![zero; n], vec![zero; n], vec![zero; n], vec![zero; n]);
    let mut stage = vec![zero; n];
    let mut state = initial.clone();
    let bc = opts.boundary;

    for step in 0..steps {
        rhs(&state, &state.psi, params, potential, bc, &mut ws, &mut k1);
        combine(&mut stage, &state.psi, 0.5 * dt, &k1);
        rhs(&state, &stage, params, potential, bc, &mut ws, &mut k2);
        combine(&mut stage, &state.psi, 0.5 * dt, &k2);
        rhs(&state, &stage, params, potential, bc, &mut ws, &mut k3);
        combine(&mut stage, &state.psi, dt, &k3);
        rhs(&state, &stage, params, potential, bc, &mut ws, &mut k4);

        let t_next = initial.t + (step + 1) as f64 * dt;
        for j in 0..n {
            let y = state.psi[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
            if !(y.re.is_finite() && y.im.is_finite()) || y.norm() > BLOWUP_LIMIT {
                return Err(NrtError::Stability {
                    t: t_next,
                    reason: format!("node {j} reached |ψ| = {:e}", y.norm()),
                });
            }
            state.psi[j] = y;
        }
        state.t = t_next;
    }
    state.t = t_end;
    Ok(state)
}
