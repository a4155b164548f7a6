//! Numerical cross-checks: coefficient ODE integration, residuals of the
//! governing equation, and a method-of-lines PDE solver.

mod harmonic;
mod ode;
mod pde;
mod residual;

pub use harmonic::{harmonic_delta, harmonic_delta_check, ImplicitHarmonicConstant};
pub use ode::{integrate_coeffs, integrate_coeffs_with, CoefficientTrajectory, OdeOptions, DT_MIN};
pub use pde::{evolve_pde, relative_l2, stable_dt, Boundary, FieldState, PdeOptions};
pub use residual::{
    family_residual_fd, nonlinear_potential, nrt_residual, nrt_residual_fd, FD_SPACE_STEP, FD_TIME_STEP,
};

use num_complex::Complex64;

use crate::solutions::{CoefficientState, ModelParams, Potential};

/// Right-hand side `(ȧ, ḃ, ċ)` of the coefficient equations
///
/// `iȧ = (ħ/m)(3−q)a² − K/(2ħ)`, `iḃ = (ħ/m)(3−q)ab`,
/// `iċ = (ħ/m)((1−q)ac − a + b²/2)`; the `K` term is present only for the
/// harmonic potential.
pub fn coeff_rhs(
    state: &CoefficientState,
    params: &ModelParams,
    potential: Potential,
) -> (Complex64, Complex64, Complex64) {
    let minus_i = Complex64::new(0.0, -1.0);
    let (q, r) = (params.q, params.hbar / params.m);
    let CoefficientState { a, b, c, .. } = *state;
    let spring = match potential {
        Potential::Free => 0.0,
        Potential::Harmonic { k } => k / (2.0 * params.hbar),
    };
    (
        minus_i * (r * (3.0 - q) * a * a - spring),
        minus_i * r * (3.0 - q) * a * b,
        minus_i * r * ((1.0 - q) * a * c - a + 0.5 * b * b),
    )
}
