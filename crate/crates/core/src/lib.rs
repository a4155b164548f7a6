//! Exact q-Gaussian wave packet solutions of the NRT nonlinear Schrödinger
//! equation
//!
//! ```text
//! iħ ∂ψ/∂t = −(1/(2−q)) (ħ²/2m) ∂²(ψ^{2−q})/∂x² + V(x) ψ^q
//! ```
//!
//! together with the machinery used to check them independently: coefficient
//! ODE integration, method-of-lines PDE evolution, pointwise residuals and
//! norm quadrature.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod genfamily;
pub mod observables;
pub mod qcalc;
pub mod solutions;

pub use error::{NrtError, Result};
