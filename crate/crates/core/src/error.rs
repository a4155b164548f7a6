use thiserror::Error;

pub type Result<T> = std::result::Result<T, NrtError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NrtError {
    #[error("branch point: base {re} + {im}i vanishes with a negative exponent")]
    BranchPoint { re: f64, im: f64 },

    #[error("magnitude overflow ({0})")]
    Overflow(String),

    #[error("straight-line path passes through the origin at t = {t_hit}")]
    PathThroughOrigin { t_hit: f64 },

    #[error("degenerate initial data: a(0) = 0 (use the a = 0 family)")]
    DegenerateInitial,

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("singular time t = {t}: {reason}")]
    SingularTime { t: f64, reason: String },

    #[error("step size collapsed below {dt_min:e} at t = {t}")]
    Stiffness { t: f64, dt_min: f64 },

    #[error("PDE evolution unstable at t = {t}: {reason}")]
    Stability { t: f64, reason: String },

    #[error("norm diverges: {0}")]
    DivergentNorm(String),

    #[error("outside domain of validity: {0}")]
    Domain(String),

    #[error("G' is not invertible on the samples: {0}")]
    NonInvertible(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}
