use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "quadrature did not converge: {value:e} ± {error:e} after {subdivisions} subdivisions"
    )]
    NoConvergence {
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("integrand returned {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },

    #[error("semi-infinite tail still not decaying at x = {reached} after {chunks} chunks")]
    TailBound { chunks: usize, reached: f64 },

    #[error("no sign change on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("root search stalled after {iterations} iterations (bracket [{lo}, {hi}])")]
    RootStalled { iterations: usize, lo: f64, hi: f64 },

    #[error("design matrix is rank deficient (condition {condition:e})")]
    RankDeficient { condition: f64 },

    #[error("fit residual {residual:e} exceeds threshold {threshold:e}")]
    FitResidual { residual: f64, threshold: f64 },

    #[error("pole at ω = {0}")]
    Pole(f64),

    #[error("closed form {closed:e} disagrees with defining integral {defining:e} at {at}")]
    OracleMismatch { at: f64, closed: f64, defining: f64 },

    #[error("{0}")]
    Domain(String),
}

pub type Result<T> = std::result::Result<T, Error>;
