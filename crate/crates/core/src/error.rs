use num_complex::Complex64;
use thiserror::Error;

/// Errors produced by the numerical and combinatorial routines of this crate.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    /// The routine ran out of budget; `best` is the last estimate it had.
    #[error("no convergence after {evaluations} evaluations: {reason} (best estimate {best}, error {error_estimate:e})")]
    Convergence {
        reason: String,
        best: Complex64,
        error_estimate: f64,
        evaluations: usize,
    },

    /// Extrapolation residuals did not shrink as the damping was removed.
    /// This is the signature of a distributional (delta-like) value.
    #[error("damped integral diverges as damping is removed (last estimate {last}, residuals {residuals:?})")]
    Divergence { last: Complex64, residuals: Vec<f64> },

    #[error("singularity: {0}")]
    Singularity(String),

    #[error("jet order {have} too small, need at least {need}")]
    Order { have: usize, need: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("construction error: {0}")]
    Construction(String),

    #[error("adjacency error: {0}")]
    Adjacency(String),

    #[error("degenerate area on triangle {0}")]
    DegenerateArea(String),
}

pub type Result<T> = std::result::Result<T, Error>;
