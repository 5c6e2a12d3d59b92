use thiserror::Error;

/// Errors produced by the numeric kernels and bound constructions.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// The supplied bracket does not straddle a sign change.
    #[error("no sign change on bracket [{lo}, {hi}]: f(lo)*f(hi) = {product}")]
    NoSignChange { lo: f64, hi: f64, product: f64 },

    /// An iterative routine exhausted its budget before meeting tolerance.
    #[error("no convergence after {iterations} iterations (residual {residual})")]
    NoConvergence { iterations: usize, residual: f64 },

    /// An input violates a documented invariant.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Evaluation requested outside the domain where a bound is finite.
    #[error("domain exceeded: {0}")]
    DomainExceeded(String),

    /// The admissible parameter range is empty; collapsed to its lower end.
    #[error("inconsistent range: {0}")]
    InconsistentRange(String),

    /// The renewal truncation is too short for the requested accuracy.
    #[error("truncation too short: tail term {tail} exceeds 1e-6 of value {value}")]
    TruncationTooShort { tail: f64, value: f64 },

    /// Probability mass escaped the truncated state space.
    #[error("mass leak {leak} beyond state cap {cap} exceeds 1e-12")]
    MassLeak { leak: f64, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
