//! Error types shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A constructor invariant or operation precondition was violated.
    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    /// The two signals do not share a sample grid.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// Adaptive quadrature exhausted its subdivision budget. Carries the best
    /// value reached so the caller can decide whether it is still usable.
    #[error("quadrature did not converge: est_error {est_error:.3e} after {evaluations} evaluations")]
    QuadNoConverge {
        value: Complex64,
        est_error: f64,
        evaluations: u64,
    },

    /// The transform angle is within the rejection window of a multiple of pi,
    /// where cot and csc blow up.
    #[error("singular transform angle theta = {theta} (multiple of pi)")]
    SingularAngle { theta: f64 },

    /// An L^p norm integral diverged or could not be resolved.
    #[error("norm integral diverged or failed to converge")]
    DivergentNorm,

    /// Argument outside the supported domain of a special function.
    #[error("domain error: {0}")]
    DomainError(String),

    /// A series failed to converge within its term cap.
    #[error("series did not converge within {terms} terms")]
    NoConverge { terms: usize },

    /// The wavelet fails the admissibility test.
    #[error("wavelet not admissible: {0}")]
    NotAdmissible(String),

    /// A stated exponent relation among the hypotheses does not hold.
    #[error("hypothesis violated: {0}")]
    HypothesisError(String),

    /// A cost guard tripped before the computation started.
    #[error("sample budget exceeded: need {needed}, cap {cap}")]
    CostBudgetExceeded { needed: u64, cap: u64 },
}
