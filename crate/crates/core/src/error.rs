use crate::cmatrix::C64;
use thiserror::Error;

/// Library error type. Variants mirror the failure modes of each stage:
/// construction, eigensolving, locus continuation, metric positivity, and
/// charge assembly.
#[derive(Debug, Error)]
pub enum Error {
    /// Matrix dimension is odd, too small, or otherwise unusable.
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    /// Argument outside its documented domain.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A documented precondition does not hold for the supplied value.
    #[error("contract violation: {0}")]
    ContractViolation(String),

    /// Iterative eigensolver ran out of budget. Carries whatever diagonal
    /// had been isolated so callers can diagnose the offending matrix.
    #[error("eigensolver did not converge: {context}")]
    Convergence {
        context: String,
        partial_eigenvalues: Vec<C64>,
    },

    /// Bisection endpoints do not bracket a sign change.
    #[error("invalid bracket [{lo}, {hi}]: {detail}")]
    BracketError { lo: f64, hi: f64, detail: String },

    /// Eigenvalue-branch continuation could not disambiguate branches even
    /// at the finest allowed step.
    #[error("branch resolution failed near a = {a}: {detail}")]
    ResolutionError { a: f64, detail: String },

    /// The requested z sits inside a transition band where locus
    /// components touch and no clean nesting order exists.
    #[error("degenerate topology at z = {z}: {detail}")]
    DegenerateTopology { z: f64, detail: String },

    /// Coefficients expected to round to integers did not.
    #[error("exactness failure: {0}")]
    Exactness(String),

    /// A metric that must be positive definite is not.
    #[error("metric not positive definite: {0}")]
    NonPositiveMetric(String),

    /// Closed-form parametrization degenerates at this parameter value.
    #[error("singular parametrization: {0}")]
    SingularParametrization(String),

    /// Parameter lies outside the spectral-reality domain.
    #[error("outside the reality domain: {0}")]
    OutsideReality(String),

    /// Charge construction could not satisfy its defining constraints.
    #[error("charge construction failed: {0}")]
    ConstructionFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
