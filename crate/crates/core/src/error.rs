use thiserror::Error;

/// Errors raised by the numeric kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parameter vectors have different lengths ({upper} upper, {lower} lower)")]
    LengthMismatch { upper: usize, lower: usize },

    #[error("lower parameter {0} is a nonpositive integer")]
    PoleInDenominator(f64),

    #[error("argument outside the domain: {0}")]
    Domain(String),

    #[error("parameter constraint violated: {0}")]
    Precondition(String),

    #[error("series did not converge after {terms} terms (last term {last_term:e})")]
    NoConvergence { terms: usize, last_term: f64 },

    #[error("contour passes through or left of a pole: {0}")]
    ContourPlacement(String),

    #[error("tail estimate {estimate:e} exceeds tolerance {tol:e}")]
    TailTooLarge { estimate: f64, tol: f64 },

    #[error("singular linear system ({0})")]
    Singular(String),

    #[error("numerical check failed: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
