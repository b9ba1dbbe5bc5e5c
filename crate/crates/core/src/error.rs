use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("matrix is not Hermitian: max |A - A^dagger| = {max_deviation:e} exceeds {tol:e}")]
    NotHermitian { max_deviation: f64, tol: f64 },

    #[error("matrix is not positive semidefinite: eigenvalue {eigenvalue:e} below -{tol:e}")]
    NotPositive { eigenvalue: f64, tol: f64 },

    #[error("trace {trace:e} is not positive")]
    NonPositiveTrace { trace: f64 },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("Bloch convention {convention} is not defined for dimension {dim}")]
    Convention {
        convention: &'static str,
        dim: usize,
    },

    #[error("letter {letter} is out of range for a set of {n} states")]
    LetterOutOfRange { letter: usize, n: usize },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("numerical inconsistency: {0}")]
    NumericInconsistency(String),

    #[error("unknown {kind} '{name}'")]
    UnknownName { kind: &'static str, name: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
