use thiserror::Error;

/// Errors raised by the library. `SizeGuard`, `Budget` and `Precondition`
/// are deliberate refusals (resource caps or unmet structural assumptions),
/// the rest are invalid inputs.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max asymmetry {max_dev:.3e})")]
    NotHermitian { max_dev: f64 },

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("dimension mismatch: {0}")]
    DimMismatch(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{what} size {size} exceeds cap {cap}")]
    SizeGuard {
        what: &'static str,
        size: usize,
        cap: usize,
    },

    #[error("enumeration budget exceeded: {0}")]
    Budget(String),

    #[error("structural check precondition failed: {0}")]
    Precondition(String),

    #[error("invalid argument: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for refusals that a CLI should map to its "guard" exit code
    /// rather than plain invalid input.
    pub fn is_guard(&self) -> bool {
        matches!(
            self,
            Error::SizeGuard { .. } | Error::Budget(_) | Error::Precondition(_)
        )
    }
}
