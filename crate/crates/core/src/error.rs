use thiserror::Error;

/// Errors raised by the engine.
///
/// `Invariant` is reserved for conditions that hold for every valid input;
/// seeing one means either a corrupted instance slipped past validation or
/// an internal bug.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("all inputs are zero")]
    AllZero,

    #[error("determinant {0} is not a nonzero monomial")]
    DetNotMonomial(String),

    #[error("invalid bundle: {0}")]
    InvalidBundle(String),

    #[error("torus mismatch: rank {left} vs rank {right}")]
    TorusMismatch { left: usize, right: usize },

    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("bundle has no global sections")]
    NoSections,

    #[error("Čech complex did not stabilize up to window {0}")]
    NotStabilized(usize),

    #[error("bundle map does not intertwine the transition matrices")]
    NotIntertwining,

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("parse error at {pointer}: {message}")]
    Parse { pointer: String, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub fn is_invariant(&self) -> bool {
        matches!(self, Error::Invariant(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
