use thiserror::Error;

/// Errors raised by the exact arithmetic kernels and the eigenspace pipeline.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by the zero polynomial")]
    ZeroDivisor,
    #[error("{0} of the zero polynomial is undefined")]
    ZeroPolynomial(&'static str),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("supplied cap does not annihilate the vector")]
    InvalidCap,
    #[error("vector is not in ker f(A)^{0}")]
    NotInKernelTower(usize),
    #[error("factor does not divide the characteristic polynomial")]
    FactorNotDividing,
    #[error("polynomial must be monic: {0}")]
    NotMonic(String),
    #[error("factor is reducible over the rationals")]
    Reducible,
    #[error("expected rank {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid block spec: {0}")]
    Spec(String),
    #[error("unknown benchmark suite `{0}`")]
    UnknownSuite(String),
}

pub type Result<T> = std::result::Result<T, Error>;
