use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator vanishes at h = 0 after reduction")]
    PoleAtH0,
    #[error("pochhammer base exponent must be positive, got {0}")]
    InvalidBase(String),
    #[error("kernel denominator vanishes at mode {0}")]
    KernelPole(i64),
    #[error("unsupported Cartan type {0}")]
    UnsupportedType(String),
    #[error("rank {rank} too small for type {kind}")]
    RankTooSmall { kind: String, rank: usize },
    #[error("singular matrix")]
    SingularMatrix,
    #[error("expression refers to family {family} but basis has {size} families")]
    BasisMismatch { family: usize, size: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexError(String),
    #[error("unknown identity {0}")]
    UnknownIdentity(String),
    #[error("no ordering of first-order factors reproduces the sigma coefficients")]
    FactorizationMismatch,
    #[error("window too small: {0}")]
    WindowExceeded(String),
    #[error("series constant term is not invertible")]
    NonInvertibleConstantTerm,
}

pub type Result<T> = std::result::Result<T, Error>;
