use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic 2 is not supported")]
    CharacteristicTwo,
    #[error("{0} is not an odd prime")]
    NotPrime(u32),
    #[error("ambient dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("operands live over different prime fields")]
    ModulusMismatch,
    #[error("polynomial is not homogeneous")]
    NonHomogeneous,
    #[error("graded piece needs {columns} columns, above the limit of {limit}")]
    TooLarge { columns: usize, limit: usize },
    #[error("parameters out of range: {0}")]
    OutOfRange(String),
    #[error("closed formula only available for s = 1 (got s = {0})")]
    RequiresSingleFrobenius(u32),
    #[error("alternating sum {0} is not divisible by 2^N")]
    InexactDivision(String),
    #[error("quadric dimension must be at least 3 (got {0})")]
    QuadricDimension(u32),
    #[error("spinor species {species} does not exist on Q_{n}")]
    InvalidSpecies { species: String, n: u32 },
    #[error("objects live on different quadrics: Q_{0} vs Q_{1}")]
    AmbientMismatch(u32, u32),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
