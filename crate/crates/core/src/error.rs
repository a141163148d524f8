use thiserror::Error;

/// Errors surfaced by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("degree {degree} out of range (maximum {max})")]
    DegreeOutOfRange { degree: usize, max: usize },
    #[error("resource bound exceeded: {0}")]
    ResourceBound(String),
    #[error("elements belong to different algebras")]
    HandleMismatch,
    #[error("submodule is not invariant under the symplectic generators")]
    NotInvariant,
    #[error("submodule is not a direct summand")]
    NotSummand,
    #[error("{ambient} is not divisible by {sub}")]
    NonDivisible { sub: i64, ambient: i64 },
    #[error("Euler characteristic of the subgroup must be negative, got {0}")]
    BadCharacteristic(i64),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
