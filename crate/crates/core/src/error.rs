use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("invalid tableau: {0}")]
    InvalidTableau(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("{what} = {value} is out of range {range}")]
    OutOfRange {
        what: &'static str,
        value: String,
        range: String,
    },

    #[error("permutation of degree {degree} does not act on partitions of {n}")]
    DegreeTooLarge { degree: usize, n: usize },

    #[error("representation of dimension {dim} exceeds the matrix cap {cap}")]
    MatrixTooLarge { dim: String, cap: usize },

    #[error("expansion would exceed the term cap {cap}")]
    ExpansionTooLarge { cap: usize },

    #[error("formal sum is not invariant under conjugation: {0}")]
    NotInvariant(String),

    #[error("linear system is underdetermined: rank {rank} < {unknowns} unknowns")]
    Underdetermined { rank: usize, unknowns: usize },

    #[error("values are not in the span of the requested basis")]
    Inconsistent,

    #[error("evaluation at a pole: {0}")]
    Pole(String),
}

pub type Result<T> = std::result::Result<T, Error>;
