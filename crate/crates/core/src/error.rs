use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("level {level} exceeds portrait depth {depth}")]
    DepthExceeded { level: usize, depth: usize },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("digit {digit} out of range 1..={arity}")]
    DigitOutOfRange { digit: usize, arity: usize },

    #[error("points do not form level blocks: {0}")]
    InvalidBlocks(String),

    #[error("generator {0} is not an element of the parent group")]
    NotMember(usize),

    #[error("not a subgroup: generator {0} of the candidate lies outside the group")]
    NotASubgroup(usize),

    #[error("word {0} is not in the first level stabilizer")]
    NotInStabilizer(String),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("unknown lemma id {0:?}")]
    UnknownLemma(String),

    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
