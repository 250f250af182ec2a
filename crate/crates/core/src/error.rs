use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} is outside the supported range [2, 2^31)")]
    ModulusOutOfRange(u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("field mismatch: GF({left}) vs GF({right})")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("{op}: dimension mismatch between {left:?} and {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular: rank {rank} < {size}")]
    Singular { rank: usize, size: usize },

    #[error("random variables are defined over different seed spaces")]
    MixedSeedSpaces,

    #[error("seed space: {0}")]
    InvalidSeedSpace(String),

    #[error("enumeration needs {required} states, budget is {budget}")]
    EnumerationBudget { required: String, budget: u64 },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("field size {q} is too small: need q > {bound}")]
    FieldTooSmall { q: u64, bound: u128 },

    #[error("no certified scheme after {attempts} attempts (last failing condition: {first_failure})")]
    SamplingExhausted { attempts: usize, first_failure: String },

    #[error("certification failed: condition {label} is rank deficient")]
    CertificationFailed { label: String },

    #[error("level {0} is not present")]
    MissingLevel(usize),

    #[error("invalid user selection: {0}")]
    InvalidSelection(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("mask coefficient of user {user} has rank {rank} < {size}")]
    MaskNotFullRank { user: usize, rank: usize, size: usize },

    #[error("malformed document: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
