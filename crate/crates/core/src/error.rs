use thiserror::Error;

/// Errors raised by constructors and operations in this crate.
///
/// Axiom violations (d² ≠ 0, associativity, simplicial identities) are not
/// errors: the validators return them as reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field mismatch: GF({0}) vs GF({1})")]
    FieldMismatch(u32, u32),
    #[error("grading mismatch: {0} vs {1}")]
    GradingMismatch(String, String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("composite of consecutive differentials is nonzero")]
    CompositionNotZero,
    #[error("index ({row}, {col}) out of range for a {rows}x{cols} matrix")]
    IndexOutOfRange {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("invalid chain complex: {0}")]
    InvalidComplex(String),
    #[error("malformed structure: {0}")]
    Malformed(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("bimodules are not over the same categories")]
    CategoryMismatch,
    #[error("the middle category of a composition must be unital")]
    NonUnitalMiddle,
    #[error("category is not unital")]
    NonUnital,
    #[error("bar truncation must be at least 1 (got {0})")]
    TruncationTooSmall(usize),
    #[error("segal check at ({m}, {n}) needs depth {needed}, simplicial set has depth {depth}")]
    DepthExceeded {
        m: usize,
        n: usize,
        needed: usize,
        depth: usize,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
