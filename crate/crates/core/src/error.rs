use alloc::string::String;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by matrix construction, weighting and the axiom machinery.
///
/// Alternative indices are stored 0-based and displayed 1-based.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("a pairwise comparison matrix needs at least 2 alternatives, got {0}")]
    TooSmall(usize),

    #[error("matrix is not square: row {} has {len} entries, expected {n}", .row + 1)]
    NotSquare { row: usize, len: usize, n: usize },

    #[error("entry ({}, {}) = {value} is not a positive finite number", .row + 1, .col + 1)]
    NonPositive { row: usize, col: usize, value: f64 },

    #[error(
        "entries ({}, {}) = {upper} and ({}, {}) = {lower} are not reciprocal",
        .row + 1, .col + 1, .col + 1, .row + 1
    )]
    NotReciprocal {
        row: usize,
        col: usize,
        upper: f64,
        lower: f64,
    },

    #[error("alternative {} is out of range for n = {n}", .index + 1)]
    IndexOutOfRange { index: usize, n: usize },

    #[error("row multiplication factor must be positive and finite, got {0}")]
    InvalidFactor(f64),

    #[error("dimension mismatch: expected n = {expected}, found n = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("at least one matrix is required")]
    EmptyList,

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error(
        "power iteration did not converge after {iterations} iterations (residual {residual:e})"
    )]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("no random index configured for n = {0}")]
    RandomIndexUnavailable(usize),

    #[error("the matrices do not violate aggregation invariance for the pair ({}, {})", .i + 1, .j + 1)]
    NotAnAiViolation { i: usize, j: usize },

    #[error("the method fails invariance to row multiplication on matrix {}", .matrix + 1)]
    IrmFailed { matrix: usize },

    #[error("counterexample construction failed: {0}")]
    ConstructionFailed(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
