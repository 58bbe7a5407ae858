use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SliceError {
    #[error("weight {ell} is out of range for n = {n}")]
    WeightOutOfRange { n: usize, ell: usize },

    #[error("domain needs {needed} elements, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("functions live on different domains: slice({0}, {1}) vs slice({2}, {3})")]
    DomainMismatch(usize, usize, usize, usize),

    #[error("coordinate {coord} is outside 1..={n}")]
    CoordinateOutOfRange { coord: usize, n: usize },

    #[error("permutation acts on {got} points, expected {expected}")]
    SizeMismatch { expected: usize, got: usize },

    #[error("not a permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid tuple: {0}")]
    InvalidTuple(String),

    #[error("restriction leaves an empty sub-slice")]
    EmptySubSlice,

    #[error("level {k} is out of range (max {max})")]
    LevelOutOfRange { k: usize, max: usize },

    #[error("tuple is already shifted and sorted")]
    AlreadyShiftedSorted,

    #[error("function is not a multiple of Psi_P for P = {0}")]
    NotAMultiple(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("constructor matrix is not upper triangular at {0}")]
    TriangularityViolation(String),

    #[error("Psi_P vanishes identically on this slice for P = {0}")]
    DegenerateTuple(String),

    #[error("invariance check failed: D_({i},{j}) g' is not zero")]
    InvarianceFailure { i: usize, j: usize },

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, SliceError>;

impl From<std::io::Error> for SliceError {
    fn from(e: std::io::Error) -> Self {
        SliceError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for SliceError {
    fn from(e: serde_json::Error) -> Self {
        SliceError::Parse {
            pos: e.column(),
            msg: e.to_string(),
        }
    }
}
