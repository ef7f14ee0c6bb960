use thiserror::Error;

use crate::perm::Letter;

/// Every failure the library reports.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("letter {0} occurs more than once")]
    DuplicateLetter(Letter),
    #[error("letter {0} is missing")]
    MissingLetter(Letter),
    #[error("letters must be positive integers")]
    NonPositiveLetter,
    #[error("malformed token `{0}`")]
    MalformedToken(String),
    #[error("the pattern word must be non-empty")]
    EmptyPattern,
    #[error("expected at least {need} elements, got {got}")]
    TooSmall { need: usize, got: usize },
    #[error("size {0} is too small for this operation")]
    SizeTooSmall(usize),
    #[error("size mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid pyramid: {0}")]
    InvalidPyramid(String),
    #[error("invalid trapezoid: {0}")]
    InvalidTrapezoid(String),
    #[error("{word} is not in D({i},{n})")]
    NotAPrefix { word: String, i: usize, n: usize },
    #[error("prefix length {k} must be below floor({n}/2)")]
    RangeViolation { k: usize, n: usize },
    #[error("{0} has an interval suffix")]
    NotInB(String),
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("recurrence went negative at {0}")]
    NegativeResult(String),
    #[error("s_{0} is odd")]
    ParityViolation(usize),
    #[error("arithmetic overflow while computing {0}")]
    Overflow(String),
    #[error("n = {n} exceeds the configured limit {limit}")]
    LimitExceeded { n: usize, limit: usize },
    #[error("invalid rigid shift: {0}")]
    InvalidMove(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
