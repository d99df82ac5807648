use std::fmt;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("unknown element {elem} in group of order {order}")]
    UnknownElement { elem: u64, order: usize },
    #[error("variable x{index} out of range (word has {var_count} variables)")]
    VariableOutOfRange { index: usize, var_count: usize },
    #[error("mismatched context: {0}")]
    MismatchedContext(String),
    #[error("embedding mismatch: {0}")]
    EmbeddingMismatch(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("group of order {order} exceeds the cap {cap}")]
    TooLarge { order: u128, cap: usize },
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("coefficient group is not abelian")]
    NonAbelianCoefficients,
    #[error("unsupported variety: {0}")]
    UnsupportedVariety(String),
    #[error("words with constants are not supported here")]
    ConstantsNotSupported,
    #[error("exponent {0} is too large for this operation")]
    ExponentTooLarge(String),
    #[error("the algebraic set is empty; the coordinate group is undefined")]
    EmptyAlgebraicSet,
    #[error("the word lies in the closure, so no witness exists")]
    NotOutsideClosure,
    #[error("the system is inconsistent in the variety")]
    Inconsistent,
    #[error("model does not satisfy the laws of the variety: {0}")]
    ModelNotInVariety(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;

/// A syntax error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError { line, column, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}
