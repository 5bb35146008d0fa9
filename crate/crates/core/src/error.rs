use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("variable index {index} out of range for {nvars} variables")]
    VariableOutOfRange { index: usize, nvars: usize },

    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: String, found: String },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("malformed certificate term: {0}")]
    MalformedTerm(String),

    #[error("unsupported characteristic {characteristic}: {reason}")]
    UnsupportedCharacteristic { characteristic: u64, reason: String },

    #[error("search budget exceeded: {needed} candidates needed, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("the field is not finite; exhaustive search is unavailable")]
    InfiniteField,

    #[error(
        "no direction with a nonzero derivative in the box [-{bound}, {bound}]; enlarge the box"
    )]
    BoxExhausted { bound: i64 },

    #[error("h(q0) = 0: the point lies in the derived (Y) branch, outside the open set h != 0")]
    YBranch,

    #[error("singular evaluation system after {attempts} draws")]
    SingularSystem { attempts: usize },

    #[error("certificate failed verification: {0}")]
    VerificationFailed(String),

    #[error("presentation has no nonzero generator")]
    NoGenerators,
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}
