use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("exponents {0} and {1} lie in different classes mod Z")]
    ClassMismatch(String, String),
    #[error("invalid segment [{a},{b}]: {why}")]
    InvalidSegment { a: String, b: String, why: &'static str },
    #[error("unsupported factor form: {0}")]
    UnsupportedForm(String),
    #[error("block is not sorted: {0}")]
    NotSorted(String),
    #[error("not an output of the rearrangement algorithm: {0}")]
    NotAnOutput(String),
    #[error("malformed rearranged sequence: {0}")]
    Structural(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("tempered attributes required: {0}")]
    AttributesRequired(String),
    #[error("level {level} does not have the parity of kappa = {kappa}")]
    LevelParity { level: i64, kappa: i64 },
    #[error("validation failed ({invariant}): {detail}")]
    Validation { invariant: &'static str, detail: String },
    #[error("{0}")]
    Parse(String),
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("enumeration bounds too large (about {estimate} blocks); limits are 5 segments and |2x| <= 12")]
    BoundsTooLarge { estimate: u128 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
