use thiserror::Error;

/// Errors raised by the algebra, the range structures and the harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("indeterminate extended arithmetic: {0}")]
    Indeterminate(String),

    #[error("operator pair `{0}` has no inverse")]
    NoInverse(String),

    #[error("value {0} has no inverse")]
    NotInvertible(String),

    #[error("operator pair `{pair}` is not special{}", witness.as_ref().map(|w| format!(" (counterexample {w})")).unwrap_or_default())]
    NotSpecial {
        pair: String,
        witness: Option<String>,
    },

    #[error("update value {0} must be a single zero-tracked term")]
    NotMonomial(String),

    #[error("input must not be empty")]
    EmptyInput,

    #[error("invalid range box: {0}")]
    InvalidBox(String),

    #[error("box {bounds} is out of bounds for extents {dims:?}")]
    OutOfBounds { bounds: String, dims: Vec<usize> },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("extent {0} is not a power of two >= 4")]
    NotPowerOfTwo(usize),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("node [{range}] violates its invariant: expected {expected}, found {found}")]
    Validation {
        range: String,
        expected: String,
        found: String,
    },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
