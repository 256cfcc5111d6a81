use std::fmt;

/// Errors produced by parsing, validation and the analysis operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Window bounds are unusable: reversed, or wider than the engine supports.
    InvalidWindow(String),
    /// Row cells are inconsistent (overlapping fixed cells or bubbles).
    InvalidRow(String),
    /// A position lies outside the window it is used with.
    OutOfWindow { position: i32, lo: i32, hi: i32 },
    /// Malformed input file; `line` is 1-based.
    Parse { line: usize, message: String },
    /// Two values built over different windows were combined.
    WindowMismatch,
    /// Unknown token in a cascade specification.
    BadCascadeToken(String),
    /// The instance is wider than the configured brute-force limit.
    WidthLimit { width: usize, limit: usize },
    /// The function is constant 1: it has no zeros, so there is nothing to rank.
    NoModels,
    /// Threshold data violates the ordering required by its sign case.
    InconsistentThresholds,
    /// A numeric parameter is outside its admissible range.
    BadParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidWindow(msg) => write!(f, "invalid window: {msg}"),
            Error::InvalidRow(msg) => write!(f, "invalid row: {msg}"),
            Error::OutOfWindow { position, lo, hi } => {
                write!(f, "position {position} outside window {lo}..{hi}")
            }
            Error::Parse { line, message } => write!(f, "line {line}: {message}"),
            Error::WindowMismatch => write!(f, "window mismatch"),
            Error::BadCascadeToken(tok) => write!(f, "unrecognized cascade token `{tok}`"),
            Error::WidthLimit { width, limit } => {
                write!(f, "width {width} exceeds brute-force limit {limit}")
            }
            Error::NoModels => write!(f, "function is constant 1: no zeros to analyze"),
            Error::InconsistentThresholds => {
                write!(f, "threshold probabilities violate the sign-case ordering")
            }
            Error::BadParameter(msg) => write!(f, "bad parameter: {msg}"),
        }
    }
}

impl std::error::Error for Error {}
