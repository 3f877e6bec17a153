//! Crate-wide error type.
//!
//! Every failure carries the violated precondition so callers (and the CLI)
//! can surface it verbatim.

use std::fmt;

/// Errors raised by field construction, matrix operations, constructions and
/// file parsing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Extension degree outside the supported 2..=16 range.
    UnsupportedExtension { r: u32 },
    /// Vector length does not match the transform length `e`.
    LengthMismatch { expected: usize, got: usize },
    /// Matrix shapes disagree.
    ShapeMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    /// Matrices belong to different fields.
    FieldMismatch,
    /// A dimension parameter is out of its allowed range.
    DimensionOutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },
    /// The two subsets do not partition the field.
    InvalidPartition { reason: String },
    /// A divisibility precondition failed.
    NotDivisible {
        what: &'static str,
        value: usize,
        divisor: usize,
    },
    /// The assembled base matrix violates the 2x2 submatrix constraint.
    SmViolation {
        rows: (usize, usize),
        cols: (usize, usize),
    },
    /// Expanding an array would exceed the configured memory budget.
    BudgetExceeded {
        needed_bits: usize,
        budget_bits: usize,
    },
    /// The requested dispersion block size does not divide `q - 1`.
    InvalidBlockSize { block_size: u32, e: u32 },
    /// A base-matrix entry is not a power of the dispersion subgroup generator.
    EntryOutsideSubgroup { row: usize, col: usize },
    /// A search for construction parameters found no admissible candidate.
    SearchFailed { what: &'static str },
    /// A closed-form rank expression was evaluated outside its validity range.
    FormulaRange { reason: &'static str },
    /// Malformed input file or descriptor.
    Parse(String),
    /// Underlying I/O failure (message only, so the error stays `Clone`).
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::UnsupportedExtension { r } => {
                write!(f, "unsupported extension degree r = {r} (supported: 2..=16)")
            }
            Error::LengthMismatch { expected, got } => {
                write!(f, "vector length {got} does not match transform length {expected}")
            }
            Error::ShapeMismatch { left, right } => write!(
                f,
                "shape mismatch: {}x{} vs {}x{}",
                left.0, left.1, right.0, right.1
            ),
            Error::FieldMismatch => write!(f, "matrices belong to different fields"),
            Error::DimensionOutOfRange { what, value, max } => {
                write!(f, "{what} = {value} out of range (max {max})")
            }
            Error::InvalidPartition { reason } => write!(f, "invalid field partition: {reason}"),
            Error::NotDivisible {
                what,
                value,
                divisor,
            } => write!(f, "{what} = {value} is not divisible by {divisor}"),
            Error::SmViolation { rows, cols } => write!(
                f,
                "2x2 submatrix constraint violated at rows ({},{}) cols ({},{})",
                rows.0, rows.1, cols.0, cols.1
            ),
            Error::BudgetExceeded {
                needed_bits,
                budget_bits,
            } => write!(
                f,
                "expansion needs {needed_bits} bits, exceeding the {budget_bits}-bit budget"
            ),
            Error::InvalidBlockSize { block_size, e } => {
                write!(f, "block size {block_size} does not divide {e}")
            }
            Error::EntryOutsideSubgroup { row, col } => write!(
                f,
                "entry at ({row},{col}) is not a power of the block-size subgroup generator"
            ),
            Error::SearchFailed { what } => write!(f, "search failed: no admissible {what} found"),
            Error::FormulaRange { reason } => {
                write!(f, "rank formula outside validity range: {reason}")
            }
            Error::Parse(msg) => write!(f, "parse error: {msg}"),
            Error::Io(msg) => write!(f, "io error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
