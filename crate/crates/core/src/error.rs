use thiserror::Error;

use crate::code::Violation;

/// Errors produced by the code construction and search routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid Pauli character {ch:?} at position {pos}")]
    InvalidPauli { ch: char, pos: usize },

    #[error("rows are linearly dependent (rank {rank} of {rows} rows)")]
    DependentRows { rank: usize, rows: usize },

    #[error("rows {0} and {1} do not commute")]
    NonCommuting(usize, usize),

    #[error("index {index} out of range 0..{bound}")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("search space of {estimated} candidates exceeds the limit of {limit}")]
    CostExceeded { estimated: u128, limit: u128 },

    #[error("enumeration over a {0}-dimensional space is too large")]
    TooLarge(usize),

    #[error("validation failed: {}", format_violations(.0))]
    Validation(Vec<Violation>),

    #[error("unknown catalog entry {0:?}")]
    UnknownCode(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn format_violations(v: &[Violation]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")
}

pub type Result<T> = std::result::Result<T, Error>;
