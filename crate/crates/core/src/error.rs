use std::fmt;

use thiserror::Error;

/// Position inside a parsed text, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {msg}")]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

impl ParseError {
    pub fn new(pos: Pos, msg: impl Into<String>) -> Self {
        ParseError {
            pos,
            msg: msg.into(),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("empty coordinate")]
    EmptyCoordinate,
    #[error("variable sets overlap: {0}")]
    Overlap(String),
    #[error("variable count {0} out of range (1..={max})", max = crate::entropy::MAX_VARS)]
    VariableCount(usize),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("duplicate variable name `{0}`")]
    DuplicateName(String),
    #[error("invalid copy step: {0}")]
    CopyStep(String),
    #[error("invalid permutation: {0}")]
    Permutation(String),
    #[error("missing coordinate {0}")]
    MissingCoordinate(String),
    #[error("symmetry check failed: {0}")]
    NotInvariant(String),
    #[error("invalid problem: {0}")]
    Problem(String),
    #[error("unknown row label `{0}`")]
    UnknownLabel(String),
    #[error("certificate: {0}")]
    Certificate(String),
    #[error("solver: {0}")]
    Solver(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
