use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RulesError {
    #[error("run limit k must be at least 2, got {0}")]
    BadRunLimit(usize),
    #[error("board contains a run of {run} pieces (k = {k})")]
    RunTooLong { run: usize, k: usize },
    #[error("cell {index} is outside a board of length {len}")]
    OutOfRange { index: usize, len: usize },
    #[error("cell {0} is already occupied")]
    Occupied(usize),
    #[error("placing at cell {index} completes {k} in a row")]
    CompletesRun { index: usize, k: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("empty position string")]
    Empty,
    #[error("unexpected character {ch:?} at byte {pos}")]
    IllegalChar { ch: char, pos: usize },
    #[error("missing closing {expected:?}")]
    Unbalanced { expected: char },
    #[error("trailing input after position at byte {0}")]
    Trailing(usize),
    #[error("'~' at byte {0} must be followed by a single digit")]
    BadResidue(usize),
    #[error("gap length {0:?} does not fit in memory")]
    GapTooLarge(String),
    #[error("circular boards may not contain residue classes")]
    CircularResidue,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PositionError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Rules(#[from] RulesError),
    #[error("position contains a residue class; instantiate it first")]
    NotConcrete,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("board of length {len} exceeds the dense solver limit of {max}")]
    TooLongForDense { len: usize, max: usize },
    #[error("node budget of {budget} states exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("operation requires a linear board with k = 3")]
    NotTreblecross,
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cannot access cache file {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cache file {path}: bad header {found:?}")]
    BadHeader { path: PathBuf, found: String },
    #[error("cache file {path} was written for {found}, expected {expected}")]
    Mismatch { path: PathBuf, found: String, expected: String },
    #[error("cache file {path}, line {line}: {reason}")]
    BadEntry { path: PathBuf, line: usize, reason: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error("{position} does not decompose into regular components")]
    NotRegular { position: String },
    #[error("{position} has no legal moves")]
    Terminal { position: String },
    #[error("no move from {position} reaches the opposite parity")]
    NoQualifyingMove { position: String },
    #[error("no reply to cell {opponent} on {position} restores the parity")]
    NoQualifyingReply { position: String, opponent: usize },
    #[error(transparent)]
    Rules(#[from] RulesError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}
