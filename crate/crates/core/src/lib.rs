//! Solver, strategy engine and verification harness for Inverse Treblecross,
//! the impartial placement game where completing three in a row is illegal,
//! and its generalization to a run limit of `k`.
//!
//! Positions are written in a FEN-like notation (`[3X4]`, `(11)`, `[X~6]`),
//! see [`notation`].

pub mod conjectures;
pub mod error;
pub mod notation;
pub mod par;
pub mod reduce;
pub mod regular;
pub mod residue;
pub mod rules;
pub mod solver;
pub mod strategy;
pub mod tables;
pub mod verify;

pub use error::{CacheError, ParseError, PositionError, RulesError, SolveError, StrategyError};
pub use notation::{parse, parse_board, render, render_board, PatternItem, PositionPattern};
pub use reduce::{canonicalize, PositionSum, ReductionMode};
pub use regular::{classify, classify_sum, ParityResult, RegularClass};
pub use residue::{chi1, chi2, Residue, Sign};
pub use rules::{Board, Cell, Move, Shape, DEFAULT_K};
pub use solver::{grundy_dense, DenseSolver, MemoCache, SgValue, Solver, SolverConfig};
