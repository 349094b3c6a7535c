//! Sprague-Grundy evaluation.
//!
//! Two tiers:
//!
//! * [`dense`]: raw memoized search over bit-packed boards, any `k`, linear or
//!   circular, up to [`DENSE_MAX_LEN`] cells.
//! * [`Solver`]: works on canonical components. Successors are generated on
//!   the component itself, rewritten, and evaluated as XOR sums, with values
//!   shared through a [`MemoCache`]. With rewriting enabled this reaches empty
//!   boards of length 50 and beyond.

pub mod cache;
pub mod dense;

pub use cache::MemoCache;
pub use dense::{grundy_dense, DenseSolver, DENSE_MAX_LEN};

use crate::error::SolveError;
use crate::notation::render_board;
use crate::reduce::{canonicalize_with, PositionSum, ReductionMode};
use crate::rules::{Board, Move, Shape, DEFAULT_K};

pub type SgValue = u8;

/// Default cap on freshly expanded states per top-level query.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

/// Bit set over `0..=255` tracking which SG values were seen.
#[derive(Default, Clone, Copy)]
pub struct Mex([u64; 4]);

impl Mex {
    #[inline]
    pub fn insert(&mut self, v: SgValue) {
        self.0[(v >> 6) as usize] |= 1 << (v & 63);
    }

    #[inline]
    pub fn contains(&self, v: SgValue) -> bool {
        self.0[(v >> 6) as usize] >> (v & 63) & 1 == 1
    }

    #[inline]
    pub fn mex(&self) -> SgValue {
        for (word, bits) in self.0.iter().enumerate() {
            if *bits != u64::MAX {
                return (word * 64) as SgValue + bits.trailing_ones() as SgValue;
            }
        }
        panic!("SG value exceeds 255");
    }
}

/// Least non-negative integer not in `values`.
pub fn mex(values: impl IntoIterator<Item = SgValue>) -> SgValue {
    let mut seen = Mex::default();
    for v in values {
        seen.insert(v);
    }
    seen.mex()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverConfig {
    pub k: usize,
    pub reductions: ReductionMode,
    pub budget: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { k: DEFAULT_K, reductions: ReductionMode::Full, budget: DEFAULT_BUDGET }
    }
}

impl SolverConfig {
    pub fn with_reductions(reductions: ReductionMode) -> Self {
        SolverConfig { reductions, ..Self::default() }
    }

    /// Rewriting only exists for k = 3; other run limits fall back to the
    /// identity reduction.
    pub fn effective_reductions(&self) -> ReductionMode {
        if self.k == DEFAULT_K {
            self.reductions
        } else {
            ReductionMode::Off
        }
    }
}

/// Component-tier solver. Safe to share across threads; every thread
/// reads and fills the same cache.
pub struct Solver {
    config: SolverConfig,
    cache: MemoCache,
}

impl Default for Solver {
    fn default() -> Self {
        Self::new(SolverConfig::default())
    }
}

impl Solver {
    pub fn new(config: SolverConfig) -> Self {
        let cache = MemoCache::new(config.k, config.effective_reductions());
        Solver { config, cache }
    }

    /// Solver backed by a pre-filled cache. The cache must describe the same
    /// `k` and reduction mode.
    pub fn with_cache(config: SolverConfig, cache: MemoCache) -> Self {
        assert_eq!(cache.k(), config.k, "cache k mismatch");
        assert_eq!(cache.reductions(), config.effective_reductions(), "cache mode mismatch");
        Solver { config, cache }
    }

    pub fn config(&self) -> &SolverConfig {
        &self.config
    }

    pub fn reductions(&self) -> ReductionMode {
        self.config.effective_reductions()
    }

    pub fn cache(&self) -> &MemoCache {
        &self.cache
    }

    pub fn into_cache(self) -> MemoCache {
        self.cache
    }

    /// Rewrites a board into the sum this solver evaluates.
    pub fn decompose(&self, board: &Board) -> PositionSum {
        canonicalize_with(board, self.reductions())
    }

    /// SG value of a sum of linear components.
    pub fn grundy(&self, sum: &PositionSum) -> Result<SgValue, SolveError> {
        let mut nodes = 0;
        let mut total = 0;
        for c in &sum.components {
            total ^= self.component_value(&c.board, Some(&c.key), &mut nodes)?;
        }
        Ok(total)
    }

    /// SG value of any board. Circular boards go to the dense tier, and so
    /// do boards for other run limits when they fit, since nothing rewrites
    /// them.
    pub fn grundy_board(&self, board: &Board) -> Result<SgValue, SolveError> {
        if board.shape() == Shape::Circular || (board.k() != DEFAULT_K && board.len() <= DENSE_MAX_LEN) {
            return DenseSolver::with_budget(self.config.budget).grundy(board);
        }
        debug_assert_eq!(board.k(), self.config.k);
        self.grundy(&self.decompose(board))
    }

    /// SG value of each legal successor, in move order.
    pub fn successor_values(&self, board: &Board) -> Result<Vec<(Move, SgValue)>, SolveError> {
        let mut dense = (board.shape() == Shape::Circular).then(DenseSolver::new);
        board
            .legal_moves()
            .into_iter()
            .map(|mv| {
                let next = board.apply_move(mv).expect("legal move");
                let value = match dense.as_mut() {
                    Some(d) => d.grundy(&next)?,
                    None => self.grundy(&self.decompose(&next))?,
                };
                Ok((mv, value))
            })
            .collect()
    }

    /// All moves to an SG-0 successor, lowest index first.
    pub fn best_moves(&self, board: &Board) -> Result<Vec<Move>, SolveError> {
        Ok(self
            .successor_values(board)?
            .into_iter()
            .filter(|&(_, v)| v == 0)
            .map(|(mv, _)| mv)
            .collect())
    }

    fn component_value(&self, board: &Board, key: Option<&str>, nodes: &mut u64) -> Result<SgValue, SolveError> {
        let owned;
        let key = match key {
            Some(k) if self.reductions() != ReductionMode::Off => k,
            _ => {
                owned = mirror_key(board);
                owned.as_str()
            }
        };
        if let Some(v) = self.cache.get(key) {
            return Ok(v);
        }
        *nodes += 1;
        if *nodes > self.config.budget {
            return Err(SolveError::BudgetExceeded { budget: self.config.budget });
        }
        let mut seen = Mex::default();
        for mv in board.legal_moves() {
            let next = board.apply_move(mv).expect("legal move");
            let mut value = 0;
            for c in self.decompose(&next).components {
                value ^= self.component_value(&c.board, Some(&c.key), nodes)?;
            }
            seen.insert(value);
        }
        let value = seen.mex();
        self.cache.insert(key.to_string(), value);
        Ok(value)
    }
}

/// Smaller rendering of a board and its mirror image.
fn mirror_key(board: &Board) -> String {
    let fwd = render_board(board);
    let rev = render_board(&board.reversed());
    fwd.min(rev)
}
