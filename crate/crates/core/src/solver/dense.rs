//! Brute-force SG evaluation on bit-packed boards.
//!
//! One bit per cell, memoized over raw successor states. The transposition
//! key is the smallest image of the state under the board's symmetry group
//! (reflection, plus rotations on a circle). Nothing game-specific beyond the
//! placement rule is used, which makes this the reference oracle for the
//! rewriting tier.

use std::collections::HashMap;

use crate::error::SolveError;
use crate::rules::{Board, Shape};
use crate::solver::{Mex, SgValue, DEFAULT_BUDGET};

/// Longest board the dense tier accepts.
pub const DENSE_MAX_LEN: usize = 32;

/// Boards up to this length use a flat byte table (at most 64 MiB).
pub const FLAT_MAX_LEN: usize = 26;

enum Table {
    /// Indexed by state; 0 = unknown, otherwise SG + 1.
    Flat(Vec<u8>),
    Hashed(HashMap<u32, SgValue>),
}

impl Table {
    fn new(len: usize) -> Self {
        if len <= FLAT_MAX_LEN {
            Table::Flat(vec![0; 1 << len])
        } else {
            Table::Hashed(HashMap::new())
        }
    }

    fn bytes(&self) -> usize {
        match self {
            Table::Flat(v) => v.capacity(),
            Table::Hashed(m) => m.capacity() * (std::mem::size_of::<(u32, SgValue)>() + 1),
        }
    }

    #[inline]
    fn get(&self, key: u32) -> Option<SgValue> {
        match self {
            Table::Flat(v) => v[key as usize].checked_sub(1),
            Table::Hashed(m) => m.get(&key).copied(),
        }
    }

    #[inline]
    fn insert(&mut self, key: u32, value: SgValue) {
        match self {
            Table::Flat(v) => {
                assert!(value < u8::MAX, "SG value {value} does not fit the flat table");
                v[key as usize] = value + 1;
            }
            Table::Hashed(m) => {
                m.insert(key, value);
            }
        }
    }
}

/// Reusable dense solver. Tables are kept per (shape, k, length), so
/// evaluating many boards of the same size shares work.
pub struct DenseSolver {
    budget: u64,
    tables: HashMap<(Shape, usize, usize), Table>,
}

impl Default for DenseSolver {
    fn default() -> Self {
        Self::new()
    }
}

impl DenseSolver {
    pub fn new() -> Self {
        Self::with_budget(DEFAULT_BUDGET)
    }

    pub fn with_budget(budget: u64) -> Self {
        DenseSolver { budget, tables: HashMap::new() }
    }

    /// Approximate heap size of the memo tables currently held.
    pub fn memory_bytes(&self) -> usize {
        self.tables.values().map(Table::bytes).sum()
    }

    /// Drops all memo tables.
    pub fn clear(&mut self) {
        self.tables.clear();
    }

    pub fn grundy(&mut self, board: &Board) -> Result<SgValue, SolveError> {
        let len = board.len();
        if len > DENSE_MAX_LEN {
            return Err(SolveError::TooLongForDense { len, max: DENSE_MAX_LEN });
        }
        let state = board
            .cells()
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_occupied())
            .fold(0u32, |s, (i, _)| s | 1 << i);
        let key = (board.shape(), board.k(), len);
        if state == 0 && !self.tables.contains_key(&key) && board.shape() == Shape::Linear && len <= FLAT_MAX_LEN {
            if let Some(table) = fill_linear(len, board.k(), self.budget) {
                self.tables.insert(key, Table::Flat(table));
            }
        }
        let table = self.tables.entry(key).or_insert_with(|| Table::new(len));
        let mut search = Search {
            geometry: Geometry::new(board.shape(), len, board.k()),
            table,
            nodes: 0,
            budget: self.budget,
        };
        search.solve(state)
    }
}

/// SG value of a board of length at most [`DENSE_MAX_LEN`], any shape and k.
pub fn grundy_dense(board: &Board) -> Result<SgValue, SolveError> {
    DenseSolver::new().grundy(board)
}

/// True when `s` holds `k` consecutive set bits.
#[inline]
fn has_run(s: u32, k: usize) -> bool {
    let mut x = s;
    for j in 1..k {
        if x == 0 {
            return false;
        }
        x &= s >> j;
    }
    x != 0
}

/// Values of every state of a linear board, computed bottom-up. Placing a
/// piece sets a bit and so increases the state, which means a descending
/// sweep sees every successor before its predecessor. Illegal states keep
/// the unknown marker. Returns `None` when the state count exceeds `budget`.
fn fill_linear(len: usize, k: usize, budget: u64) -> Option<Vec<u8>> {
    let size = 1usize << len;
    if size as u64 > budget {
        return None;
    }
    let mask = (size - 1) as u32;
    let mut table = vec![0u8; size];
    for s in (0..size as u32).rev() {
        if has_run(s, k) {
            continue;
        }
        let mut seen = 0u64;
        let mut free = !s & mask;
        while free != 0 {
            let i = free.trailing_zeros();
            free &= free - 1;
            let v = table[(s | 1 << i) as usize];
            if v != 0 {
                seen |= 1 << (v - 1);
            }
        }
        let value = (!seen).trailing_zeros();
        assert!(value < 63, "SG value {value} too large for the bottom-up table");
        table[s as usize] = value as u8 + 1;
    }
    Some(table)
}

#[derive(Clone, Copy)]
struct Geometry {
    shape: Shape,
    len: u32,
    k: u32,
    mask: u32,
}

impl Geometry {
    fn new(shape: Shape, len: usize, k: usize) -> Self {
        let mask = if len == 32 { u32::MAX } else { (1u32 << len) - 1 };
        Geometry { shape, len: len as u32, k: k.min(64) as u32, mask }
    }

    #[inline]
    fn reverse(&self, s: u32) -> u32 {
        if self.len == 0 {
            0
        } else {
            s.reverse_bits() >> (32 - self.len)
        }
    }

    /// Rotation moving cell `by` to position 0.
    #[inline]
    fn rotate(&self, s: u32, by: u32) -> u32 {
        if by == 0 {
            s
        } else {
            ((s >> by) | (s << (self.len - by))) & self.mask
        }
    }

    fn canonical(&self, s: u32) -> u32 {
        let r = self.reverse(s);
        match self.shape {
            Shape::Linear => s.min(r),
            Shape::Circular => (0..self.len)
                .map(|by| self.rotate(s, by).min(self.rotate(r, by)))
                .min()
                .unwrap_or(s),
        }
    }

    /// Run length created by occupying the empty cell `i`.
    #[inline]
    fn run_through(&self, s: u32, i: u32) -> u32 {
        match self.shape {
            Shape::Linear => {
                let s = s as u64;
                let left = if i == 0 { 0 } else { ((s & ((1 << i) - 1)) << (64 - i)).leading_ones() };
                let right = (s >> (i + 1)).trailing_ones();
                left + right + 1
            }
            Shape::Circular => {
                let r = self.rotate(s, i) as u64;
                let right = (r >> 1).trailing_ones();
                let left = (r << (64 - self.len)).leading_ones();
                (left + right + 1).min(self.len)
            }
        }
    }
}

struct Search<'a> {
    geometry: Geometry,
    table: &'a mut Table,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn solve(&mut self, s: u32) -> Result<SgValue, SolveError> {
        let g = self.geometry;
        let key = g.canonical(s);
        if let Some(v) = self.table.get(key) {
            return Ok(v);
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SolveError::BudgetExceeded { budget: self.budget });
        }
        let mut seen = Mex::default();
        let mut free = !s & g.mask;
        while free != 0 {
            let i = free.trailing_zeros();
            free &= free - 1;
            if g.run_through(s, i) < g.k {
                seen.insert(self.solve(s | 1 << i)?);
            }
        }
        let value = seen.mex();
        self.table.insert(key, value);
        Ok(value)
    }
}
