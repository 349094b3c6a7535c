//! Game rules for Inverse k-cross: a cell may be occupied only if doing so
//! does not complete a run of `k` consecutive pieces.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::RulesError;

/// Run limit used when nothing else is requested.
pub const DEFAULT_K: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Shape {
    Linear,
    Circular,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Cell {
    Empty,
    Occupied,
}

impl Cell {
    #[inline]
    pub fn is_occupied(self) -> bool {
        self == Cell::Occupied
    }
}

/// A placement on a cell index. Linear boards count from the left end,
/// circular boards from a fixed origin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Move(pub usize);

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A game state. Never contains a run of `k` or more occupied cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Board {
    shape: Shape,
    cells: Vec<Cell>,
    k: usize,
}

impl Board {
    pub fn new(shape: Shape, cells: Vec<Cell>, k: usize) -> Result<Self, RulesError> {
        if k < 2 {
            return Err(RulesError::BadRunLimit(k));
        }
        let board = Board { shape, cells, k };
        if let Some(run) = board.longest_run().filter(|&run| run >= k) {
            return Err(RulesError::RunTooLong { run, k });
        }
        Ok(board)
    }

    pub fn empty(shape: Shape, len: usize, k: usize) -> Result<Self, RulesError> {
        Self::new(shape, vec![Cell::Empty; len], k)
    }

    pub fn linear(len: usize) -> Self {
        Board { shape: Shape::Linear, cells: vec![Cell::Empty; len], k: DEFAULT_K }
    }

    /// Builds a board from occupancy flags (`true` = occupied).
    pub fn from_occupancy(shape: Shape, occupied: &[bool], k: usize) -> Result<Self, RulesError> {
        let cells = occupied
            .iter()
            .map(|&o| if o { Cell::Occupied } else { Cell::Empty })
            .collect();
        Self::new(shape, cells, k)
    }

    /// Constructor for callers that already maintain the run invariant.
    pub(crate) fn from_cells_unchecked(shape: Shape, cells: Vec<Cell>, k: usize) -> Self {
        debug_assert!(k >= 2);
        Board { shape, cells, k }
    }

    #[inline]
    pub fn shape(&self) -> Shape {
        self.shape
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    #[inline]
    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    #[inline]
    pub fn is_occupied(&self, index: usize) -> bool {
        self.cells[index].is_occupied()
    }

    pub fn piece_count(&self) -> usize {
        self.cells.iter().filter(|c| c.is_occupied()).count()
    }

    pub fn empty_count(&self) -> usize {
        self.len() - self.piece_count()
    }

    /// Same board with its cell order reversed.
    pub fn reversed(&self) -> Board {
        let mut cells = self.cells.clone();
        cells.reverse();
        Board { shape: self.shape, cells, k: self.k }
    }

    /// Same board with cell `i` moved to position `(i + n - by) % n`.
    pub fn rotated_left(&self, by: usize) -> Board {
        let mut cells = self.cells.clone();
        if !cells.is_empty() {
            cells.rotate_left(by % self.len());
        }
        Board { shape: self.shape, cells, k: self.k }
    }

    /// Same cells with a different run limit.
    pub fn with_k(&self, k: usize) -> Result<Board, RulesError> {
        Board::new(self.shape, self.cells.clone(), k)
    }

    /// Length of the longest occupied run, counting wraparound on circular
    /// boards. `None` for a board without pieces.
    fn longest_run(&self) -> Option<usize> {
        let n = self.len();
        let mut best = 0;
        let mut run = 0;
        for c in &self.cells {
            if c.is_occupied() {
                run += 1;
                best = best.max(run);
            } else {
                run = 0;
            }
        }
        if self.shape == Shape::Circular && n > 0 {
            let head = self.cells.iter().take_while(|c| c.is_occupied()).count();
            if head == n {
                return Some(n);
            }
            let tail = self.cells.iter().rev().take_while(|c| c.is_occupied()).count();
            best = best.max(head + tail);
        }
        (best > 0).then_some(best)
    }

    /// Run length that an occupation of the empty cell `index` would create.
    fn run_through(&self, index: usize) -> usize {
        let n = self.len();
        match self.shape {
            Shape::Linear => {
                let left = self.cells[..index].iter().rev().take_while(|c| c.is_occupied()).count();
                let right = self.cells[index + 1..].iter().take_while(|c| c.is_occupied()).count();
                left + right + 1
            }
            Shape::Circular => {
                let occ = |i: usize| self.cells[i % n].is_occupied();
                let left = (1..n).take_while(|&d| occ(index + n - d)).count();
                let right = (1..n).take_while(|&d| occ(index + d)).count();
                (left + right + 1).min(n)
            }
        }
    }

    pub fn is_legal(&self, mv: Move) -> bool {
        mv.0 < self.len() && !self.cells[mv.0].is_occupied() && self.run_through(mv.0) < self.k
    }

    /// Every empty cell whose occupation keeps all runs shorter than `k`,
    /// in ascending index order.
    pub fn legal_moves(&self) -> Vec<Move> {
        (0..self.len()).map(Move).filter(|&m| self.is_legal(m)).collect()
    }

    pub fn is_terminal(&self) -> bool {
        !(0..self.len()).any(|i| self.is_legal(Move(i)))
    }

    pub fn apply_move(&self, mv: Move) -> Result<Board, RulesError> {
        if mv.0 >= self.len() {
            return Err(RulesError::OutOfRange { index: mv.0, len: self.len() });
        }
        if self.cells[mv.0].is_occupied() {
            return Err(RulesError::Occupied(mv.0));
        }
        let run = self.run_through(mv.0);
        if run >= self.k {
            return Err(RulesError::CompletesRun { index: mv.0, k: self.k });
        }
        let mut next = self.clone();
        next.cells[mv.0] = Cell::Occupied;
        Ok(next)
    }
}

pub fn legal_moves(board: &Board) -> Vec<Move> {
    board.legal_moves()
}

pub fn apply_move(board: &Board, mv: Move) -> Result<Board, RulesError> {
    board.apply_move(mv)
}

pub fn is_terminal(board: &Board) -> bool {
    board.is_terminal()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::notation::parse_board;

    fn b(s: &str) -> Board {
        parse_board(s, DEFAULT_K).unwrap()
    }

    fn moves(board: &Board) -> Vec<usize> {
        board.legal_moves().into_iter().map(|m| m.0).collect()
    }

    #[test]
    fn legal_moves_examples() {
        assert_eq!(moves(&b("[2]")), vec![0, 1]);
        assert!(moves(&b("[XX1]")).is_empty());
        assert!(moves(&b("[X1X]")).is_empty());
        assert_eq!(moves(&b("(3)")), vec![0, 1, 2]);
    }

    #[test]
    fn circle_of_three_blocks_third_piece_in_every_order() {
        let start = b("(3)");
        for first in 0..3 {
            let one = start.apply_move(Move(first)).unwrap();
            for second in moves(&one) {
                let two = one.apply_move(Move(second)).unwrap();
                assert!(two.is_terminal(), "order {first},{second}");
            }
        }
    }

    #[test]
    fn full_small_circle_is_legal() {
        let full = Board::from_occupancy(Shape::Circular, &[true, true], 3).unwrap();
        assert!(full.is_terminal());
        assert!(Board::from_occupancy(Shape::Circular, &[true, true, true], 3).is_err());
        assert!(Board::from_occupancy(Shape::Circular, &[true, false, true, true], 3).is_err());
    }

    #[test]
    fn apply_move_examples() {
        assert_eq!(b("[3]").apply_move(Move(1)).unwrap(), b("[1X1]"));
        assert_eq!(b("[2X2]").apply_move(Move(0)).unwrap(), b("[X1X2]"));
        assert_eq!(b("[X2]").apply_move(Move(1)).unwrap(), b("[XX1]"));
    }

    #[test]
    fn apply_move_rejects_illegal() {
        assert!(matches!(b("[X2]").apply_move(Move(0)), Err(RulesError::Occupied(0))));
        assert!(matches!(b("[XX1]").apply_move(Move(2)), Err(RulesError::CompletesRun { .. })));
        assert!(matches!(b("[2]").apply_move(Move(5)), Err(RulesError::OutOfRange { .. })));
    }

    #[test]
    fn terminal_examples() {
        assert!(b("[XX1]").is_terminal());
        assert!(!b("[5]").is_terminal());
        assert!(b("[X1X]").is_terminal());
        assert!(b("[]").is_terminal());
    }

    #[test]
    fn run_limit_above_length_allows_every_empty_cell() {
        let board = Board::from_occupancy(Shape::Linear, &[true, false, true, false], 5).unwrap();
        assert_eq!(moves(&board), vec![1, 3]);
    }

    /// Every legal board of length <= 12: dropping any piece stays legal, moves are a
    /// subset of the empty cells, and reflection maps legal moves to legal moves.
    #[test]
    fn exhaustive_small_board_properties() {
        for n in 0..=12usize {
            for mask in 0u32..(1 << n) {
                let occ: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                let Ok(board) = Board::from_occupancy(Shape::Linear, &occ, 3) else { continue };
                for i in (0..n).filter(|&i| occ[i]) {
                    let mut fewer = occ.clone();
                    fewer[i] = false;
                    assert!(Board::from_occupancy(Shape::Linear, &fewer, 3).is_ok());
                }
                let fwd = moves(&board);
                assert!(fwd.iter().all(|&i| !occ[i]));
                let mut mirrored: Vec<usize> = moves(&board.reversed()).iter().map(|&i| n - 1 - i).collect();
                mirrored.sort_unstable();
                assert_eq!(fwd, mirrored);
            }
        }
    }
}
