//! SG tables: single-piece boards `[a X b]`, empty boards across run limits,
//! and empty k = 3 boards against the χ1 prediction.
//!
//! Cells are `None` when the solver gave up (budget or size limit); the text
//! rendering marks them with `?`.

use std::fmt::Write as _;

use serde::Serialize;

use crate::error::SolveError;
use crate::par::{self, Execution};
use crate::residue::chi1_len;
use crate::rules::{Board, Shape, DEFAULT_K};
use crate::solver::{DenseSolver, SgValue, Solver, SolverConfig, DENSE_MAX_LEN};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Table {
    pub title: String,
    /// Label of the top-left corner, e.g. `a\b`.
    pub corner: String,
    pub columns: Vec<String>,
    pub rows: Vec<String>,
    pub cells: Vec<Vec<Option<SgValue>>>,
}

impl Table {
    pub fn get(&self, row: usize, col: usize) -> Option<SgValue> {
        self.cells[row][col]
    }

    pub fn is_complete(&self) -> bool {
        self.cells.iter().flatten().all(Option::is_some)
    }

    /// Tab-separated rendering with a header row.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.corner);
        for c in &self.columns {
            write!(out, "\t{c}").unwrap();
        }
        out.push('\n');
        for (label, row) in self.rows.iter().zip(&self.cells) {
            out.push_str(label);
            for cell in row {
                match cell {
                    Some(v) => write!(out, "\t{v}").unwrap(),
                    None => out.push_str("\t?"),
                }
            }
            out.push('\n');
        }
        out
    }
}

fn single_piece_board(a: usize, b: usize) -> Board {
    let mut occ = vec![false; a + b + 1];
    occ[a] = true;
    Board::from_occupancy(Shape::Linear, &occ, DEFAULT_K).expect("one piece")
}

/// `G([a X b])` for `a <= max_a`, `b <= max_b`.
pub fn single_piece_table(solver: &Solver, max_a: usize, max_b: usize, exec: Execution) -> Table {
    let cells: Vec<(usize, usize)> = (0..=max_a).flat_map(|a| (0..=max_b).map(move |b| (a, b))).collect();
    let values = par::map(exec, &cells, |&(a, b)| solver.grundy_board(&single_piece_board(a, b)).ok());
    Table {
        title: format!("G([a X b]) for a <= {max_a}, b <= {max_b}"),
        corner: "a\\b".into(),
        columns: (0..=max_b).map(|b| b.to_string()).collect(),
        rows: (0..=max_a).map(|a| a.to_string()).collect(),
        cells: values.chunks(max_b + 1).map(<[_]>::to_vec).collect(),
    }
}

/// Run limits in table order: even values ascending, then odd ones.
pub fn kcross_columns(k_min: usize, k_max: usize) -> Vec<usize> {
    let evens = (k_min..=k_max).filter(|k| k % 2 == 0);
    let odds = (k_min..=k_max).filter(|k| k % 2 == 1);
    evens.chain(odds).collect()
}

/// Value of `[l]` under run limit `k`, and the dense memo size it needed.
fn empty_value(k: usize, l: usize, dense: &mut DenseSolver, budget: u64) -> (Result<SgValue, SolveError>, usize) {
    let board = Board::empty(Shape::Linear, l, k).expect("k >= 2");
    if l <= DENSE_MAX_LEN {
        let v = dense.grundy(&board);
        let bytes = dense.memory_bytes();
        dense.clear();
        (v, bytes)
    } else if k == DEFAULT_K {
        (Solver::new(SolverConfig { budget, ..SolverConfig::default() }).grundy_board(&board), 0)
    } else {
        (Err(SolveError::TooLongForDense { len: l, max: DENSE_MAX_LEN }), 0)
    }
}

/// `G([l])` for `l <= max_l` and every run limit in `k_min..=k_max`, columns
/// ordered as in [`kcross_columns`]. Columns are computed independently.
pub fn kcross_table(max_l: usize, k_min: usize, k_max: usize, budget: u64, exec: Execution) -> Table {
    kcross_table_with_peak(max_l, k_min, k_max, budget, exec).0
}

/// [`kcross_table`] plus the largest dense memo size over all cells, in bytes.
pub fn kcross_table_with_peak(max_l: usize, k_min: usize, k_max: usize, budget: u64, exec: Execution) -> (Table, usize) {
    assert!(k_min >= 2, "run limit must be at least 2");
    let ks = kcross_columns(k_min, k_max);
    let columns = par::map(exec, &ks, |&k| {
        let mut dense = DenseSolver::with_budget(budget);
        (0..=max_l).map(|l| empty_value(k, l, &mut dense, budget)).map(|(v, b)| (v.ok(), b)).collect::<Vec<_>>()
    });
    let peak = columns.iter().flatten().map(|&(_, b)| b).max().unwrap_or(0);
    let table = Table {
        title: format!("G([l]) for l <= {max_l}, k in {k_min}..={k_max}"),
        corner: "l\\k".into(),
        columns: ks.iter().map(|k| k.to_string()).collect(),
        rows: (0..=max_l).map(|l| l.to_string()).collect(),
        cells: (0..=max_l).map(|l| columns.iter().map(|col| col[l].0).collect()).collect(),
    };
    (table, peak)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EmptyRow {
    pub n: usize,
    pub value: Option<SgValue>,
    /// 0 when χ1(n) = +1, otherwise 1.
    pub predicted: SgValue,
}

impl EmptyRow {
    pub fn matches(&self) -> bool {
        self.value == Some(self.predicted)
    }
}

/// `G([n])` at k = 3 for `n <= max_n` next to the χ1 prediction.
pub fn empty_table(solver: &Solver, max_n: usize, exec: Execution) -> Vec<EmptyRow> {
    let ns: Vec<usize> = (0..=max_n).collect();
    par::map(exec, &ns, |&n| EmptyRow {
        n,
        value: solver.grundy_board(&Board::linear(n)).ok(),
        predicted: chi1_len(n).grundy(),
    })
}

pub fn empty_table_tsv(rows: &[EmptyRow]) -> String {
    let mut out = String::from("n\tG\tchi1\tmatch\n");
    for r in rows {
        let value = r.value.map_or("?".to_string(), |v| v.to_string());
        let sign = if r.predicted == 0 { "+1" } else { "-1" };
        writeln!(out, "{}\t{value}\t{sign}\t{}", r.n, if r.matches() { "yes" } else { "no" }).unwrap();
    }
    out
}
