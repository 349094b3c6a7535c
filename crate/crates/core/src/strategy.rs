//! Constructive play on regular positions.
//!
//! Moves are found by search rather than by transcribing move tables: every
//! legal move is tried in index order and the first whose canonical successor
//! classifies with the wanted sign is taken. Because moves are made on the
//! real board, no mapping through component cells is needed.

use serde::Serialize;

use crate::error::{SolveError, StrategyError};
use crate::par::{self, Execution};
use crate::reduce::{canonicalize, PositionSum};
use crate::regular::{classify, classify_sum, ParityResult, RegularClass};
use crate::residue::Sign;
use crate::rules::{Board, Move, Shape, DEFAULT_K};
use crate::solver::dense::FLAT_MAX_LEN;
use crate::solver::{DenseSolver, SgValue, Solver};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Action {
    Move(Move),
    /// The opponent's move already reached the opposite parity.
    AlreadyFlipped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrategyOutcome {
    pub action: Action,
    pub result: PositionSum,
    pub parity: ParityResult,
}

impl StrategyOutcome {
    pub fn chosen_move(&self) -> Option<Move> {
        match self.action {
            Action::Move(mv) => Some(mv),
            Action::AlreadyFlipped => None,
        }
    }
}

/// Sign of the board's canonical sum.
pub fn parity_of(board: &Board) -> Result<(PositionSum, ParityResult), StrategyError> {
    let sum = canonicalize(board);
    let parity = classify_sum(&sum)?;
    Ok((sum, parity))
}

fn regular_sign(board: &Board) -> Result<Sign, StrategyError> {
    parity_of(board)?
        .1
        .sign
        .ok_or_else(|| StrategyError::NotRegular { position: board.to_string() })
}

/// Lowest-index move from `board` whose successor classifies with `target`.
fn first_move_to(board: &Board, target: Sign) -> Result<Option<StrategyOutcome>, StrategyError> {
    for mv in board.legal_moves() {
        let (result, parity) = parity_of(&board.apply_move(mv)?)?;
        if parity.sign == Some(target) {
            return Ok(Some(StrategyOutcome { action: Action::Move(mv), result, parity }));
        }
    }
    Ok(None)
}

/// A move from a regular board of sign `s` to a regular sum of sign `-s`.
pub fn proactive_move(board: &Board) -> Result<StrategyOutcome, StrategyError> {
    let s = regular_sign(board)?;
    if board.is_terminal() {
        return Err(StrategyError::Terminal { position: board.to_string() });
    }
    first_move_to(board, -s)?.ok_or_else(|| StrategyError::NoQualifyingMove { position: board.to_string() })
}

/// Answer to `opponent` on a regular board of sign `s`: either the opponent
/// already reached sign `-s`, or the lowest-index reply restoring `s`.
pub fn reactive_reply(before: &Board, opponent: Move) -> Result<StrategyOutcome, StrategyError> {
    let s = regular_sign(before)?;
    let mid = before.apply_move(opponent)?;
    let (result, parity) = parity_of(&mid)?;
    if parity.sign == Some(-s) {
        return Ok(StrategyOutcome { action: Action::AlreadyFlipped, result, parity });
    }
    first_move_to(&mid, s)?.ok_or_else(|| StrategyError::NoQualifyingReply {
        position: before.to_string(),
        opponent: opponent.0,
    })
}

/// Lowest-index move to an SG-0 successor, or `None` when the board is
/// already SG 0 or terminal.
pub fn optimal_move(solver: &Solver, board: &Board) -> Result<Option<Move>, SolveError> {
    if board.is_terminal() || solver.grundy_board(board)? == 0 {
        return Ok(None);
    }
    Ok(solver.best_moves(board)?.first().copied())
}

/// Move chosen by the regular-family strategy alone. `last` is the position
/// before the opponent's most recent move, if any. Falls back to the lowest
/// legal move when the strategy has nothing to say.
pub fn lemma_move(board: &Board, last: Option<(&Board, Move)>) -> Option<Move> {
    if board.is_terminal() {
        return None;
    }
    if let Ok(Sign::Minus) = regular_sign(board) {
        if let Ok(outcome) = proactive_move(board) {
            return outcome.chosen_move();
        }
    }
    if let Some((before, opponent)) = last {
        if let Ok(Sign::Plus) = regular_sign(before) {
            if let Ok(StrategyOutcome { action: Action::Move(mv), .. }) = reactive_reply(before, opponent) {
                return Some(mv);
            }
        }
    }
    board.legal_moves().first().copied()
}

/// All boards of length at most `max_len` with at most one piece, plus the
/// two-piece star boards `[X m X]` with `m` ending in 4 or 9, that classify
/// regular.
pub fn regular_boards(max_len: usize) -> Vec<Board> {
    let mut out = Vec::new();
    for n in 0..=max_len {
        out.push(Board::linear(n));
        for a in 0..n {
            let mut occ = vec![false; n];
            occ[a] = true;
            out.push(Board::from_occupancy(Shape::Linear, &occ, DEFAULT_K).expect("one piece"));
        }
        if n >= 2 && matches!((n - 2) % 10, 4 | 9) {
            let mut occ = vec![false; n];
            occ[0] = true;
            occ[n - 1] = true;
            out.push(Board::from_occupancy(Shape::Linear, &occ, DEFAULT_K).expect("two pieces"));
        }
    }
    out.retain(|b| classify(b).map(RegularClass::is_regular).unwrap_or(false));
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MechanismFailure {
    pub position: String,
    pub opponent: Option<usize>,
    pub reason: String,
}

/// A proximity move (distance 1 or 2 from a piece) that did not flip the
/// parity by itself. Recorded, not counted as a failure.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProximityNote {
    pub position: String,
    pub opponent: usize,
    pub class: String,
    pub reply: Option<usize>,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct MechanismReport {
    pub max_len: usize,
    pub boards: usize,
    pub terminal_boards: usize,
    pub proactive_moves: usize,
    pub opponent_moves: usize,
    pub already_flipped: usize,
    pub replies: usize,
    pub sg_checks: usize,
    pub failures: Vec<MechanismFailure>,
    pub proximity_notes: Vec<ProximityNote>,
}

impl MechanismReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Exact SG of whole boards, independent of the rewriting tier where the
/// dense table fits.
struct Oracle<'a> {
    dense: DenseSolver,
    fallback: &'a Solver,
}

impl Oracle<'_> {
    fn grundy(&mut self, board: &Board) -> Result<SgValue, SolveError> {
        if board.len() <= FLAT_MAX_LEN {
            self.dense.grundy(board)
        } else {
            self.fallback.grundy_board(board)
        }
    }
}

fn nearest_piece_distance(board: &Board, i: usize) -> Option<usize> {
    (0..board.len()).filter(|&p| board.is_occupied(p)).map(|p| p.abs_diff(i)).min()
}

fn check_board(board: &Board, solver: &Solver) -> MechanismReport {
    let mut report = MechanismReport { boards: 1, ..Default::default() };
    let position = board.to_string();
    let fail = |report: &mut MechanismReport, opponent: Option<usize>, reason: String| {
        report.failures.push(MechanismFailure { position: position.clone(), opponent, reason });
    };
    let class = classify(board).expect("linear k=3 board");
    let Ok(s) = regular_sign(board) else {
        fail(&mut report, None, "canonical sum is not regular".into());
        return report;
    };
    let mut oracle = Oracle { dense: DenseSolver::new(), fallback: solver };
    let mut expect_sg = |report: &mut MechanismReport, b: &Board, want: Sign, opponent: Option<usize>, what: &str| {
        report.sg_checks += 1;
        match oracle.grundy(b) {
            Ok(v) if v == want.grundy() => {}
            Ok(v) => fail(report, opponent, format!("{what} {b} has SG {v}, expected {}", want.grundy())),
            Err(e) => fail(report, opponent, format!("{what} {b}: {e}")),
        }
    };

    expect_sg(&mut report, board, s, None, "board");
    if board.is_terminal() {
        report.terminal_boards = 1;
        return report;
    }

    match proactive_move(board) {
        Ok(outcome) => {
            report.proactive_moves += 1;
            let mv = outcome.chosen_move().expect("proactive outcome carries a move");
            expect_sg(&mut report, &board.apply_move(mv).expect("legal"), -s, None, "proactive successor");
        }
        Err(e) => fail(&mut report, None, e.to_string()),
    }

    for opponent in board.legal_moves() {
        report.opponent_moves += 1;
        let mid = board.apply_move(opponent).expect("legal");
        let proximity = board.piece_count() > 0 && matches!(nearest_piece_distance(board, opponent.0), Some(1 | 2));
        match reactive_reply(board, opponent) {
            Ok(outcome) => match outcome.action {
                Action::AlreadyFlipped => {
                    report.already_flipped += 1;
                    expect_sg(&mut report, &mid, -s, Some(opponent.0), "flipped position");
                }
                Action::Move(reply) => {
                    report.replies += 1;
                    if proximity {
                        report.proximity_notes.push(ProximityNote {
                            position: position.clone(),
                            opponent: opponent.0,
                            class: class.name().to_string(),
                            reply: Some(reply.0),
                        });
                    }
                    let after = mid.apply_move(reply).expect("legal");
                    expect_sg(&mut report, &after, s, Some(opponent.0), "reply position");
                }
            },
            Err(e) => {
                if proximity {
                    report.proximity_notes.push(ProximityNote {
                        position: position.clone(),
                        opponent: opponent.0,
                        class: class.name().to_string(),
                        reply: None,
                    });
                }
                fail(&mut report, Some(opponent.0), e.to_string());
            }
        }
    }
    report
}

/// Checks the proactive and reactive halves of the strategy on every regular
/// board up to `max_len`, and confirms each resulting SG value with an
/// independent solver.
pub fn verify_mechanism(max_len: usize, exec: Execution) -> MechanismReport {
    let solver = Solver::default();
    let boards = regular_boards(max_len);
    let parts = par::map(exec, &boards, |b| check_board(b, &solver));
    let mut report = MechanismReport { max_len, ..Default::default() };
    for part in parts {
        report.boards += part.boards;
        report.terminal_boards += part.terminal_boards;
        report.proactive_moves += part.proactive_moves;
        report.opponent_moves += part.opponent_moves;
        report.already_flipped += part.already_flipped;
        report.replies += part.replies;
        report.sg_checks += part.sg_checks;
        report.failures.extend(part.failures);
        report.proximity_notes.extend(part.proximity_notes);
    }
    report
}
