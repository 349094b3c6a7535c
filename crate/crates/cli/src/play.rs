use std::io::{self, BufRead, Write};

use itcx::strategy::{lemma_move, optimal_move};
use itcx::{Board, Move, Solver};

use crate::args::Engine;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Winner {
    Human,
    Engine,
    /// The human quit or input ended.
    Abandoned,
}

fn show(board: &Board, out: &mut impl Write) -> io::Result<()> {
    let cells: String = board.cells().iter().map(|c| if c.is_occupied() { 'X' } else { '.' }).collect();
    let tens: String = (0..board.len()).map(|i| if i >= 10 { char::from(b'0' + (i / 10 % 10) as u8) } else { ' ' }).collect();
    let ones: String = (0..board.len()).map(|i| char::from(b'0' + (i % 10) as u8)).collect();
    writeln!(out, "{board}")?;
    writeln!(out, "  {cells}")?;
    if board.len() > 10 {
        writeln!(out, "  {tens}")?;
    }
    writeln!(out, "  {ones}")
}

struct EngineState<'a> {
    engine: Engine,
    solver: &'a Solver,
    degraded: bool,
}

impl EngineState<'_> {
    fn choose(&mut self, board: &Board, last: Option<(&Board, Move)>, out: &mut impl Write) -> io::Result<Move> {
        if self.engine == Engine::Oracle && !self.degraded {
            match optimal_move(self.solver, board) {
                Ok(Some(mv)) => return Ok(mv),
                Ok(None) => {}
                Err(e) => {
                    writeln!(out, "notice: {e}; engine switches to the lemma strategy")?;
                    self.degraded = true;
                }
            }
        }
        Ok(lemma_move(board, last).expect("non-terminal board has a move"))
    }
}

/// Alternating human and engine turns until the player to move has no legal
/// move; that player loses.
pub fn run<R: BufRead, W: Write>(
    start: Board,
    engine: Engine,
    engine_first: bool,
    solver: &Solver,
    input: R,
    out: &mut W,
) -> io::Result<Winner> {
    let mut state = EngineState { engine, solver, degraded: false };
    let mut board = start;
    let mut last: Option<(Board, Move)> = None;
    let mut engine_turn = engine_first;
    let mut lines = input.lines();
    loop {
        show(&board, out)?;
        if board.is_terminal() {
            let winner = if engine_turn { Winner::Human } else { Winner::Engine };
            let loser = if engine_turn { "engine" } else { "you" };
            writeln!(out, "no legal move: {loser} lose{}", if engine_turn { "s" } else { "" })?;
            return Ok(winner);
        }
        if engine_turn {
            let mv = state.choose(&board, last.as_ref().map(|(b, m)| (b, *m)), out)?;
            writeln!(out, "engine plays {mv}")?;
            board = board.apply_move(mv).expect("engine plays legal moves");
            last = None;
        } else {
            let mv = loop {
                write!(out, "your move> ")?;
                out.flush()?;
                let Some(line) = lines.next() else {
                    writeln!(out)?;
                    return Ok(Winner::Abandoned);
                };
                let line = line?;
                let text = line.trim();
                if text == "q" || text == "quit" {
                    return Ok(Winner::Abandoned);
                }
                match text.parse::<usize>() {
                    Ok(i) if board.is_legal(Move(i)) => break Move(i),
                    Ok(i) => writeln!(out, "illegal move {i}: {}", board.apply_move(Move(i)).unwrap_err())?,
                    Err(_) => writeln!(out, "enter a cell index between 0 and {}", board.len().saturating_sub(1))?,
                }
            };
            let next = board.apply_move(mv).expect("checked legal");
            last = Some((board, mv));
            board = next;
        }
        engine_turn = !engine_turn;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use itcx::parse_board;

    fn play(position: &str, engine: Engine, engine_first: bool, input: &str) -> (Winner, String) {
        let solver = Solver::default();
        let mut out = Vec::new();
        let board = parse_board(position, 3).unwrap();
        let w = run(board, engine, engine_first, &solver, input.as_bytes(), &mut out).unwrap();
        (w, String::from_utf8(out).unwrap())
    }

    #[test]
    fn engine_moving_first_on_sg_one_wins() {
        for engine in [Engine::Oracle, Engine::Lemma] {
            // Human always takes the lowest legal cell.
            let solver = Solver::default();
            let mut board = parse_board("[5]", 3).unwrap();
            let mut state = EngineState { engine, solver: &solver, degraded: false };
            let mut sink = Vec::new();
            let mut last = None;
            let mut engine_turn = true;
            while !board.is_terminal() {
                let mv = if engine_turn {
                    state.choose(&board, last.as_ref().map(|(b, m): &(Board, Move)| (b, *m)), &mut sink).unwrap()
                } else {
                    board.legal_moves()[0]
                };
                let next = board.apply_move(mv).unwrap();
                last = (!engine_turn).then(|| (board.clone(), mv));
                board = next;
                engine_turn = !engine_turn;
            }
            assert!(!engine_turn, "{engine:?} lost");
        }
    }

    #[test]
    fn occupied_cell_reprompts() {
        let (w, out) = play("[X4]", Engine::Oracle, false, "0\n");
        assert_eq!(w, Winner::Abandoned);
        assert!(out.contains("illegal move 0"));
        assert_eq!(out.matches("your move>").count(), 2);
    }

    #[test]
    fn budget_exhaustion_degrades_to_lemma() {
        let solver = Solver::new(itcx::SolverConfig { budget: 1, ..Default::default() });
        let mut out = Vec::new();
        let board = parse_board("[25]", 3).unwrap();
        run(board, Engine::Oracle, true, &solver, "q\n".as_bytes(), &mut out).unwrap();
        let out = String::from_utf8(out).unwrap();
        assert!(out.contains("engine switches to the lemma strategy"));
        assert!(out.contains("engine plays"));
    }
}
