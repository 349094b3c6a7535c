//! FEN-like position notation.
//!
//! `[` and `]` delimit a linear board, `X` is a piece, a decimal number is a
//! run of empty cells and `~d` stands for any run whose length is congruent to
//! `d` modulo 10. Circular boards are written `(l)`; pieces are also accepted
//! inside the parentheses (`(X10)`), residue classes are not.
//!
//! ```text
//! linear   := '[' ws item* ws ']'
//! circular := '(' ws (digit+ | item*) ws ')'
//! item     := ('X' | digit+ | '~' digit) ws
//! ws       := (' ')*
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ParseError, PositionError, RulesError};
use crate::rules::{Board, Cell, Shape};

/// Upper bound on a single written gap; keeps `instantiate` allocations sane.
pub const MAX_GAP: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternItem {
    Piece,
    Gap(usize),
    /// Any gap length congruent to the residue modulo 10.
    GapClass(u8),
}

/// A parsed position, possibly describing a whole residue family.
///
/// Items are kept normalized: zero gaps are dropped and neighbouring concrete
/// gaps merged, so every pattern has exactly one canonical spelling.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PositionPattern {
    shape: Shape,
    items: Vec<PatternItem>,
}

impl PositionPattern {
    pub fn new(shape: Shape, items: impl IntoIterator<Item = PatternItem>) -> Self {
        let mut out: Vec<PatternItem> = Vec::new();
        for item in items {
            match (item, out.last_mut()) {
                (PatternItem::Gap(0), _) => {}
                (PatternItem::Gap(n), Some(PatternItem::Gap(prev))) => *prev += n,
                (PatternItem::GapClass(r), _) => {
                    assert!(r < 10, "residue {r} out of range");
                    out.push(item);
                }
                _ => out.push(item),
            }
        }
        PositionPattern { shape, items: out }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn items(&self) -> &[PatternItem] {
        &self.items
    }

    pub fn is_concrete(&self) -> bool {
        !self.items.iter().any(|i| matches!(i, PatternItem::GapClass(_)))
    }

    pub fn from_board(board: &Board) -> Self {
        let items = board.cells().iter().map(|c| match c {
            Cell::Occupied => PatternItem::Piece,
            Cell::Empty => PatternItem::Gap(1),
        });
        PositionPattern::new(board.shape(), items)
    }

    /// Concrete board obtained by replacing each `~r` with `r + 10 * occurrence`.
    pub fn instantiate(&self, occurrence: usize, k: usize) -> Result<Board, RulesError> {
        let mut cells = Vec::new();
        for item in &self.items {
            match *item {
                PatternItem::Piece => cells.push(Cell::Occupied),
                PatternItem::Gap(n) => cells.extend(std::iter::repeat_n(Cell::Empty, n)),
                PatternItem::GapClass(r) => {
                    let n = r as usize + 10 * occurrence;
                    cells.extend(std::iter::repeat_n(Cell::Empty, n));
                }
            }
        }
        Board::new(self.shape, cells, k)
    }

    /// Concrete board for a pattern without residue classes.
    pub fn to_board(&self, k: usize) -> Result<Board, PositionError> {
        if !self.is_concrete() {
            return Err(PositionError::NotConcrete);
        }
        Ok(self.instantiate(0, k)?)
    }
}

impl fmt::Display for PositionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (open, close) = match self.shape {
            Shape::Linear => ('[', ']'),
            Shape::Circular => ('(', ')'),
        };
        write!(f, "{open}")?;
        if self.shape == Shape::Circular && self.items.is_empty() {
            write!(f, "0")?;
        }
        for item in &self.items {
            match item {
                PatternItem::Piece => write!(f, "X")?,
                PatternItem::Gap(n) => write!(f, "{n}")?,
                PatternItem::GapClass(r) => write!(f, "~{r}")?,
            }
        }
        write!(f, "{close}")
    }
}

impl FromStr for PositionPattern {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

pub fn parse(text: &str) -> Result<PositionPattern, ParseError> {
    let bytes = text.as_bytes();
    let mut pos = 0;
    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos] == b' ' {
            *pos += 1;
        }
    };
    skip_ws(&mut pos);
    let (shape, close) = match bytes.get(pos) {
        None => return Err(ParseError::Empty),
        Some(b'[') => (Shape::Linear, b']'),
        Some(b'(') => (Shape::Circular, b')'),
        Some(_) => return Err(illegal(text, pos)),
    };
    pos += 1;

    let mut items = Vec::new();
    loop {
        skip_ws(&mut pos);
        match bytes.get(pos) {
            None => return Err(ParseError::Unbalanced { expected: close as char }),
            Some(&c) if c == close => {
                pos += 1;
                break;
            }
            Some(b'X') => {
                items.push(PatternItem::Piece);
                pos += 1;
            }
            Some(b'0'..=b'9') => {
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                let digits = &text[start..pos];
                let n: usize = digits
                    .parse()
                    .ok()
                    .filter(|&n| n <= MAX_GAP)
                    .ok_or_else(|| ParseError::GapTooLarge(digits.to_string()))?;
                items.push(PatternItem::Gap(n));
            }
            Some(b'~') => match bytes.get(pos + 1) {
                Some(d @ b'0'..=b'9') => {
                    if shape == Shape::Circular {
                        return Err(ParseError::CircularResidue);
                    }
                    items.push(PatternItem::GapClass(d - b'0'));
                    pos += 2;
                }
                _ => return Err(ParseError::BadResidue(pos)),
            },
            Some(_) => return Err(illegal(text, pos)),
        }
    }
    skip_ws(&mut pos);
    if pos != bytes.len() {
        return Err(ParseError::Trailing(pos));
    }
    Ok(PositionPattern::new(shape, items))
}

fn illegal(text: &str, pos: usize) -> ParseError {
    let ch = text[pos..].chars().next().unwrap_or('\0');
    ParseError::IllegalChar { ch, pos }
}

pub fn render(pattern: &PositionPattern) -> String {
    pattern.to_string()
}

pub fn instantiate(pattern: &PositionPattern, occurrence: usize, k: usize) -> Result<Board, RulesError> {
    pattern.instantiate(occurrence, k)
}

/// Parses a concrete position straight into a board.
pub fn parse_board(text: &str, k: usize) -> Result<Board, PositionError> {
    parse(text)?.to_board(k)
}

/// Canonical spelling of a board.
pub fn render_board(board: &Board) -> String {
    let mut out = String::with_capacity(board.len() + 2);
    render_cells_into(board.shape(), board.cells().iter().map(|c| c.is_occupied()), &mut out);
    out
}

/// Renders a cell sequence without building a [`Board`]; used on hot paths.
pub(crate) fn render_cells_into(shape: Shape, occupied: impl Iterator<Item = bool>, out: &mut String) {
    use std::fmt::Write;
    let (open, close) = match shape {
        Shape::Linear => ('[', ']'),
        Shape::Circular => ('(', ')'),
    };
    out.push(open);
    let start = out.len();
    let mut gap = 0usize;
    for occ in occupied {
        if occ {
            if gap > 0 {
                let _ = write!(out, "{gap}");
                gap = 0;
            }
            out.push('X');
        } else {
            gap += 1;
        }
    }
    if gap > 0 || (shape == Shape::Circular && out.len() == start) {
        let _ = write!(out, "{gap}");
    }
    out.push(close);
}

impl fmt::Display for Board {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render_board(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rules::DEFAULT_K;
    use proptest::prelude::*;
    use PatternItem::*;

    fn linear(items: &[PatternItem]) -> PositionPattern {
        PositionPattern::new(Shape::Linear, items.iter().copied())
    }

    #[test]
    fn parse_examples() {
        assert_eq!(parse("[3X4]").unwrap(), linear(&[Gap(3), Piece, Gap(4)]));
        assert_eq!(parse("[X~6]").unwrap(), linear(&[Piece, GapClass(6)]));
        assert_eq!(parse("[]").unwrap(), linear(&[]));
        assert_eq!(parse("[X10]").unwrap(), linear(&[Piece, Gap(10)]));
        assert_eq!(parse("[0X4]").unwrap(), linear(&[Piece, Gap(4)]));
        assert_eq!(parse("(11)").unwrap(), PositionPattern::new(Shape::Circular, [Gap(11)]));
    }

    #[test]
    fn parse_accepts_inner_whitespace() {
        assert_eq!(parse(" [ 2 X 3 ] ").unwrap(), linear(&[Gap(2), Piece, Gap(3)]));
        assert_eq!(parse("[~1X ~1]").unwrap(), linear(&[GapClass(1), Piece, GapClass(1)]));
        // "~12" is the class of 1 followed by a concrete gap of 2.
        assert_eq!(parse("[X~12]").unwrap(), linear(&[Piece, GapClass(1), Gap(2)]));
    }

    #[test]
    fn parse_errors() {
        assert_eq!(parse(""), Err(ParseError::Empty));
        assert_eq!(parse("   "), Err(ParseError::Empty));
        assert_eq!(parse("[3X"), Err(ParseError::Unbalanced { expected: ']' }));
        assert_eq!(parse("[3)"), Err(ParseError::IllegalChar { ch: ')', pos: 2 }));
        assert_eq!(parse("[3Y]"), Err(ParseError::IllegalChar { ch: 'Y', pos: 2 }));
        assert_eq!(parse("[~]"), Err(ParseError::BadResidue(1)));
        assert_eq!(parse("[~X]"), Err(ParseError::BadResidue(1)));
        assert_eq!(parse("[3]]"), Err(ParseError::Trailing(3)));
        assert_eq!(parse("(~5)"), Err(ParseError::CircularResidue));
        assert!(matches!(parse("[99999999999999999999999]"), Err(ParseError::GapTooLarge(_))));
    }

    #[test]
    fn render_examples() {
        assert_eq!(render(&linear(&[Gap(3), Piece, Gap(4)])), "[3X4]");
        assert_eq!(render(&linear(&[Piece, Piece, Gap(1)])), "[XX1]");
        assert_eq!(render_board(&Board::empty(Shape::Circular, 5, 3).unwrap()), "(5)");
        assert_eq!(render_board(&Board::empty(Shape::Circular, 0, 3).unwrap()), "(0)");
        assert_eq!(render_board(&Board::linear(0)), "[]");
    }

    #[test]
    fn instantiate_examples() {
        let b = instantiate(&parse("[X~6]").unwrap(), 0, DEFAULT_K).unwrap();
        assert_eq!(render_board(&b), "[X6]");
        let b = instantiate(&parse("[X~4X]").unwrap(), 1, DEFAULT_K).unwrap();
        assert_eq!(render_board(&b), "[X14X]");
        let b = instantiate(&parse("[~0]").unwrap(), 0, DEFAULT_K).unwrap();
        assert!(b.is_empty());
    }

    #[test]
    fn instantiate_rejects_long_runs() {
        assert!(instantiate(&parse("[XXX]").unwrap(), 0, DEFAULT_K).is_err());
        assert!(instantiate(&parse("[XX~0X]").unwrap(), 0, DEFAULT_K).is_err());
        assert!(instantiate(&parse("[XX~0X]").unwrap(), 1, DEFAULT_K).is_ok());
    }

    #[test]
    fn residue_family_lengths() {
        let pattern = parse("[X~6]").unwrap();
        for i in 0..=5 {
            assert_eq!(instantiate(&pattern, i, DEFAULT_K).unwrap().len(), 7 + 10 * i);
        }
    }

    fn arb_linear_board() -> impl Strategy<Value = Board> {
        prop::collection::vec(any::<bool>(), 0..40).prop_filter_map("run too long", |occ| {
            Board::from_occupancy(Shape::Linear, &occ, DEFAULT_K).ok()
        })
    }

    fn arb_pattern() -> impl Strategy<Value = PositionPattern> {
        let item = prop_oneof![
            Just(Piece),
            (0usize..200).prop_map(Gap),
            (0u8..10).prop_map(GapClass),
        ];
        prop::collection::vec(item, 0..12).prop_map(|items| PositionPattern::new(Shape::Linear, items))
    }

    proptest! {
        #[test]
        fn board_round_trip(board in arb_linear_board()) {
            let text = render_board(&board);
            prop_assert_eq!(parse_board(&text, DEFAULT_K).unwrap(), board);
        }

        #[test]
        fn pattern_round_trip(pattern in arb_pattern()) {
            prop_assert_eq!(parse(&render(&pattern)).unwrap(), pattern);
        }
    }
}
