//! Classification into the six regular families. Members of the `+1`
//! families have SG value 0, members of the `-1` families have SG value 1.

use std::fmt;

use serde::Serialize;

use crate::error::SolveError;
use crate::reduce::PositionSum;
use crate::residue::{chi1_len, chi2_len, Sign};
use crate::rules::{Board, Shape, DEFAULT_K};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum PlusStarKind {
    /// `[X ~6]`
    X6,
    /// `[~6 X]`
    SixX,
    /// `[X ~4 X]`
    X4X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum MinusStarKind {
    /// `[X ~1]`
    X1,
    /// `[~1 X]`
    OneX,
    /// `[X ~9 X]`
    X9X,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RegularClass {
    PlusEmpty,
    PlusSingle,
    PlusStar(PlusStarKind),
    MinusEmpty,
    MinusSingle,
    MinusStar(MinusStarKind),
    NotRegular,
}

impl RegularClass {
    pub fn sign(self) -> Option<Sign> {
        use RegularClass::*;
        match self {
            PlusEmpty | PlusSingle | PlusStar(_) => Some(Sign::Plus),
            MinusEmpty | MinusSingle | MinusStar(_) => Some(Sign::Minus),
            NotRegular => None,
        }
    }

    pub fn is_regular(self) -> bool {
        self != RegularClass::NotRegular
    }

    /// Class of the mirror-image board.
    pub fn mirrored(self) -> Self {
        use RegularClass::*;
        match self {
            PlusStar(PlusStarKind::X6) => PlusStar(PlusStarKind::SixX),
            PlusStar(PlusStarKind::SixX) => PlusStar(PlusStarKind::X6),
            MinusStar(MinusStarKind::X1) => MinusStar(MinusStarKind::OneX),
            MinusStar(MinusStarKind::OneX) => MinusStar(MinusStarKind::X1),
            other => other,
        }
    }

    pub fn name(self) -> &'static str {
        use RegularClass::*;
        match self {
            PlusEmpty => "R1_Empty",
            PlusSingle => "R1_Single",
            PlusStar(PlusStarKind::X6) => "R1_Star(X6)",
            PlusStar(PlusStarKind::SixX) => "R1_Star(6X)",
            PlusStar(PlusStarKind::X4X) => "R1_Star(X4X)",
            MinusEmpty => "Rm1_Empty",
            MinusSingle => "Rm1_Single",
            MinusStar(MinusStarKind::X1) => "Rm1_Star(X1)",
            MinusStar(MinusStarKind::OneX) => "Rm1_Star(1X)",
            MinusStar(MinusStarKind::X9X) => "Rm1_Star(X9X)",
            NotRegular => "NotRegular",
        }
    }
}

impl fmt::Display for RegularClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Lengths of the empty runs around and between pieces.
pub(crate) fn gap_profile(board: &Board) -> Vec<usize> {
    let mut gaps = vec![0];
    for c in board.cells() {
        if c.is_occupied() {
            gaps.push(0);
        } else {
            *gaps.last_mut().unwrap() += 1;
        }
    }
    gaps
}

pub fn classify(board: &Board) -> Result<RegularClass, SolveError> {
    if board.shape() != Shape::Linear || board.k() != DEFAULT_K {
        return Err(SolveError::NotTreblecross);
    }
    let gaps = gap_profile(board);
    let class = match gaps[..] {
        [a] => match chi1_len(a) {
            Sign::Plus => RegularClass::PlusEmpty,
            Sign::Minus => RegularClass::MinusEmpty,
        },
        [a, b] => match (chi2_len(a).sign(), chi2_len(b).sign()) {
            (Some(x), Some(y)) => match x * y {
                Sign::Plus => RegularClass::PlusSingle,
                Sign::Minus => RegularClass::MinusSingle,
            },
            _ => match (a, b % 10, a % 10, b) {
                (0, 6, _, _) => RegularClass::PlusStar(PlusStarKind::X6),
                (0, 1, _, _) => RegularClass::MinusStar(MinusStarKind::X1),
                (_, _, 6, 0) => RegularClass::PlusStar(PlusStarKind::SixX),
                (_, _, 1, 0) => RegularClass::MinusStar(MinusStarKind::OneX),
                _ => RegularClass::NotRegular,
            },
        },
        [0, m, 0] => match m % 10 {
            4 => RegularClass::PlusStar(PlusStarKind::X4X),
            9 => RegularClass::MinusStar(MinusStarKind::X9X),
            _ => RegularClass::NotRegular,
        },
        _ => RegularClass::NotRegular,
    };
    Ok(class)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParityResult {
    /// Product of component signs; `None` when some component is not regular.
    pub sign: Option<Sign>,
    pub classes: Vec<RegularClass>,
}

impl ParityResult {
    pub fn is_regular(&self) -> bool {
        self.sign.is_some()
    }

    /// The SG value the regular-family theory predicts, if any.
    pub fn predicted_grundy(&self) -> Option<u8> {
        self.sign.map(Sign::grundy)
    }
}

pub fn classify_sum(sum: &PositionSum) -> Result<ParityResult, SolveError> {
    let classes = sum
        .components
        .iter()
        .map(|c| classify(&c.board))
        .collect::<Result<Vec<_>, _>>()?;
    let sign = classes.iter().map(|c| c.sign()).collect::<Option<Vec<Sign>>>().map(|s| s.into_iter().product());
    Ok(ParityResult { sign, classes })
}
