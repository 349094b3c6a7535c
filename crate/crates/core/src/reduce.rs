//! Value-preserving rewriting of Treblecross boards into sums of small
//! independent components.
//!
//! Six basic rules remove dead cells next to `XX` and `X1X`:
//!
//! ```text
//! B1  [X1X w]     = [X w]          B4  [XX1 w]     = [w]
//! B2  [w X1X]     = [w X]          B5  [w 1XX]     = [w]
//! B3  [w X1X v]   = [w X] + [X v]  B6  [w 1XX1 v]  = [w] + [v]
//! ```
//!
//! Three split rules shrink gaps of two at an edge and cut gaps of four:
//!
//! ```text
//! S1  [X2X w]     = [2X w]
//! S2  [w X2X]     = [w X2]
//! S3  [w X4X v]   = [w X2] + [2X v]
//! ```
//!
//! Canonicalization scans left to right, applies the leftmost basic match
//! (lowest rule number on ties), falls back to the leftmost split match only
//! when no basic rule applies, and repeats until nothing matches. Fully
//! occupied components are dropped, each survivor is replaced by the
//! lexicographically smaller rendering of itself and its mirror image, and
//! the components are sorted by rendering.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::notation::render_cells_into;
use crate::rules::{Board, Cell, Shape, DEFAULT_K};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReductionMode {
    /// Basic and split rules.
    Full,
    /// Basic rules only.
    Basic,
    /// Identity: every board is its own single component.
    Off,
}

impl ReductionMode {
    /// Spelling used in cache headers and CLI output.
    pub fn as_str(self) -> &'static str {
        match self {
            ReductionMode::Full => "on",
            ReductionMode::Basic => "basic",
            ReductionMode::Off => "off",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        match s {
            "on" => Some(ReductionMode::Full),
            "basic" => Some(ReductionMode::Basic),
            "off" => Some(ReductionMode::Off),
            _ => None,
        }
    }
}

impl fmt::Display for ReductionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RewriteRule {
    B1,
    B2,
    B3,
    B4,
    B5,
    B6,
    S1,
    S2,
    S3,
}

impl RewriteRule {
    pub const ALL: [RewriteRule; 9] = [
        RewriteRule::B1,
        RewriteRule::B2,
        RewriteRule::B3,
        RewriteRule::B4,
        RewriteRule::B5,
        RewriteRule::B6,
        RewriteRule::S1,
        RewriteRule::S2,
        RewriteRule::S3,
    ];
    const BASIC: [RewriteRule; 6] = [
        RewriteRule::B1,
        RewriteRule::B2,
        RewriteRule::B3,
        RewriteRule::B4,
        RewriteRule::B5,
        RewriteRule::B6,
    ];
    const SPLIT: [RewriteRule; 3] = [RewriteRule::S1, RewriteRule::S2, RewriteRule::S3];

    pub fn is_basic(self) -> bool {
        Self::BASIC.contains(&self)
    }

    /// Written form, e.g. `[w X4X v] = [w X2] + [2X v]`.
    pub fn describe(self) -> &'static str {
        match self {
            RewriteRule::B1 => "[X1X w] = [X w]",
            RewriteRule::B2 => "[w X1X] = [w X]",
            RewriteRule::B3 => "[w X1X v] = [w X] + [X v]",
            RewriteRule::B4 => "[XX1 w] = [w]",
            RewriteRule::B5 => "[w 1XX] = [w]",
            RewriteRule::B6 => "[w 1XX1 v] = [w] + [v]",
            RewriteRule::S1 => "[X2X w] = [2X w]",
            RewriteRule::S2 => "[w X2X] = [w X2]",
            RewriteRule::S3 => "[w X4X v] = [w X2] + [2X v]",
        }
    }

    /// Builds both sides of the rule for concrete segments `w` and `v`
    /// (occupancy flags). Rules without a `v` ignore it. This spells the rule
    /// out directly and shares no code with the rewriting engine.
    pub fn instantiate(self, w: &[bool], v: &[bool]) -> (Vec<bool>, Vec<Vec<bool>>) {
        const X: bool = true;
        const E: bool = false;
        let cat = |parts: &[&[bool]]| parts.concat();
        match self {
            RewriteRule::B1 => (cat(&[&[X, E, X], w]), vec![cat(&[&[X], w])]),
            RewriteRule::B2 => (cat(&[w, &[X, E, X]]), vec![cat(&[w, &[X]])]),
            RewriteRule::B3 => (
                cat(&[w, &[X, E, X], v]),
                vec![cat(&[w, &[X]]), cat(&[&[X], v])],
            ),
            RewriteRule::B4 => (cat(&[&[X, X, E], w]), vec![w.to_vec()]),
            RewriteRule::B5 => (cat(&[w, &[E, X, X]]), vec![w.to_vec()]),
            RewriteRule::B6 => (cat(&[w, &[E, X, X, E], v]), vec![w.to_vec(), v.to_vec()]),
            RewriteRule::S1 => (cat(&[&[X, E, E, X], w]), vec![cat(&[&[E, E, X], w])]),
            RewriteRule::S2 => (cat(&[w, &[X, E, E, X]]), vec![cat(&[w, &[X, E, E]])]),
            RewriteRule::S3 => (
                cat(&[w, &[X, E, E, E, E, X], v]),
                vec![cat(&[w, &[X, E, E]]), cat(&[&[E, E, X], v])],
            ),
        }
    }

    /// Does the rule match `seg` with its pattern starting at `p`?
    fn matches_at(self, occ: &[bool], seg: &[u32], p: usize) -> bool {
        let n = seg.len();
        let at = |i: usize| occ[seg[i] as usize];
        let pattern = |pat: &[bool]| p + pat.len() <= n && pat.iter().enumerate().all(|(i, &x)| at(p + i) == x);
        const X: bool = true;
        const E: bool = false;
        match self {
            RewriteRule::B1 => p == 0 && pattern(&[X, E, X]),
            RewriteRule::B2 => p > 0 && p + 3 == n && pattern(&[X, E, X]),
            RewriteRule::B3 => p > 0 && p + 3 < n && pattern(&[X, E, X]),
            RewriteRule::B4 => p == 0 && pattern(&[X, X, E]),
            RewriteRule::B5 => p + 3 == n && pattern(&[E, X, X]),
            RewriteRule::B6 => pattern(&[E, X, X, E]),
            RewriteRule::S1 => p == 0 && pattern(&[X, E, E, X]),
            RewriteRule::S2 => p > 0 && p + 4 == n && pattern(&[X, E, E, X]),
            RewriteRule::S3 => pattern(&[X, E, E, E, E, X]),
        }
    }

    fn apply(self, seg: &[u32], p: usize, out: &mut Vec<Vec<u32>>) {
        let n = seg.len();
        match self {
            RewriteRule::B1 => out.push(seg[2..].to_vec()),
            RewriteRule::B2 => out.push(seg[..n - 2].to_vec()),
            RewriteRule::B3 => {
                out.push(seg[..=p].to_vec());
                out.push(seg[p + 2..].to_vec());
            }
            RewriteRule::B4 => out.push(seg[3..].to_vec()),
            RewriteRule::B5 => out.push(seg[..n - 3].to_vec()),
            RewriteRule::B6 => {
                out.push(seg[..p].to_vec());
                out.push(seg[p + 4..].to_vec());
            }
            RewriteRule::S1 => out.push(seg[1..].to_vec()),
            RewriteRule::S2 => out.push(seg[..n - 1].to_vec()),
            RewriteRule::S3 => {
                out.push(seg[..p + 3].to_vec());
                out.push(seg[p + 3..].to_vec());
            }
        }
    }
}

impl fmt::Display for RewriteRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// One independent summand of a [`PositionSum`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    /// Canonical rendering; also the memo key.
    pub key: String,
    pub board: Board,
    /// Source-board index of every component cell. Rewriting only deletes
    /// and regroups cells, so every cell has an origin.
    pub cell_map: Vec<usize>,
}

/// A disjunctive sum of boards; its SG value is the XOR of the parts.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PositionSum {
    pub components: Vec<Component>,
}

impl PositionSum {
    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.components.iter().map(|c| c.key.as_str())
    }

    /// Sum of the given boards, each taken as-is.
    pub fn from_boards(boards: impl IntoIterator<Item = Board>) -> Self {
        let components = boards
            .into_iter()
            .filter(|b| !b.is_empty())
            .map(|board| Component {
                key: board.to_string(),
                cell_map: (0..board.len()).collect(),
                board,
            })
            .collect();
        PositionSum { components }
    }
}

impl fmt::Display for PositionSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("{}");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            f.write_str(&c.key)?;
        }
        Ok(())
    }
}

fn is_treblecross(board: &Board) -> bool {
    board.shape() == Shape::Linear && board.k() == DEFAULT_K
}

/// True iff the board contains neither `XX` nor `X1X`.
pub fn is_single(board: &Board) -> Result<bool, SolveError> {
    if !is_treblecross(board) {
        return Err(SolveError::NotTreblecross);
    }
    let occ: Vec<bool> = board.cells().iter().map(|c| c.is_occupied()).collect();
    let doubled = occ.windows(2).any(|w| w[0] && w[1]);
    let split = occ.windows(3).any(|w| w[0] && !w[1] && w[2]);
    Ok(!doubled && !split)
}

/// Single-component sum holding the board unchanged.
pub fn split_components(board: &Board) -> PositionSum {
    PositionSum::from_boards([board.clone()])
}

pub fn canonicalize(board: &Board) -> PositionSum {
    canonicalize_with(board, ReductionMode::Full)
}

pub fn canonicalize_with(board: &Board, mode: ReductionMode) -> PositionSum {
    if mode == ReductionMode::Off || !is_treblecross(board) {
        return split_components(board);
    }
    let occ: Vec<bool> = board.cells().iter().map(|c| c.is_occupied()).collect();
    let segments = rewrite(&occ, mode, &mut first_match);
    finish(&occ, segments)
}

/// Canonicalization that applies a uniformly random matching rule at each
/// step instead of the leftmost one. The resulting components may differ from
/// [`canonicalize`] but the total value must not.
pub fn canonicalize_randomized<R: Rng>(board: &Board, mode: ReductionMode, rng: &mut R) -> PositionSum {
    if mode == ReductionMode::Off || !is_treblecross(board) {
        return split_components(board);
    }
    let occ: Vec<bool> = board.cells().iter().map(|c| c.is_occupied()).collect();
    let mut pick = |occ: &[bool], seg: &[u32], mode: ReductionMode| {
        let rules: &[RewriteRule] = match mode {
            ReductionMode::Full => &RewriteRule::ALL,
            _ => &RewriteRule::BASIC,
        };
        let all: Vec<(RewriteRule, usize)> = (0..seg.len())
            .flat_map(|p| rules.iter().map(move |&r| (r, p)))
            .filter(|&(r, p)| r.matches_at(occ, seg, p))
            .collect();
        if all.is_empty() {
            None
        } else {
            Some(all[rng.gen_range(0..all.len())])
        }
    };
    let segments = rewrite(&occ, mode, &mut pick);
    finish(&occ, segments)
}

fn first_match(occ: &[bool], seg: &[u32], mode: ReductionMode) -> Option<(RewriteRule, usize)> {
    let scan = |rules: &[RewriteRule]| {
        (0..seg.len()).find_map(|p| rules.iter().find(|r| r.matches_at(occ, seg, p)).map(|&r| (r, p)))
    };
    scan(&RewriteRule::BASIC).or_else(|| {
        if mode == ReductionMode::Full {
            scan(&RewriteRule::SPLIT)
        } else {
            None
        }
    })
}

fn rewrite<F>(occ: &[bool], mode: ReductionMode, pick: &mut F) -> Vec<Vec<u32>>
where
    F: FnMut(&[bool], &[u32], ReductionMode) -> Option<(RewriteRule, usize)>,
{
    let mut done = Vec::new();
    let mut work: Vec<Vec<u32>> = vec![(0..occ.len() as u32).collect()];
    let mut produced = Vec::with_capacity(2);
    while let Some(seg) = work.pop() {
        match pick(occ, &seg, mode) {
            Some((rule, p)) => {
                produced.clear();
                rule.apply(&seg, p, &mut produced);
                // Keep left-to-right processing order.
                work.extend(produced.drain(..).rev());
            }
            None => done.push(seg),
        }
    }
    done
}

fn finish(occ: &[bool], segments: Vec<Vec<u32>>) -> PositionSum {
    let mut components: Vec<Component> = segments
        .into_iter()
        .filter(|seg| seg.iter().any(|&i| !occ[i as usize]))
        .map(|mut seg| {
            let mut fwd = String::new();
            render_cells_into(Shape::Linear, seg.iter().map(|&i| occ[i as usize]), &mut fwd);
            let mut rev = String::new();
            render_cells_into(Shape::Linear, seg.iter().rev().map(|&i| occ[i as usize]), &mut rev);
            let key = if rev < fwd {
                seg.reverse();
                rev
            } else {
                fwd
            };
            let cells = seg
                .iter()
                .map(|&i| if occ[i as usize] { Cell::Occupied } else { Cell::Empty })
                .collect();
            Component {
                key,
                board: Board::from_cells_unchecked(Shape::Linear, cells, DEFAULT_K),
                cell_map: seg.into_iter().map(|i| i as usize).collect(),
            }
        })
        .collect();
    components.sort_by(|a, b| a.key.cmp(&b.key).then_with(|| a.cell_map.cmp(&b.cell_map)));
    PositionSum { components }
}
