//! Verification suites. Each returns a [`SuiteReport`]; a suite passes when
//! it found no failures.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::conjectures::random_segment;
use crate::error::CacheError;
use crate::notation::{parse, parse_board, render_board, PatternItem, PositionPattern};
use crate::par::{self, Execution};
use crate::reduce::{canonicalize_randomized, ReductionMode, RewriteRule};
use crate::regular::{classify, RegularClass};
use crate::residue::{chi1_len, lemma_alpha_all, prop21_check};
use crate::rules::{Board, Move, Shape, DEFAULT_K};
use crate::solver::{DenseSolver, MemoCache, SgValue, Solver, SolverConfig};

pub const DEFAULT_SEED: u64 = crate::conjectures::DEFAULT_SEED;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub seed: Option<u64>,
    pub checked: usize,
    pub failures: Vec<String>,
    pub notes: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> Self {
        SuiteReport { name: name.into(), seed: None, checked: 0, failures: Vec::new(), notes: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn expect(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(failure());
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(seed) = self.seed {
            writeln!(out, "seed={seed}").unwrap();
        }
        writeln!(
            out,
            "suite={} checked={} failures={} passed={}",
            self.name,
            self.checked,
            self.failures.len(),
            self.passed()
        )
        .unwrap();
        for f in &self.failures {
            writeln!(out, "FAIL {f}").unwrap();
        }
        for n in &self.notes {
            writeln!(out, "note {n}").unwrap();
        }
        out
    }
}

/// For all 100 residue pairs at least one of the two equalities holds.
pub fn lemma_alpha() -> SuiteReport {
    let mut report = SuiteReport::new("lemma-alpha");
    let (mut first, mut second, mut both) = (0, 0, 0);
    for c in lemma_alpha_all() {
        first += usize::from(c.first_holds);
        second += usize::from(c.second_holds);
        both += usize::from(c.first_holds && c.second_holds);
        report.expect(c.first_holds || c.second_holds, || format!("a={} b={}: neither equality holds", c.a, c.b));
    }
    report.notes.push(format!("first holds for {first} pairs, second for {second}, both for {both}"));
    report
}

/// Every identity of the χ-symmetry list at every residue.
pub fn prop21() -> SuiteReport {
    let mut report = SuiteReport::new("prop21");
    for c in prop21_check() {
        report.expect(c.holds, || format!("{} at a={}: lhs {} rhs {}", c.identity, c.a, c.lhs, c.rhs));
    }
    report
}

fn board_of(occ: &[bool]) -> Option<Board> {
    Board::from_occupancy(Shape::Linear, occ, DEFAULT_K).ok()
}

/// Random instances of every rewrite rule, both sides valued by the dense
/// solver. Right-hand components are at most `max_len` cells long.
pub fn reductions(samples: usize, max_len: usize, seed: u64, exec: Execution) -> SuiteReport {
    let mut report = SuiteReport::new("reductions");
    report.seed = Some(seed);
    let rules: Vec<(usize, RewriteRule)> = RewriteRule::ALL.iter().copied().enumerate().collect();
    let results = par::map(exec, &rules, |&(n, rule)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(n as u64));
        let mut dense = DenseSolver::new();
        let mut failures = Vec::new();
        let mut done = 0;
        let mut attempts = 0;
        while done < samples && attempts < samples * 100 {
            attempts += 1;
            let w = random_segment(&mut rng, max_len.saturating_sub(1));
            let v = random_segment(&mut rng, max_len.saturating_sub(1));
            let (lhs, rhs) = rule.instantiate(&w, &v);
            if rhs.iter().any(|c| c.len() > max_len) {
                continue;
            }
            let Some(lhs) = board_of(&lhs) else { continue };
            let Some(rhs) = rhs.iter().map(|c| board_of(c)).collect::<Option<Vec<_>>>() else { continue };
            done += 1;
            let left = dense.grundy(&lhs).expect("dense");
            let right = rhs.iter().fold(0, |acc, b| acc ^ dense.grundy(b).expect("dense"));
            if left != right {
                let parts: Vec<String> = rhs.iter().map(Board::to_string).collect();
                failures.push(format!("{rule}: {lhs} = {left} but {} = {right}", parts.join(" + ")));
            }
        }
        (rule, done, failures)
    });
    for (rule, done, failures) in results {
        report.checked += done;
        if done < samples {
            report.failures.push(format!("{rule}: only {done} of {samples} instances generated"));
        }
        report.notes.push(format!("{rule} {} instances={done} failures={}", rule.describe(), failures.len()));
        report.failures.extend(failures);
    }
    report
}

/// `G([n])` is 0 exactly when χ1(n) = +1, else 1.
pub fn main_theorem(solver: &Solver, max_n: usize, exec: Execution) -> SuiteReport {
    let mut report = SuiteReport::new("main-theorem");
    let ns: Vec<usize> = (0..=max_n).collect();
    let values = par::map(exec, &ns, |&n| solver.grundy_board(&Board::linear(n)));
    for (n, value) in ns.into_iter().zip(values) {
        let want = chi1_len(n).grundy();
        match value {
            Ok(g) => report.expect(g == want, || format!("[{n}] has SG {g}, expected {want}")),
            Err(e) => report.expect(false, || format!("[{n}]: {e}")),
        }
    }
    report
}

/// Star-family boards up to `max_len`: `[X m]`, `[m X]` and `[X m X]`.
pub fn star_boards(max_len: usize) -> Vec<Board> {
    let mut out = Vec::new();
    for m in 0..max_len {
        let mut occ = vec![false; m + 1];
        occ[0] = true;
        out.push(board_of(&occ).expect("one piece"));
        out.push(board_of(&occ).expect("one piece").reversed());
        if m + 2 <= max_len {
            let mut occ = vec![false; m + 2];
            occ[0] = true;
            occ[m + 1] = true;
            out.push(board_of(&occ).expect("two pieces"));
        }
    }
    out.retain(|b| matches!(classify(b), Ok(RegularClass::PlusStar(_) | RegularClass::MinusStar(_))));
    out
}

/// Regular boards have the SG value of their family: every board with at
/// most one piece up to `max_single`, every star board up to `max_star`.
pub fn regular_correspondence(solver: &Solver, max_single: usize, max_star: usize, exec: Execution) -> SuiteReport {
    let mut report = SuiteReport::new("regular");
    let mut boards = Vec::new();
    for n in 0..=max_single {
        boards.push(Board::linear(n));
        for a in 0..n {
            let mut occ = vec![false; n];
            occ[a] = true;
            boards.push(board_of(&occ).expect("one piece"));
        }
    }
    boards.extend(star_boards(max_star));
    let mut seen = std::collections::HashSet::new();
    boards.retain(|b| seen.insert(b.to_string()) && classify(b).map(RegularClass::is_regular).unwrap_or(false));
    let values = par::map(exec, &boards, |b| solver.grundy_board(b));
    let mut per_class = std::collections::BTreeMap::<&str, usize>::new();
    for (board, value) in boards.iter().zip(values) {
        let class = classify(board).expect("linear");
        *per_class.entry(class.name()).or_default() += 1;
        let want = class.sign().expect("regular").grundy();
        match value {
            Ok(g) => report.expect(g == want, || format!("{board} ({class}) has SG {g}, expected {want}")),
            Err(e) => report.expect(false, || format!("{board}: {e}")),
        }
    }
    for (class, count) in per_class {
        report.notes.push(format!("{class} boards={count}"));
    }
    report
}

/// Every legal k = 3 linear board of the given length.
pub fn all_boards(len: usize) -> Vec<Board> {
    (0u32..1 << len)
        .filter_map(|s| board_of(&(0..len).map(|i| s >> i & 1 == 1).collect::<Vec<_>>()))
        .collect()
}

fn random_board(rng: &mut impl Rng, max_len: usize) -> Board {
    loop {
        let len = rng.gen_range(0..=max_len);
        let occ: Vec<bool> = (0..len).map(|_| rng.gen_bool(0.3)).collect();
        if let Some(b) = board_of(&occ) {
            return b;
        }
    }
}

/// Rewriting solver against the dense solver: exhaustively up to
/// `exhaustive_len`, then `random` boards up to `random_len`. Also checks the
/// mex property on a random sample of solved positions.
pub fn oracle_agreement(exhaustive_len: usize, random: usize, random_len: usize, seed: u64, exec: Execution) -> SuiteReport {
    let mut report = SuiteReport::new("oracle");
    report.seed = Some(seed);
    let full = Solver::default();
    let basic = Solver::new(SolverConfig::with_reductions(ReductionMode::Basic));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut boards: Vec<Board> = (0..=exhaustive_len).flat_map(all_boards).collect();
    let exhaustive = boards.len();
    boards.extend((0..random).map(|_| random_board(&mut rng, random_len)));
    let rows = par::map(exec, &boards, |b| {
        let dense = DenseSolver::new().grundy(b).ok();
        (dense, full.grundy_board(b).ok(), basic.grundy_board(b).ok())
    });
    for (board, (dense, f, bsc)) in boards.iter().zip(rows) {
        report.expect(dense.is_some() && f == dense && bsc == dense, || {
            format!("{board}: dense {dense:?}, reduced {f:?}, basic {bsc:?}")
        });
    }
    report.notes.push(format!("exhaustive boards={exhaustive} random boards={random}"));

    // mex property: no successor attains the value, every smaller value is attained.
    let sample: Vec<Board> = (0..100)
        .map(|_| random_board(&mut rng, random_len.min(16)))
        .filter(|b| !b.is_terminal())
        .collect();
    for board in &sample {
        let value = full.grundy_board(board).expect("solvable");
        let succ: Vec<SgValue> = full.successor_values(board).expect("solvable").into_iter().map(|(_, v)| v).collect();
        report.expect(!succ.contains(&value) && (0..value).all(|v| succ.contains(&v)), || {
            format!("{board}: value {value} is not the mex of {succ:?}")
        });
    }

    // Randomized rule order gives the same total.
    for board in boards.iter().take(500) {
        let sum = canonicalize_randomized(board, ReductionMode::Full, &mut rng);
        let want = full.grundy_board(board).expect("solvable");
        report.expect(full.grundy(&sum).ok() == Some(want), || format!("{board}: randomized rewrite {sum} changes the value"));
    }
    report
}

/// Solving with a cache written by an earlier run gives the same values as
/// solving from scratch. With `path` the cache goes through the file format.
pub fn cache_equivalence(max_len: usize, path: Option<&Path>) -> Result<SuiteReport, CacheError> {
    let mut report = SuiteReport::new("cache");
    let boards: Vec<Board> = (0..=max_len.min(12)).flat_map(all_boards).step_by(7).chain((0..=max_len).map(Board::linear)).collect();
    let cold = Solver::default();
    let cold_values: Vec<_> = boards.iter().map(|b| cold.grundy_board(b).ok()).collect();
    let config = *cold.config();
    let cache = match path {
        Some(p) => {
            cold.cache().save(p)?;
            MemoCache::load(p, config.k, config.effective_reductions())?
        }
        None => {
            let c = MemoCache::new(config.k, config.effective_reductions());
            for (k, v) in cold.cache().entries() {
                c.insert(k, v);
            }
            c
        }
    };
    report.notes.push(format!("cache entries={}", cache.len()));
    let warm = Solver::with_cache(config, cache);
    let fresh = Solver::default();
    for (board, cold_value) in boards.iter().zip(cold_values) {
        let w = warm.grundy_board(board).ok();
        let f = fresh.grundy_board(board).ok();
        report.expect(w == cold_value && f == cold_value, || format!("{board}: cold {cold_value:?}, warm {w:?}, fresh {f:?}"));
    }
    Ok(report)
}

/// Reflection invariance of both solvers on linear boards, and rotation plus
/// reflection invariance of the dense solver on circles.
pub fn symmetry(max_len: usize) -> SuiteReport {
    let mut report = SuiteReport::new("symmetry");
    let solver = Solver::default();
    let mut dense = DenseSolver::new();
    for len in 0..=max_len {
        for board in all_boards(len) {
            let v = dense.grundy(&board).expect("dense");
            let r = board.reversed();
            let (dr, sr) = (dense.grundy(&r).expect("dense"), solver.grundy_board(&r).ok());
            report.expect(dr == v && sr == Some(v), || format!("{board}: {v}, mirror dense {dr} reduced {sr:?}"));
        }
    }
    for len in 1..=max_len.min(12) {
        for s in 0u32..1 << len {
            let occ: Vec<bool> = (0..len).map(|i| s >> i & 1 == 1).collect();
            let Ok(ring) = Board::from_occupancy(Shape::Circular, &occ, DEFAULT_K) else { continue };
            let v = DenseSolver::new().grundy(&ring).expect("dense");
            let by = (s as usize) % len;
            let image = ring.rotated_left(by).reversed();
            let w = DenseSolver::new().grundy(&image).expect("dense");
            report.expect(v == w, || format!("{ring}: {v}, image {image} {w}"));
        }
    }
    report
}

/// Rendering then parsing returns the same board or pattern.
pub fn notation_round_trip(max_len: usize, seed: u64) -> SuiteReport {
    let mut report = SuiteReport::new("notation");
    report.seed = Some(seed);
    for len in 0..=max_len {
        for board in all_boards(len) {
            let text = render_board(&board);
            let back = parse_board(&text, DEFAULT_K).ok();
            report.expect(back.as_ref() == Some(&board), || format!("{text} parses to {back:?}"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..500 {
        let items: Vec<PatternItem> = (0..rng.gen_range(0..6))
            .map(|_| match rng.gen_range(0..3) {
                0 => PatternItem::Piece,
                1 => PatternItem::Gap(rng.gen_range(0..30)),
                _ => PatternItem::GapClass(rng.gen_range(0..10)),
            })
            .collect();
        let pattern = PositionPattern::new(Shape::Linear, items);
        let text = pattern.to_string();
        let back = parse(&text).ok();
        report.expect(back.as_ref() == Some(&pattern), || format!("{text} parses to {back:?}"));
    }
    report
}

/// Applies a move on a board given in notation, for callers holding strings.
pub fn apply(position: &str, mv: usize) -> Option<Board> {
    parse_board(position, DEFAULT_K).ok()?.apply_move(Move(mv)).ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lemma_alpha_passes() {
        let r = lemma_alpha();
        assert!(r.passed());
        assert_eq!(r.checked, 100);
    }

    #[test]
    fn prop21_reports_fixed_point_failures() {
        let r = prop21();
        assert_eq!(r.checked, 72);
        assert_eq!(r.failures.len(), 4);
    }

    #[test]
    fn reductions_small() {
        let r = reductions(30, 9, DEFAULT_SEED, Execution::Parallel);
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.checked, 30 * 9);
    }

    #[test]
    fn main_theorem_small() {
        let r = main_theorem(&Solver::default(), 25, Execution::Parallel);
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn regular_small() {
        let r = regular_correspondence(&Solver::default(), 16, 24, Execution::Parallel);
        assert!(r.passed(), "{}", r.to_text());
        assert!(star_boards(24).iter().any(|b| b.to_string() == "[X14X]"));
        assert!(r.notes.contains(&"R1_Star(X4X) boards=2".to_string()), "{:?}", r.notes);
    }

    #[test]
    fn oracle_small() {
        let r = oracle_agreement(9, 100, 14, DEFAULT_SEED, Execution::Parallel);
        assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let r = cache_equivalence(18, Some(&dir.path().join("c.txt"))).unwrap();
        assert!(r.passed(), "{}", r.to_text());
        assert!(cache_equivalence(14, None).unwrap().passed());
    }

    #[test]
    fn symmetry_small() {
        assert!(symmetry(9).passed());
    }

    #[test]
    fn notation_small() {
        assert!(notation_round_trip(8, 1).passed());
    }

    #[test]
    fn board_counts() {
        assert_eq!(all_boards(3).len(), 7);
        assert_eq!(apply("[5]", 2).unwrap().to_string(), "[2X2]");
    }
}
