//! Empirical checks of the open statements about single-piece boards, odd run
//! limits, prefix simplifications and circular boards.
//!
//! Statements that are proven (k = 3 for the odd-k recurrence, the i = 0 split
//! identity, the stated circular residue classes) mark their violations as
//! hard; everything else is reported without judgement.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::SolveError;
use crate::par::{self, Execution};
use crate::reduce::ReductionMode;
use crate::regular::classify;
use crate::rules::{Board, Shape, DEFAULT_K};
use crate::solver::{DenseSolver, SgValue, Solver, SolverConfig, DENSE_MAX_LEN};
use crate::tables::{single_piece_table, Table};

pub const DEFAULT_SEED: u64 = 0x1_7ceb_0a7d;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    /// Position whose value contradicts the statement; re-solving it
    /// reproduces `computed`.
    pub position: String,
    pub expected: String,
    pub computed: SgValue,
    /// Contradicts a proven statement rather than a conjecture.
    pub hard: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub id: String,
    pub range: String,
    pub seed: Option<u64>,
    pub checked: usize,
    pub skipped: usize,
    pub violations: Vec<Violation>,
    pub passed: bool,
    pub notes: Vec<String>,
}

impl ConjectureReport {
    fn new(id: &str, range: String) -> Self {
        ConjectureReport {
            id: id.into(),
            range,
            seed: None,
            checked: 0,
            skipped: 0,
            violations: Vec::new(),
            passed: false,
            notes: Vec::new(),
        }
    }

    pub fn hard_failures(&self) -> usize {
        self.violations.iter().filter(|v| v.hard).count()
    }

    /// One `key=value` record for the summary, one per violation, one per note.
    pub fn to_records(&self) -> String {
        let mut out = String::new();
        if let Some(seed) = self.seed {
            writeln!(out, "seed={seed}").unwrap();
        }
        writeln!(
            out,
            "id={} range={:?} checked={} skipped={} violations={} hard={} passed={}",
            self.id,
            self.range,
            self.checked,
            self.skipped,
            self.violations.len(),
            self.hard_failures(),
            self.passed
        )
        .unwrap();
        for v in &self.violations {
            writeln!(
                out,
                "violation position={} expected={:?} computed={} hard={}",
                v.position, v.expected, v.computed, v.hard
            )
            .unwrap();
        }
        for n in &self.notes {
            writeln!(out, "note {n}").unwrap();
        }
        out
    }
}

fn single_piece(a: usize, b: usize) -> Board {
    let mut occ = vec![false; a + b + 1];
    occ[a] = true;
    Board::from_occupancy(Shape::Linear, &occ, DEFAULT_K).expect("one piece")
}

pub const COVER_EXCEPTIONS: [&str; 4] = ["[1X1]", "[1X4]", "[4X1]", "[4X4]"];

/// Every board with at most one piece and SG at most 1 is regular, apart from
/// the four listed exceptions.
pub fn check_cover(solver: &Solver, max_length: usize, exec: Execution) -> ConjectureReport {
    let mut report = ConjectureReport::new("cover", format!("length <= {max_length}"));
    let mut boards = Vec::new();
    for n in 0..=max_length {
        boards.push(Board::linear(n));
        boards.extend((0..n).map(|a| single_piece(a, n - 1 - a)));
    }
    let values = par::map(exec, &boards, |b| solver.grundy_board(b));
    let mut exceptions = BTreeMap::new();
    for (board, value) in boards.iter().zip(values) {
        let Ok(g) = value else {
            report.skipped += 1;
            continue;
        };
        report.checked += 1;
        let class = classify(board).expect("linear k=3");
        let position = board.to_string();
        match class.sign() {
            Some(sign) if sign.grundy() != g => report.violations.push(Violation {
                position,
                expected: format!("{} for {class}", sign.grundy()),
                computed: g,
                hard: true,
            }),
            None if g <= 1 => {
                if !COVER_EXCEPTIONS.contains(&position.as_str()) || g != 1 {
                    report.violations.push(Violation {
                        position: position.clone(),
                        expected: "regular or SG > 1".into(),
                        computed: g,
                        hard: false,
                    });
                }
                exceptions.insert(position, g);
            }
            _ => {}
        }
    }
    for e in COVER_EXCEPTIONS {
        match exceptions.get(e) {
            Some(g) => report.notes.push(format!("exception {e} SG {g}")),
            None => report.notes.push(format!("exception {e} not observed in range")),
        }
    }
    report.passed = report.violations.is_empty() && COVER_EXCEPTIONS.iter().all(|e| exceptions.get(*e) == Some(&1));
    report
}

/// Preperiod from the literal statement: 5 for a in {1, 4}, else 0.
pub fn stated_preperiod(a: usize) -> usize {
    if a == 1 || a == 4 {
        5
    } else {
        0
    }
}

/// Checks `G([a X (b+5)]) = G([a X b]) xor 1` for `b_a < b <= max_b - 5`.
/// Also returns the full grid and notes the smallest preperiod observed for
/// each `a`, which covers the residue-class reading of the statement.
pub fn check_preperiod(solver: &Solver, max_a: usize, max_b: usize, exec: Execution) -> (ConjectureReport, Table) {
    let table = single_piece_table(solver, max_a, max_b, exec);
    let mut report = ConjectureReport::new("preperiod", format!("a <= {max_a}, b <= {max_b}"));
    for a in 0..=max_a {
        let mut observed = 0;
        for b in 0..=max_b.saturating_sub(5) {
            let (Some(lo), Some(hi)) = (table.get(a, b), table.get(a, b + 5)) else {
                report.skipped += 1;
                continue;
            };
            let holds = hi == lo ^ 1;
            if !holds {
                observed = b;
            }
            if b <= stated_preperiod(a) {
                continue;
            }
            report.checked += 1;
            if !holds {
                report.violations.push(Violation {
                    position: format!("[{a}X{}]", b + 5),
                    expected: format!("G([{a}X{b}]) xor 1 = {}", lo ^ 1),
                    computed: hi,
                    hard: false,
                });
            }
        }
        report.notes.push(format!("a={a} residue={} stated_b_a={} observed_b_a={observed}", a % 10, stated_preperiod(a)));
    }
    report.passed = report.violations.is_empty();
    (report, table)
}

fn empty_value(k: usize, l: usize, solver: Option<&Solver>) -> Result<SgValue, SolveError> {
    let board = Board::empty(Shape::Linear, l, k).expect("k >= 2");
    match solver {
        Some(s) if k == DEFAULT_K => s.grundy_board(&board),
        _ => DenseSolver::new().grundy(&board),
    }
}

/// Odd run limit `k = 2m + 1`: G <= 1, the two reflections, and the parity
/// base case. Hard for m = 1, where the main theorem settles it.
pub fn check_kodd(solver: &Solver, m: usize, max_length: usize, exec: Execution) -> ConjectureReport {
    assert!(m >= 1, "m must be positive");
    let k = 2 * m + 1;
    let hard = m == 1;
    let mut report = ConjectureReport::new("kodd", format!("k = {k}, a <= {max_length}"));
    let ls: Vec<usize> = (0..=max_length).collect();
    let values: Vec<Option<SgValue>> = par::map(exec, &ls, |&l| {
        if k != DEFAULT_K && l > DENSE_MAX_LEN {
            return None;
        }
        empty_value(k, l, Some(solver)).ok()
    });
    report.skipped = values.iter().filter(|v| v.is_none()).count();
    let flip = (m % 2) as SgValue;
    let check = |report: &mut ConjectureReport, l: usize, expected: SgValue, why: String| {
        if let Some(g) = values[l] {
            report.checked += 1;
            if g != expected {
                report.violations.push(Violation { position: format!("[{l}]"), expected: why, computed: g, hard });
            }
        }
    };
    for (l, v) in values.iter().enumerate() {
        if let Some(g) = *v {
            if g > 1 {
                check(&mut report, l, 1, "G <= 1".into());
            }
        }
    }
    for a in 0..=max_length {
        let Some(ga) = values[a] else { continue };
        if a < k {
            check(&mut report, a, (a % 2) as SgValue, format!("{a} mod 2"));
        }
        let up = 2 + 3 * m + a;
        if up <= max_length {
            check(&mut report, up, ga ^ flip, format!("G([{a}]) xor {flip}"));
        }
        if let Some(down) = (2 + 5 * m).checked_sub(a) {
            if down <= max_length {
                check(&mut report, down, ga ^ flip, format!("G([{a}]) xor {flip}"));
            }
        }
    }
    report.notes.push(format!(
        "values {}",
        values.iter().map(|v| v.map_or("?".into(), |g| g.to_string())).collect::<Vec<_>>().join(" ")
    ));
    report.passed = report.violations.is_empty();
    report
}

/// Random legal k = 3 segment of length at most `max_len`.
pub(crate) fn random_segment(rng: &mut impl Rng, max_len: usize) -> Vec<bool> {
    loop {
        let len = rng.gen_range(0..=max_len);
        let seg: Vec<bool> = (0..len).map(|_| rng.gen_bool(1.0 / 3.0)).collect();
        if !seg.windows(3).any(|w| w.iter().all(|&c| c)) {
            return seg;
        }
    }
}

fn concat(parts: &[&[bool]]) -> Option<Board> {
    let occ: Vec<bool> = parts.concat();
    Board::from_occupancy(Shape::Linear, &occ, DEFAULT_K).ok()
}

fn gap(n: usize) -> Vec<bool> {
    vec![false; n]
}

const X: &[bool] = &[true];

#[derive(Debug, Clone)]
struct Sample {
    u: Vec<bool>,
    v: Vec<bool>,
    i: usize,
}

/// One instance of an identity: the left side and the boards whose values,
/// XORed with `offset`, form the right side.
struct Instance {
    identity: usize,
    lhs: Board,
    rhs: Vec<Board>,
    offset: SgValue,
    hard: bool,
}

const IDENTITIES: [&str; 4] = [
    "G([u X (5i+4) X v]) = G([u X 2]) + G([2 X v]) + i mod 2",
    "G([10 u]) = G([5 u]) + 1",
    "G([8 X u]) = G([2 X u])",
    "G([X 7 X u]) = G([2 X u]) + 1",
];

fn instances(s: &Sample) -> Vec<Option<Instance>> {
    let (u, v) = (&s.u[..], &s.v[..]);
    let mid = gap(5 * s.i + 4);
    let build = |identity: usize, lhs: Option<Board>, rhs: Vec<Option<Board>>, offset: SgValue, hard: bool| {
        Some(Instance { identity, lhs: lhs?, rhs: rhs.into_iter().collect::<Option<Vec<_>>>()?, offset, hard })
    };
    vec![
        build(
            0,
            concat(&[u, X, &mid, X, v]),
            vec![concat(&[u, X, &gap(2)]), concat(&[&gap(2), X, v])],
            (s.i % 2) as SgValue,
            s.i == 0,
        ),
        build(1, concat(&[&gap(10), u]), vec![concat(&[&gap(5), u])], 1, false),
        build(2, concat(&[&gap(8), X, u]), vec![concat(&[&gap(2), X, u])], 0, false),
        build(3, concat(&[X, &gap(7), X, u]), vec![concat(&[&gap(2), X, u])], 1, false),
    ]
}

/// Samples segments `u`, `v` and checks the four prefix simplifications.
/// Values come from a solver restricted to the basic rewrite rules, so the
/// split rule that the i = 0 case establishes is not used to evaluate it.
pub fn check_simplifications(max_u_len: usize, max_i: usize, samples: usize, seed: u64, exec: Execution) -> ConjectureReport {
    let mut report = ConjectureReport::new(
        "simplify",
        format!("|u|,|v| <= {max_u_len}, i <= {max_i}, {samples} samples"),
    );
    report.seed = Some(seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut all: Vec<Sample> = (0..=max_i).map(|i| Sample { u: vec![], v: vec![], i }).collect();
    all.extend((0..samples).map(|_| Sample {
        u: random_segment(&mut rng, max_u_len),
        v: random_segment(&mut rng, max_u_len),
        i: rng.gen_range(0..=max_i),
    }));
    let solver = Solver::new(SolverConfig::with_reductions(ReductionMode::Basic));
    let results = par::map(exec, &all, |s| {
        instances(s)
            .into_iter()
            .map(|inst| {
                let inst = inst?;
                let value = |b: &Board| solver.grundy_board(b).ok();
                let lhs = value(&inst.lhs);
                let rhs = inst.rhs.iter().map(value).collect::<Option<Vec<_>>>();
                Some((inst, lhs, rhs))
            })
            .collect::<Vec<_>>()
    });
    let mut per_identity = [(0usize, 0usize); 4];
    for (inst, lhs, rhs) in results.into_iter().flatten().flatten() {
        let (Some(lhs_v), Some(rhs_v)) = (lhs, rhs) else {
            report.skipped += 1;
            continue;
        };
        report.checked += 1;
        per_identity[inst.identity].0 += 1;
        let expected = rhs_v.iter().fold(inst.offset, |acc, v| acc ^ v);
        if lhs_v != expected {
            per_identity[inst.identity].1 += 1;
            report.violations.push(Violation {
                position: inst.lhs.to_string(),
                expected: format!(
                    "{} via {}",
                    expected,
                    inst.rhs.iter().map(Board::to_string).collect::<Vec<_>>().join(" + ")
                ),
                computed: lhs_v,
                hard: inst.hard,
            });
        }
    }
    report.violations.sort_by(|a, b| (a.position.len(), &a.position).cmp(&(b.position.len(), &b.position)));
    report.violations.dedup();
    for (name, (checked, failed)) in IDENTITIES.iter().zip(per_identity) {
        report.notes.push(format!("identity {name:?} checked={checked} violations={failed}"));
    }
    report.passed = report.violations.is_empty();
    report
}

/// Value the circular statement predicts, where it makes one.
pub fn circular_prediction(l: usize) -> Option<SgValue> {
    match l % 10 {
        0 | 2 | 3 | 4 | 6 | 7 | 8 => Some(0),
        5 => Some(1),
        _ => None,
    }
}

/// `G((l))` for `1 <= l <= max_length`. Lengths ending in 1 or 9 are
/// recorded without a verdict.
pub fn circular_table(max_length: usize, exec: Execution) -> (ConjectureReport, Vec<(usize, Option<SgValue>)>) {
    let mut report = ConjectureReport::new("circular", format!("1 <= l <= {max_length}"));
    let ls: Vec<usize> = (1..=max_length).collect();
    let values = par::map(exec, &ls, |&l| {
        DenseSolver::new().grundy(&Board::empty(Shape::Circular, l, DEFAULT_K).expect("k = 3")).ok()
    });
    for (&l, value) in ls.iter().zip(&values) {
        let Some(g) = *value else {
            report.skipped += 1;
            continue;
        };
        match circular_prediction(l) {
            Some(p) => {
                report.checked += 1;
                if g != p {
                    report.violations.push(Violation {
                        position: format!("({l})"),
                        expected: p.to_string(),
                        computed: g,
                        hard: true,
                    });
                }
            }
            None => report.notes.push(format!("unclassified ({l}) SG {g}")),
        }
    }
    report.passed = report.violations.is_empty();
    (report, ls.into_iter().zip(values).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::grundy_dense;

    #[test]
    fn cover_to_20() {
        let solver = Solver::default();
        let report = check_cover(&solver, 20, Execution::Parallel);
        assert!(report.passed, "{}", report.to_records());
        assert!(report.notes.iter().any(|n| n == "exception [1X4] SG 1"));
        assert!(solver.grundy_board(&crate::parse_board("[11X1]", 3).unwrap()).unwrap() > 1);
    }

    #[test]
    fn preperiod_examples() {
        let solver = Solver::default();
        let (report, table) = check_preperiod(&solver, 11, 20, Execution::Parallel);
        assert_eq!(table.get(4, 9), Some(4));
        assert_eq!(table.get(2, 3), Some(1));
        assert_eq!(table.get(2, 8), Some(0));
        assert!(report.passed, "{}", report.to_records());
        assert!(report.notes.iter().any(|n| n == "a=1 residue=1 stated_b_a=5 observed_b_a=4"));
        assert!(report.notes.iter().any(|n| n == "a=4 residue=4 stated_b_a=5 observed_b_a=4"));
        assert!(report.notes.iter().any(|n| n == "a=2 residue=2 stated_b_a=0 observed_b_a=0"));
    }

    #[test]
    fn kodd_small_cases() {
        let solver = Solver::default();
        let r = check_kodd(&solver, 1, 30, Execution::Parallel);
        assert!(r.passed && r.hard_failures() == 0, "{}", r.to_records());
        let r = check_kodd(&solver, 2, 25, Execution::Parallel);
        assert!(r.passed, "{}", r.to_records());
    }

    #[test]
    fn simplifications_base_case() {
        let report = check_simplifications(6, 2, 60, DEFAULT_SEED, Execution::Parallel);
        assert_eq!(report.hard_failures(), 0, "{}", report.to_records());
        assert!(report.checked > 100);
        let again = check_simplifications(6, 2, 60, DEFAULT_SEED, Execution::Sequential);
        assert_eq!(report, again);
    }

    #[test]
    fn violations_recheck() {
        let report = check_simplifications(8, 3, 100, 7, Execution::Parallel);
        for v in &report.violations {
            let b = crate::parse_board(&v.position, DEFAULT_K).unwrap();
            if b.len() <= 22 {
                assert_eq!(grundy_dense(&b).unwrap(), v.computed, "{}", v.position);
            }
        }
    }

    #[test]
    fn circular_small() {
        let (report, values) = circular_table(21, Execution::Parallel);
        assert!(report.passed, "{}", report.to_records());
        assert_eq!(values[0], (1, Some(1)));
        assert_eq!(values[10], (11, Some(1)));
        assert_eq!(values[20], (21, Some(0)));
    }
}
