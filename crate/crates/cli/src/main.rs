mod args;
mod play;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::Parser;
use serde_json::json;

use itcx::conjectures::{self, ConjectureReport};
use itcx::par::{self, Execution};
use itcx::solver::MemoCache;
use itcx::tables::{self, Table};
use itcx::verify::{self, SuiteReport};
use itcx::{
    classify, classify_sum, parse_board, Board, CacheError, PositionError, ReductionMode, SolveError, Solver,
    SolverConfig, DEFAULT_K,
};

use args::{CacheCmd, Cli, Command, Common, ConjectureKind, Format, Suite, TableKind};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Budget(String),
    Verify,
    Io(String),
}

impl From<PositionError> for Failure {
    fn from(e: PositionError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<CacheError> for Failure {
    fn from(e: CacheError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e.to_string())
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::BudgetExceeded { .. } => Failure::Budget(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Ctx {
    common: Common,
    k: usize,
    exec: Execution,
}

impl Ctx {
    fn config(&self) -> SolverConfig {
        let reductions = if self.common.no_reductions {
            ReductionMode::Off
        } else if self.common.basic_rules {
            ReductionMode::Basic
        } else {
            ReductionMode::Full
        };
        SolverConfig { k: self.k, reductions, budget: self.common.budget }
    }

    fn solver(&self) -> Result<Solver, Failure> {
        let config = self.config();
        Ok(match &self.common.cache {
            Some(path) => Solver::with_cache(config, MemoCache::load_or_new(path, config.k, config.effective_reductions())?),
            None => Solver::new(config),
        })
    }

    fn save(&self, solver: &Solver) -> Outcome {
        if let Some(path) = &self.common.cache {
            solver.cache().save(path)?;
        }
        Ok(())
    }

    fn board(&self, text: &str) -> Result<Board, Failure> {
        Ok(parse_board(text, self.k)?)
    }

    fn json(&self) -> bool {
        self.common.format == Format::Json
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let k = cli.common.k as usize;
    if k != DEFAULT_K {
        eprintln!("notice: k = {k}; rewrite rules hold for k = 3 only and are disabled");
    }
    if let Some(jobs) = cli.common.jobs {
        par::set_jobs(jobs.max(1));
    }
    let exec = if cli.common.jobs == Some(1) { Execution::Sequential } else { Execution::Parallel };
    let ctx = Ctx { common: cli.common, k, exec };
    let result = run(&ctx, cli.command);
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verify) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_BUDGET)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(ctx: &Ctx, command: Command) -> Outcome {
    match command {
        Command::Solve { position, moves } => solve(ctx, &position, moves),
        Command::Table(kind) => table(ctx, kind),
        Command::Classify { position } => classify_cmd(ctx, &position),
        Command::Verify(suite) => verify_cmd(ctx, suite),
        Command::Play { position, engine, engine_first } => {
            let board = ctx.board(&position)?;
            let solver = ctx.solver()?;
            let stdin = io::stdin();
            play::run(board, engine, engine_first, &solver, stdin.lock(), &mut io::stdout())?;
            ctx.save(&solver)
        }
        Command::Cache(cmd) => cache_cmd(ctx, cmd),
    }
}

fn out() -> io::StdoutLock<'static> {
    io::stdout().lock()
}

fn solve(ctx: &Ctx, position: &str, with_moves: bool) -> Outcome {
    let board = ctx.board(position)?;
    let solver = ctx.solver()?;
    let value = solver.grundy_board(&board)?;
    let sum = solver.decompose(&board);
    let parity = classify_sum(&itcx::canonicalize(&board)).ok();
    let class = parity.as_ref().map(|p| {
        if p.classes.is_empty() {
            "R1_Empty".to_string()
        } else {
            p.classes.iter().map(|c| c.name()).collect::<Vec<_>>().join(" + ")
        }
    });
    let best = if with_moves { Some(solver.best_moves(&board)?) } else { None };
    ctx.save(&solver)?;
    let mut o = out();
    if ctx.json() {
        let record = json!({
            "position": board.to_string(),
            "k": ctx.k,
            "sg": value,
            "decomposition": sum.keys().collect::<Vec<_>>(),
            "class": class,
            "sign": parity.as_ref().and_then(|p| p.sign).map(|s| s.as_i8()),
            "predicted": parity.as_ref().and_then(|p| p.predicted_grundy()),
            "winning_moves": best.as_ref().map(|b| b.iter().map(|m| m.0).collect::<Vec<_>>()),
        });
        writeln!(o, "{record}")?;
        return Ok(());
    }
    writeln!(o, "position\t{board}")?;
    writeln!(o, "sg\t{value}")?;
    writeln!(o, "decomposition\t{}", if sum.is_empty() { "0".to_string() } else { sum.to_string() })?;
    writeln!(o, "class\t{}", class.as_deref().unwrap_or("-"))?;
    if let Some(p) = parity.as_ref().and_then(|p| p.predicted_grundy()) {
        writeln!(o, "predicted\t{p}")?;
    }
    if let Some(best) = best {
        let list: Vec<String> = best.iter().map(|m| m.0.to_string()).collect();
        writeln!(o, "winning_moves\t{}", list.join(","))?;
    }
    Ok(())
}

fn classify_cmd(ctx: &Ctx, position: &str) -> Outcome {
    let board = ctx.board(position)?;
    let class = classify(&board)?;
    let mut o = out();
    if ctx.json() {
        let record = json!({
            "position": board.to_string(),
            "class": class.name(),
            "sign": class.sign().map(|s| s.as_i8()),
            "predicted": class.sign().map(|s| s.grundy()),
        });
        writeln!(o, "{record}")?;
    } else {
        writeln!(o, "position\t{board}")?;
        writeln!(o, "class\t{}", class.name())?;
        match class.sign() {
            Some(s) => {
                writeln!(o, "sign\t{s}")?;
                writeln!(o, "predicted\t{}", s.grundy())?;
            }
            None => {
                writeln!(o, "sign\t-")?;
                writeln!(o, "predicted\t-")?;
            }
        }
    }
    Ok(())
}

fn emit_table(ctx: &Ctx, table: &Table) -> Outcome {
    let mut o = out();
    if ctx.json() {
        writeln!(o, "{}", serde_json::to_string(table).expect("serializable"))?;
    } else {
        write!(o, "{}", table.to_tsv())?;
    }
    if table.is_complete() {
        Ok(())
    } else {
        Err(Failure::Budget("some cells exceeded the budget and are marked '?'".into()))
    }
}

fn table(ctx: &Ctx, kind: TableKind) -> Outcome {
    match kind {
        TableKind::SinglePiece { max_a, max_b } => {
            let solver = ctx.solver()?;
            let t = tables::single_piece_table(&solver, max_a, max_b, ctx.exec);
            ctx.save(&solver)?;
            emit_table(ctx, &t)
        }
        TableKind::Kcross { max_l, k_min, k_max } => {
            if k_min < 2 || k_max < k_min {
                return Err(Failure::Usage("need 2 <= k-min <= k-max".into()));
            }
            emit_table(ctx, &tables::kcross_table(max_l, k_min, k_max, ctx.common.budget, ctx.exec))
        }
        TableKind::Empty { max_n } => {
            let solver = ctx.solver()?;
            let rows = tables::empty_table(&solver, max_n, ctx.exec);
            ctx.save(&solver)?;
            let mut o = out();
            if ctx.json() {
                writeln!(o, "{}", serde_json::to_string(&rows).expect("serializable"))?;
            } else {
                write!(o, "{}", tables::empty_table_tsv(&rows))?;
            }
            if rows.iter().any(|r| r.value.is_none()) {
                Err(Failure::Budget("some rows exceeded the budget and are marked '?'".into()))
            } else {
                Ok(())
            }
        }
    }
}

fn emit_suite(ctx: &Ctx, report: &SuiteReport) -> Outcome {
    let mut o = out();
    if ctx.json() {
        if let Some(seed) = report.seed {
            writeln!(o, "{}", json!({ "seed": seed }))?;
        }
        writeln!(o, "{}", serde_json::to_string(report).expect("serializable"))?;
    } else {
        write!(o, "{}", report.to_text())?;
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

fn emit_conjecture(ctx: &Ctx, report: &ConjectureReport, table: Option<String>) -> Outcome {
    let mut o = out();
    if ctx.json() {
        if let Some(seed) = report.seed {
            writeln!(o, "{}", json!({ "seed": seed }))?;
        }
        writeln!(o, "{}", serde_json::to_string(report).expect("serializable"))?;
    } else {
        if let Some(seed) = report.seed {
            writeln!(o, "seed={seed}")?;
        }
        if let Some(t) = table {
            write!(o, "{t}")?;
        }
        let records = report.to_records();
        let body = match report.seed {
            Some(_) => records.split_once('\n').map_or("", |(_, rest)| rest),
            None => &records,
        };
        write!(o, "{body}")?;
    }
    if report.hard_failures() == 0 {
        Ok(())
    } else {
        Err(Failure::Verify)
    }
}

/// Column-aligned rendering of a TSV table.
fn aligned(tsv: &str) -> String {
    let rows: Vec<Vec<&str>> = tsv.lines().map(|l| l.split('\t').collect()).collect();
    let width = rows.iter().flatten().map(|c| c.len()).max().unwrap_or(1);
    let mut s = String::new();
    for row in rows {
        let cells: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        s.push_str(&cells.join(" "));
        s.push('\n');
    }
    s
}

fn verify_cmd(ctx: &Ctx, suite: Suite) -> Outcome {
    match suite {
        Suite::LemmaAlpha => emit_suite(ctx, &verify::lemma_alpha()),
        Suite::Prop21 => emit_suite(ctx, &verify::prop21()),
        Suite::Reductions { samples, max_len, seed } => {
            let seed = seed.unwrap_or(verify::DEFAULT_SEED);
            emit_suite(ctx, &verify::reductions(samples, max_len, seed, ctx.exec))
        }
        Suite::MainTheorem { max_n } => {
            let solver = ctx.solver()?;
            let report = verify::main_theorem(&solver, max_n, ctx.exec);
            ctx.save(&solver)?;
            emit_suite(ctx, &report)
        }
        Suite::Regular { max_single, max_star } => {
            let solver = ctx.solver()?;
            let report = verify::regular_correspondence(&solver, max_single, max_star, ctx.exec);
            ctx.save(&solver)?;
            emit_suite(ctx, &report)
        }
        Suite::Mechanism { max_len } => {
            let report = itcx::strategy::verify_mechanism(max_len, ctx.exec);
            let mut o = out();
            if ctx.json() {
                writeln!(o, "{}", serde_json::to_string(&report).expect("serializable"))?;
            } else {
                writeln!(
                    o,
                    "suite=mechanism max_len={} boards={} terminal={} proactive={} opponent_moves={} already_flipped={} replies={} sg_checks={} failures={} passed={}",
                    report.max_len,
                    report.boards,
                    report.terminal_boards,
                    report.proactive_moves,
                    report.opponent_moves,
                    report.already_flipped,
                    report.replies,
                    report.sg_checks,
                    report.failures.len(),
                    report.passed()
                )?;
                for f in &report.failures {
                    let opp = f.opponent.map_or("-".to_string(), |m| m.to_string());
                    writeln!(o, "FAIL position={} opponent={opp} reason={:?}", f.position, f.reason)?;
                }
                for n in &report.proximity_notes {
                    let reply = n.reply.map_or("-".to_string(), |m| m.to_string());
                    writeln!(o, "note proximity position={} class={} opponent={} reply={reply}", n.position, n.class, n.opponent)?;
                }
            }
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Verify)
            }
        }
        Suite::Oracle { exhaustive_len, random, random_len, seed } => {
            let seed = seed.unwrap_or(verify::DEFAULT_SEED);
            emit_suite(ctx, &verify::oracle_agreement(exhaustive_len, random, random_len, seed, ctx.exec))
        }
        Suite::Symmetry { max_len } => emit_suite(ctx, &verify::symmetry(max_len)),
        Suite::Notation { max_len, seed } => {
            emit_suite(ctx, &verify::notation_round_trip(max_len, seed.unwrap_or(verify::DEFAULT_SEED)))
        }
        Suite::Cache { max_len } => {
            let path = std::env::temp_dir().join(format!("itcx-verify-{}.cache", std::process::id()));
            let report = verify::cache_equivalence(max_len, Some(&path));
            let _ = std::fs::remove_file(&path);
            emit_suite(ctx, &report?)
        }
        Suite::Conjecture { kind, max_len, m, max_i, samples, seed } => match kind {
            ConjectureKind::Cover => {
                let solver = ctx.solver()?;
                let r = conjectures::check_cover(&solver, max_len.unwrap_or(30), ctx.exec);
                ctx.save(&solver)?;
                emit_conjecture(ctx, &r, None)
            }
            ConjectureKind::Preperiod => {
                let solver = ctx.solver()?;
                let (r, t) = conjectures::check_preperiod(&solver, 11, max_len.unwrap_or(30), ctx.exec);
                ctx.save(&solver)?;
                emit_conjecture(ctx, &r, Some(aligned(&t.to_tsv())))
            }
            ConjectureKind::Kodd => {
                let solver = ctx.solver()?;
                let r = conjectures::check_kodd(&solver, m, max_len.unwrap_or(40), ctx.exec);
                ctx.save(&solver)?;
                emit_conjecture(ctx, &r, None)
            }
            ConjectureKind::Simplify => {
                let seed = seed.unwrap_or(conjectures::DEFAULT_SEED);
                let r = conjectures::check_simplifications(max_len.unwrap_or(8), max_i, samples, seed, ctx.exec);
                emit_conjecture(ctx, &r, None)
            }
            ConjectureKind::Circular => {
                let (r, values) = conjectures::circular_table(max_len.unwrap_or(30), ctx.exec);
                let mut tsv = String::from("l\tG\n");
                for (l, v) in values {
                    tsv.push_str(&format!("{l}\t{}\n", v.map_or("?".to_string(), |v| v.to_string())));
                }
                emit_conjecture(ctx, &r, Some(aligned(&tsv)))
            }
        },
    }
}

fn cache_cmd(ctx: &Ctx, cmd: CacheCmd) -> Outcome {
    let Some(path) = ctx.common.cache.clone() else {
        return Err(Failure::Usage("no cache file given; use --cache or ITCX_CACHE".into()));
    };
    let mut o = out();
    match cmd {
        CacheCmd::Info => {
            let config = ctx.config();
            let cache = MemoCache::load(&path, config.k, config.effective_reductions())?;
            writeln!(o, "path\t{}", path.display())?;
            writeln!(o, "header\t{}", cache.header())?;
            writeln!(o, "entries\t{}", cache.len())?;
        }
        CacheCmd::Warm { max_n } => {
            let solver = ctx.solver()?;
            let ns: Vec<usize> = (0..=max_n).collect();
            let results = par::map(ctx.exec, &ns, |&n| {
                solver.grundy_board(&Board::empty(itcx::Shape::Linear, n, ctx.k).expect("k >= 2"))
            });
            ctx.save(&solver)?;
            writeln!(o, "entries\t{}", solver.cache().len())?;
            for r in results {
                r?;
            }
        }
        CacheCmd::Clear => match std::fs::remove_file(&path) {
            Ok(()) => writeln!(o, "removed\t{}", path.display())?,
            Err(e) if e.kind() == io::ErrorKind::NotFound => writeln!(o, "absent\t{}", path.display())?,
            Err(e) => return Err(e.into()),
        },
    }
    Ok(())
}
