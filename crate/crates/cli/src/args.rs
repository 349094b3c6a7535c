use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "itcx", version, about = "Solver and verification harness for Inverse Treblecross")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Run limit: placing a piece that completes k in a row is illegal.
    #[arg(long, global = true, default_value_t = 3, value_parser = clap::value_parser!(u64).range(2..=32))]
    pub k: u64,
    /// Memo cache file, loaded before and written after the run.
    #[arg(long, global = true, env = "ITCX_CACHE")]
    pub cache: Option<PathBuf>,
    /// Solve components without any rewriting.
    #[arg(long, global = true, conflicts_with = "basic_rules")]
    pub no_reductions: bool,
    /// Rewrite with the basic rules only, leaving splits out.
    #[arg(long, global = true)]
    pub basic_rules: bool,
    /// Node budget per solve.
    #[arg(long, global = true, default_value_t = 1_000_000_000)]
    pub budget: u64,
    /// Worker threads; 1 runs sequentially.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Tsv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// SG value, decomposition and classification of a position.
    Solve {
        position: String,
        /// Also list every winning move.
        #[arg(long)]
        moves: bool,
    },
    /// Reproduce an SG table.
    #[command(subcommand)]
    Table(TableKind),
    /// Regular family, sign and predicted SG value of a position.
    Classify { position: String },
    /// Run a verification suite. Exits 1 on any hard failure.
    #[command(subcommand)]
    Verify(Suite),
    /// Play against the engine.
    Play {
        position: String,
        #[arg(long, value_enum, default_value_t = Engine::Oracle)]
        engine: Engine,
        /// Let the engine make the first move.
        #[arg(long)]
        engine_first: bool,
    },
    /// Manage the memo cache file.
    #[command(subcommand)]
    Cache(CacheCmd),
}

#[derive(Debug, Subcommand)]
pub enum TableKind {
    /// G([a X b]).
    SinglePiece {
        #[arg(long, default_value_t = 11)]
        max_a: usize,
        #[arg(long, default_value_t = 15)]
        max_b: usize,
    },
    /// Empty boards across run limits.
    Kcross {
        #[arg(long, default_value_t = 25)]
        max_l: usize,
        #[arg(long, default_value_t = 2)]
        k_min: usize,
        #[arg(long, default_value_t = 13)]
        k_max: usize,
    },
    /// Empty k = 3 boards next to the residue prediction.
    Empty {
        #[arg(long, default_value_t = 50)]
        max_n: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Engine {
    Lemma,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConjectureKind {
    Cover,
    Preperiod,
    Kodd,
    Simplify,
    Circular,
}

#[derive(Debug, Subcommand)]
pub enum Suite {
    /// Residue pair lemma over all 100 pairs.
    LemmaAlpha,
    /// Symmetry identities of the residue functions.
    Prop21,
    /// Rewrite rules preserve SG values on random instances.
    Reductions {
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 11)]
        max_len: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// G([n]) follows the residue prediction.
    MainTheorem {
        #[arg(long, default_value_t = 40)]
        max_n: usize,
    },
    /// Regular boards take the SG value of their family.
    Regular {
        #[arg(long, default_value_t = 30)]
        max_single: usize,
        #[arg(long, default_value_t = 40)]
        max_star: usize,
    },
    /// The parity strategy on every regular board.
    Mechanism {
        #[arg(long, default_value_t = 20)]
        max_len: usize,
    },
    /// Rewriting solver against the dense solver.
    Oracle {
        #[arg(long, default_value_t = 14)]
        exhaustive_len: usize,
        #[arg(long, default_value_t = 1000)]
        random: usize,
        #[arg(long, default_value_t = 20)]
        random_len: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Reflection and rotation invariance.
    Symmetry {
        #[arg(long, default_value_t = 12)]
        max_len: usize,
    },
    /// Notation round trip.
    Notation {
        #[arg(long, default_value_t = 12)]
        max_len: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Warm and cold caches agree.
    Cache {
        #[arg(long, default_value_t = 24)]
        max_len: usize,
    },
    /// Conjecture checks; findings never change the exit status.
    Conjecture {
        #[arg(value_enum)]
        kind: ConjectureKind,
        #[arg(long)]
        max_len: Option<usize>,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 3)]
        max_i: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum CacheCmd {
    /// Header and entry count of the cache file.
    Info,
    /// Solve empty boards up to a length and store the results.
    Warm {
        #[arg(long, default_value_t = 30)]
        max_n: usize,
    },
    /// Delete the cache file.
    Clear,
}
