//! Command-line syntax.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "lcp", version, about = "Labeled contractibility solvers and instance tools")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether H is a labeled contraction of G; prints YES or NO.
    Solve(SolveArgs),
    /// Validate a certificate (sequence or witness) against an instance.
    Check(CheckArgs),
    /// Write an instance from a source problem or at random.
    Generate(GenerateArgs),
    /// Write a tree decomposition of G union H in PACE .td format.
    Decompose(DecomposeArgs),
    /// Run several algorithms over a directory of .lcp files and write a CSV.
    Bench(BenchArgs),
}

#[derive(Debug, Parser)]
pub struct SolveArgs {
    pub instance: PathBuf,
    /// bruteforce, branch, twdp, or auto.
    #[arg(long, default_value = "auto")]
    pub algo: String,
    /// Decomposition for twdp (PACE .td; ids are positions of the gv lines).
    #[arg(long)]
    pub td: Option<PathBuf>,
    /// Write the contraction sequence here on YES.
    #[arg(long)]
    pub cert: Option<PathBuf>,
    /// Write run statistics here as JSON.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Dump every twdp table; to PATH, or to standard error without one.
    #[arg(long, value_name = "PATH", num_args = 0..=1)]
    pub trace: Option<Option<PathBuf>>,
    /// Disable pruning in the brute-force oracle so every partition is checked.
    #[arg(long)]
    pub paper_faithful: bool,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Work budget, overriding the solver default (partitions, nodes or table entries).
    #[arg(long)]
    pub budget: Option<u64>,
}

#[derive(Debug, Parser)]
pub struct CheckArgs {
    pub instance: PathBuf,
    pub certificate: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    #[value(name = "1in3sat")]
    OneInThreeSat,
    #[value(name = "nae34")]
    Nae34,
    Crossmatch,
    Pvc,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Yes,
    Perturbed,
}

#[derive(Debug, Parser)]
pub struct GenerateArgs {
    pub family: Family,
    /// DIMACS CNF input (1in3sat, nae34).
    #[arg(long)]
    pub cnf: Option<PathBuf>,
    /// Cross-matching or PVC text input.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Vertices of G (random).
    #[arg(long)]
    pub n: Option<usize>,
    /// Contractions (random).
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "yes")]
    pub mode: ModeArg,
    /// Output .lcp path.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Also write the forward certificate, when the input has a solution.
    #[arg(long, value_name = "PATH")]
    pub emit_cert: Option<PathBuf>,
}

#[derive(Debug, Parser)]
pub struct DecomposeArgs {
    pub instance: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Parser)]
pub struct BenchArgs {
    /// Directory of .lcp files.
    #[arg(long)]
    pub dir: PathBuf,
    /// Comma-separated algorithm names.
    #[arg(long, value_delimiter = ',', default_value = "bruteforce,branch,twdp")]
    pub algos: Vec<String>,
    /// Per-run limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub timeout: f64,
    #[arg(long)]
    pub out: PathBuf,
}
