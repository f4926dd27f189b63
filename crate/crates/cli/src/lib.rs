//! The `lcp` command-line tool: file formats, solver dispatch, instance generation,
//! decomposition output and benchmarking.
//!
//! Exit codes: 0 YES or valid, 1 NO or invalid, 2 input error, 3 budget or time limit,
//! 4 disagreement between algorithms or a certificate that fails verification.

pub mod args;
pub mod bench;
pub mod commands;
pub mod formats;

use thiserror::Error;

pub use args::Cli;

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;
pub const EXIT_FAILURE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Limit(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Limit(_) => EXIT_LIMIT,
            CliError::Failed(_) => EXIT_FAILURE,
        }
    }
}

/// Runs a parsed command line and returns the process exit code. Diagnostics go to stderr.
pub fn run(cli: &Cli) -> i32 {
    use args::Command;
    let r = match &cli.command {
        Command::Solve(a) => commands::cmd_solve(a),
        Command::Check(a) => commands::cmd_check(a),
        Command::Generate(a) => commands::cmd_generate(a),
        Command::Decompose(a) => commands::cmd_decompose(a),
        Command::Bench(a) => bench::cmd_bench(a),
    };
    r.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    })
}
