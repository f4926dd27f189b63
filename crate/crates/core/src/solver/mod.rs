//! Solvers for labeled contractibility, all behind the [`Solver`] trait and selectable by name
//! through a [`SolverRegistry`].

pub mod branch;
pub mod oracle;
pub mod twdp;

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{check_witness, GraphError, InstancePair, WitnessStructure};

pub use branch::{BranchConfig, BranchSolver, BranchStats, ColoringMode, OrderStrategy};
pub use oracle::{BruteForceSolver, MaxCommonResult, OracleConfig};
pub use twdp::{TwdpSolver, TwdpStats};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Answer {
    Yes,
    No,
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "YES",
            Answer::No => "NO",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("budget of {0} exceeded")]
    BudgetExceeded(u64),
    #[error("time limit reached")]
    Timeout,
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("unsupported configuration: {0}")]
    Unsupported(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Resource limits shared by every solver. `budget` overrides the solver's own default.
#[derive(Debug, Clone, Copy, Default)]
pub struct Limits {
    pub budget: Option<u64>,
    pub deadline: Option<Instant>,
}

impl Limits {
    pub fn with_timeout(timeout: Duration) -> Self {
        Self { budget: None, deadline: Some(Instant::now() + timeout) }
    }

    pub(crate) fn expired(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }
}

/// Algorithm-specific counters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum StatDetail {
    BruteForce { partitions: u64 },
    Branch(BranchStats),
    Twdp(TwdpStats),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SolveStats {
    pub elapsed: Duration,
    pub detail: StatDetail,
}

impl SolveStats {
    /// The two headline counters written to benchmark CSVs.
    pub fn headline(&self) -> (u64, u64) {
        match &self.detail {
            StatDetail::BruteForce { partitions } => (*partitions, 0),
            StatDetail::Branch(b) => (b.nodes_explored, b.max_branching as u64),
            StatDetail::Twdp(t) => (t.max_table as u64, t.total_entries),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub answer: Answer,
    pub certificate: Option<WitnessStructure>,
    pub stats: SolveStats,
}

impl SolveResult {
    pub(crate) fn finish(
        inst: &InstancePair,
        certificate: Option<WitnessStructure>,
        started: Instant,
        detail: StatDetail,
    ) -> Self {
        if let Some(w) = &certificate {
            debug_assert!(
                check_witness(inst, w).is_ok_and(|r| r.is_valid()),
                "solver produced an invalid certificate"
            );
        }
        let answer = if certificate.is_some() { Answer::Yes } else { Answer::No };
        Self { answer, certificate, stats: SolveStats { elapsed: started.elapsed(), detail } }
    }
}

/// A decision procedure for labeled contractibility.
pub trait Solver: Send + Sync {
    fn name(&self) -> &str;
    fn solve(&self, inst: &InstancePair, limits: &Limits) -> Result<SolveResult, SolveError>;
}

/// Named collection of solvers.
#[derive(Default)]
pub struct SolverRegistry {
    solvers: BTreeMap<String, Box<dyn Solver>>,
}

impl SolverRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// `bruteforce`, `branch` and `twdp` with default settings.
    pub fn with_defaults() -> Self {
        let mut r = Self::new();
        r.register(Box::new(BruteForceSolver::default()));
        r.register(Box::new(BranchSolver::default()));
        r.register(Box::new(TwdpSolver::default()));
        r
    }

    /// Adds a solver, replacing any solver registered under the same name.
    pub fn register(&mut self, solver: Box<dyn Solver>) {
        self.solvers.insert(solver.name().to_string(), solver);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Solver> {
        self.solvers.get(name).map(|s| s.as_ref())
    }

    pub fn names(&self) -> Vec<&str> {
        self.solvers.keys().map(String::as_str).collect()
    }
}
