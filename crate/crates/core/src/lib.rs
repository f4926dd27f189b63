//! Labeled contractibility: decide whether H is obtainable from G by labeled edge contractions.
//!
//! The crate provides the graph model and contraction semantics ([`graph`]), tree decompositions
//! ([`decomposition`]), three solvers behind a common [`solver::Solver`] trait ([`solver`]), and
//! instance generators built from SAT, cross-matching and partitioned-vertex-cover inputs
//! ([`reductions`]).

pub mod decomposition;
pub mod graph;
pub mod reductions;
pub mod solver;

pub use graph::{
    apply_sequence, check_witness, sequence_to_witness, union_graph, witness_to_sequence,
    ContractionSequence, GraphError, InstancePair, Label, LabeledGraph, ValidityReport, Violation,
    WitnessStructure,
};
pub use solver::{Answer, Limits, SolveError, SolveResult, Solver, SolverRegistry};
