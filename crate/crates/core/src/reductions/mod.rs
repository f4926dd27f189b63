//! Instance generators with known answers.
//!
//! Four forward maps turn instances of 1-in-3-SAT, positive NAE-(3,4)-SAT, cross matching and
//! sub-cubic partitioned vertex cover into contractibility instances with the same answer. A seeded
//! random generator and exhaustive source-problem oracles complete the toolkit.

pub mod cnf;
pub mod crossmatch;
pub mod nae;
pub mod onein3;
pub mod pvc;
pub mod random;

use thiserror::Error;

use crate::graph::{ContractionSequence, GraphError};

pub use cnf::{sat_bruteforce, CnfFormula, Literal, Semantics};
pub use crossmatch::{crossmatch_bruteforce, crossmatch_witness, gen_from_crossmatching, CrossMatchingInstance};
pub use nae::{gen_from_nae34sat, nae_witness, pad_nae_formula};
pub use onein3::gen_from_1in3sat;
pub use pvc::{gen_from_pvc, pvc_bruteforce, pvc_witness, PartGadget, PvcInstance};
pub use random::{gen_random, RandomInstance, RandomMode};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid formula: {0}")]
    InvalidFormula(String),
    #[error("literal {0} is negative; only positive literals are supported")]
    NegativeLiteral(Literal),
    #[error("clause {0} repeats a literal")]
    DuplicateLiteral(usize),
    #[error("variable {var} occurs in {count} clauses (at most 4 allowed)")]
    VariableOccursTooOften { var: usize, count: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("{0} variables exceed the brute-force limit")]
    TooManyVariables(usize),
    #[error("assignment violates clause {0}")]
    AssignmentDoesNotSatisfy(usize),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Which forward certificate to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    OneInThree,
    Nae34,
}

/// Contraction sequence that turns the generated G into the generated H, given a satisfying
/// assignment (`assignment[i]` is the value of variable `i + 1`).
pub fn certificate_from_assignment(
    f: &CnfFormula,
    assignment: &[bool],
    which: CertificateKind,
) -> Result<ContractionSequence, ReductionError> {
    if assignment.len() != f.num_vars {
        return Err(ReductionError::InvalidParameters(format!(
            "assignment has {} values for {} variables",
            assignment.len(),
            f.num_vars
        )));
    }
    match which {
        CertificateKind::OneInThree => onein3::certificate(f, assignment),
        CertificateKind::Nae34 => nae::certificate(f, assignment),
    }
}
