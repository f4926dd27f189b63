//! 1-in-3-SAT with positive literals.
//!
//! Labels: g_T = 1, g_F = 2; for variable i, u_i = 3i, v_i = 3i+1, v'_i = 3i+2; for clause j
//! (1-based) and k in 0..=3, w_jk = 3n + 3 + 4(j-1) + k.

use super::cnf::{CnfFormula, Semantics};
use super::ReductionError;
use crate::graph::{ContractionSequence, InstancePair, Label, LabeledGraph};

pub const G_TRUE: Label = 1;
pub const G_FALSE: Label = 2;

pub fn u(i: usize) -> Label {
    3 * i as Label
}

pub fn v(i: usize) -> Label {
    3 * i as Label + 1
}

pub fn v_neg(i: usize) -> Label {
    3 * i as Label + 2
}

pub fn w(n: usize, j: usize, k: usize) -> Label {
    (3 * n + 3 + 4 * (j - 1) + k) as Label
}

fn validate(f: &CnfFormula) -> Result<(), ReductionError> {
    for (j, c) in f.clauses.iter().enumerate() {
        if let Some(&l) = c.iter().find(|&&l| l < 0) {
            return Err(ReductionError::NegativeLiteral(l));
        }
        if c[0] == c[1] || c[0] == c[2] || c[1] == c[2] {
            return Err(ReductionError::DuplicateLiteral(j + 1));
        }
    }
    Ok(())
}

pub fn gen_from_1in3sat(f: &CnfFormula) -> Result<InstancePair, ReductionError> {
    validate(f)?;
    let n = f.num_vars;
    let mut g = LabeledGraph::new();
    let mut h = LabeledGraph::new();
    g.connect(G_TRUE, G_FALSE)?;
    h.connect(G_TRUE, G_FALSE)?;
    for i in 1..=n {
        for lit in [v(i), v_neg(i)] {
            g.connect(u(i), lit)?;
            g.connect(lit, G_TRUE)?;
            g.connect(lit, G_FALSE)?;
        }
        h.connect(u(i), G_TRUE)?;
        h.connect(u(i), G_FALSE)?;
    }
    for (idx, c) in f.clauses.iter().enumerate() {
        let j = idx + 1;
        let lits: Vec<Label> = c.iter().map(|&l| v(l as usize)).collect();
        let w0 = w(n, j, 0);
        g.add_vertex(w0);
        h.connect(w0, G_TRUE)?;
        h.connect(w0, G_FALSE)?;
        for &l in &lits {
            g.connect(w0, l)?;
        }
        for k in 1..=3 {
            let wk = w(n, j, k);
            g.connect(wk, G_TRUE)?;
            h.connect(wk, G_TRUE)?;
            h.connect(wk, G_FALSE)?;
            // Alternating 6-cycle w_j1 l1 w_j2 l2 w_j3 l3.
            g.connect(wk, lits[k - 1])?;
            g.connect(wk, lits[(k + 1) % 3])?;
        }
    }
    Ok(InstancePair::new(g, h)?)
}

pub(super) fn certificate(f: &CnfFormula, assignment: &[bool]) -> Result<ContractionSequence, ReductionError> {
    validate(f)?;
    if let Some(j) = f.first_violated(assignment, Semantics::OneInThree) {
        return Err(ReductionError::AssignmentDoesNotSatisfy(j + 1));
    }
    let pairs = (1..=f.num_vars)
        .flat_map(|i| {
            if assignment[i - 1] {
                [(G_TRUE, v(i)), (G_FALSE, v_neg(i))]
            } else {
                [(G_FALSE, v(i)), (G_TRUE, v_neg(i))]
            }
        })
        .collect();
    Ok(ContractionSequence::new(pairs))
}
