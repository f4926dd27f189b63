//! Positive NAE-(3,4)-SAT into bounded-degree instances where H is a path.
//!
//! With m clauses (after padding) and p = 2m + 2 = 2^q, the labels are v_1..v_p = 1..p,
//! C_j = p + j, a_j = p + m + j, C'_j = p + 2m + j, a'_j = p + 3m + j, u_i = p + 4m + i, and
//! anonymous tree vertices from p + 4m + n + 1 on, left tree before right tree, level by level.
//!
//! Each side is a complete binary tree of depth q whose leftmost root-to-leaf path is the segment
//! of the H path ending at the centre. Its leaves, left to right, are the central path vertex, one
//! spare leaf, then C_1, a_1, ..., C_m, a_m. The vertices of every internal level are chained into
//! a path, which keeps each level connected so that it can become one witness class.

use std::collections::BTreeMap;

use super::cnf::{CnfFormula, Semantics};
use super::ReductionError;
use crate::graph::{witness_to_sequence, ContractionSequence, InstancePair, Label, LabeledGraph, WitnessStructure};

const MAX_OCCURRENCES: usize = 4;

/// Appends clauses over fresh variables until m >= 3 and 2m + 2 is a power of two. Each new clause
/// is NAE-satisfiable on its own and shares no variable with anything else.
pub fn pad_nae_formula(f: &CnfFormula) -> CnfFormula {
    let mut out = f.clone();
    let ok = |m: usize| m >= 3 && (2 * m + 2).is_power_of_two();
    while !ok(out.clauses.len()) {
        let n = out.num_vars as i32;
        out.clauses.push([n + 1, n + 2, n + 3]);
        out.num_vars += 3;
    }
    out
}

fn validate(f: &CnfFormula) -> Result<(), ReductionError> {
    for c in &f.clauses {
        if let Some(&l) = c.iter().find(|&&l| l < 0) {
            return Err(ReductionError::NegativeLiteral(l));
        }
    }
    for (i, &count) in f.occurrences().iter().enumerate() {
        if count > MAX_OCCURRENCES {
            return Err(ReductionError::VariableOccursTooOften { var: i + 1, count });
        }
    }
    Ok(())
}

/// Label layout of a padded formula.
struct Layout {
    p: usize,
    m: usize,
    /// Index of the tree root on the left path; the right root is v_{p+1-r}.
    r: usize,
    left: Vec<Vec<Label>>,
    right: Vec<Vec<Label>>,
}

impl Layout {
    fn new(f: &CnfFormula) -> Self {
        let m = f.clauses.len();
        let p = 2 * m + 2;
        let q = p.trailing_zeros() as usize;
        let r = p / 2 - q;
        let mut next = (p + 4 * m + f.num_vars) as Label;
        let mut fresh = || {
            next += 1;
            next
        };
        let v = |i: usize| i as Label;
        let mut build = |path: &dyn Fn(usize) -> Label, leaves: Vec<Label>| {
            let mut levels = vec![vec![path(0)]];
            for d in 1..q {
                let mut level = vec![path(d)];
                level.extend((1..1usize << d).map(|_| fresh()));
                levels.push(level);
            }
            let mut last = vec![path(q), fresh()];
            last.extend(leaves);
            levels.push(last);
            levels
        };
        let left_leaves = (1..=m).flat_map(|j| [(p + j) as Label, (p + m + j) as Label]).collect();
        let left = build(&|d| v(r + d), left_leaves);
        let right_leaves = (1..=m).flat_map(|j| [(p + 2 * m + j) as Label, (p + 3 * m + j) as Label]).collect();
        let right = build(&|d| v(p + 1 - r - d), right_leaves);
        Self { p, m, r, left, right }
    }

    fn clause(&self, j: usize) -> Label {
        (self.p + j) as Label
    }

    fn aux(&self, j: usize) -> Label {
        (self.p + self.m + j) as Label
    }

    fn clause_mirror(&self, j: usize) -> Label {
        (self.p + 2 * self.m + j) as Label
    }

    fn aux_mirror(&self, j: usize) -> Label {
        (self.p + 3 * self.m + j) as Label
    }

    fn var(&self, i: usize) -> Label {
        (self.p + 4 * self.m + i) as Label
    }
}

/// Builds the instance for `f`, padding it first. Variables that occur in no clause get no vertex.
pub fn gen_from_nae34sat(f: &CnfFormula) -> Result<InstancePair, ReductionError> {
    validate(f)?;
    let f = pad_nae_formula(f);
    let lay = Layout::new(&f);
    let (p, m) = (lay.p, lay.m);
    let mut g = LabeledGraph::new();
    let mut h = LabeledGraph::new();
    for i in 1..p {
        g.connect(i as Label, i as Label + 1)?;
        h.connect(i as Label, i as Label + 1)?;
    }
    for levels in [&lay.left, &lay.right] {
        let q = levels.len() - 1;
        for d in 1..=q {
            for (i, &x) in levels[d].iter().enumerate() {
                g.connect(levels[d - 1][i / 2], x)?;
            }
            if d < q {
                for pair in levels[d].windows(2) {
                    g.connect(pair[0], pair[1])?;
                }
            }
        }
        g.connect(levels[q][0], levels[q][1])?;
    }
    for j in 1..m {
        g.connect(lay.aux(j), lay.aux(j + 1))?;
        g.connect(lay.aux_mirror(j), lay.aux_mirror(j + 1))?;
    }
    g.connect(lay.aux(1), (p / 2) as Label)?;
    g.connect(lay.aux_mirror(1), (p / 2 + 1) as Label)?;
    for j in 1..=m {
        g.connect(lay.clause(j), lay.clause_mirror(j))?;
    }
    for (idx, c) in f.clauses.iter().enumerate() {
        let j = idx + 1;
        for &l in c {
            let x = lay.var(l as usize);
            for t in [lay.clause(j), lay.aux(j), lay.clause_mirror(j), lay.aux_mirror(j)] {
                g.connect(x, t)?;
            }
        }
    }
    Ok(InstancePair::new(g, h)?)
}

/// Level-based witness structure for a NAE-satisfying assignment of the padded formula `f`.
pub fn nae_witness(f: &CnfFormula, assignment: &[bool]) -> Result<WitnessStructure, ReductionError> {
    validate(f)?;
    if let Some(j) = f.first_violated(assignment, Semantics::Nae) {
        return Err(ReductionError::AssignmentDoesNotSatisfy(j + 1));
    }
    let lay = Layout::new(f);
    let (p, r) = (lay.p, lay.r);
    let mut owner: BTreeMap<Label, Label> = BTreeMap::new();
    for i in 1..=p {
        owner.insert(i as Label, i as Label);
    }
    for (levels, class_of) in [
        (&lay.left, Box::new(|d: usize| (r + d) as Label) as Box<dyn Fn(usize) -> Label>),
        (&lay.right, Box::new(|d: usize| (p + 1 - r - d) as Label)),
    ] {
        let q = levels.len() - 1;
        for (d, level) in levels.iter().enumerate() {
            for &x in level {
                owner.insert(x, class_of(d));
            }
        }
        // The spare leaf stays with its parent.
        owner.insert(levels[q][1], class_of(q - 1));
    }
    let occurs = f.occurrences();
    for i in 1..=f.num_vars {
        if occurs[i - 1] > 0 {
            let class = if assignment[i - 1] { p / 2 } else { p / 2 + 1 };
            owner.insert(lay.var(i), class as Label);
        }
    }
    Ok(WitnessStructure::from_owner(&owner))
}

/// Pads `f` and `assignment` alike; each padding clause is set to (true, false, false).
fn padded(f: &CnfFormula, assignment: &[bool]) -> (CnfFormula, Vec<bool>) {
    let pf = pad_nae_formula(f);
    let mut a = assignment.to_vec();
    while a.len() < pf.num_vars {
        a.extend([true, false, false]);
    }
    (pf, a)
}

pub(super) fn certificate(f: &CnfFormula, assignment: &[bool]) -> Result<ContractionSequence, ReductionError> {
    validate(f)?;
    if let Some(j) = f.first_violated(assignment, Semantics::Nae) {
        return Err(ReductionError::AssignmentDoesNotSatisfy(j + 1));
    }
    let inst = gen_from_nae34sat(f)?;
    let (pf, pa) = padded(f, assignment);
    let w = nae_witness(&pf, &pa)?;
    Ok(witness_to_sequence(&w, inst.g())?)
}
