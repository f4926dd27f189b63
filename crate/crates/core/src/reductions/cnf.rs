//! 3-CNF formulas, DIMACS I/O and an exhaustive satisfiability oracle.

use std::fmt::Write as _;

use super::ReductionError;

/// Largest variable count accepted by [`sat_bruteforce`].
pub const MAX_BRUTEFORCE_VARS: usize = 24;

/// A literal is a non-zero signed variable index; negative means negated.
pub type Literal = i32;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<[Literal; 3]>,
}

/// Clause semantics for [`sat_bruteforce`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Semantics {
    /// Exactly one literal true.
    OneInThree,
    /// At least one literal true and at least one false.
    Nae,
    /// At least one literal true.
    Vanilla,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, ReductionError> {
        for (j, c) in clauses.iter().enumerate() {
            for &l in c {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(ReductionError::InvalidFormula(format!(
                        "clause {} has literal {l} outside 1..={num_vars}",
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { num_vars, clauses })
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    /// Number of clauses mentioning each variable (index 0 is variable 1).
    pub fn occurrences(&self) -> Vec<usize> {
        let mut occ = vec![0; self.num_vars];
        for c in &self.clauses {
            let mut vars: Vec<usize> = c.iter().map(|l| l.unsigned_abs() as usize).collect();
            vars.sort_unstable();
            vars.dedup();
            for v in vars {
                occ[v - 1] += 1;
            }
        }
        occ
    }

    /// Truth value of every literal of clause `j` under `assignment`.
    pub fn clause_values(&self, j: usize, assignment: &[bool]) -> [bool; 3] {
        self.clauses[j].map(|l| assignment[l.unsigned_abs() as usize - 1] == (l > 0))
    }

    pub fn satisfies(&self, assignment: &[bool], semantics: Semantics) -> bool {
        self.first_violated(assignment, semantics).is_none()
    }

    /// Index of the first clause not satisfied under `semantics`.
    pub fn first_violated(&self, assignment: &[bool], semantics: Semantics) -> Option<usize> {
        (0..self.clauses.len()).find(|&j| {
            let trues = self.clause_values(j, assignment).iter().filter(|&&b| b).count();
            !match semantics {
                Semantics::OneInThree => trues == 1,
                Semantics::Nae => trues == 1 || trues == 2,
                Semantics::Vanilla => trues >= 1,
            }
        })
    }

    /// Parses DIMACS CNF. Every clause must have exactly three literals.
    pub fn parse_dimacs(text: &str) -> Result<Self, ReductionError> {
        let err = |line: usize, message: String| ReductionError::Parse { line, message };
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut pending: Vec<Literal> = Vec::new();
        let mut pending_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('c') || t.starts_with('%') {
                continue;
            }
            if t.starts_with('p') {
                let parts: Vec<&str> = t.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(err(line, "expected `p cnf <vars> <clauses>`".into()));
                }
                let nv = parts[2].parse().map_err(|_| err(line, "bad variable count".into()))?;
                let nc = parts[3].parse().map_err(|_| err(line, "bad clause count".into()))?;
                if header.replace((nv, nc)).is_some() {
                    return Err(err(line, "duplicate header".into()));
                }
                continue;
            }
            if header.is_none() {
                return Err(err(line, "clause before header".into()));
            }
            for tok in t.split_whitespace() {
                let l: Literal = tok.parse().map_err(|_| err(line, format!("bad literal `{tok}`")))?;
                if pending.is_empty() {
                    pending_line = line;
                }
                if l == 0 {
                    if pending.len() != 3 {
                        return Err(err(pending_line, format!("clause has {} literals, expected 3", pending.len())));
                    }
                    clauses.push([pending[0], pending[1], pending[2]]);
                    pending.clear();
                } else {
                    pending.push(l);
                }
            }
        }
        let (nv, nc) = header.ok_or_else(|| err(0, "missing header".into()))?;
        if !pending.is_empty() {
            return Err(err(pending_line, "clause not terminated by 0".into()));
        }
        if clauses.len() != nc {
            return Err(err(0, format!("header declares {nc} clauses, found {}", clauses.len())));
        }
        Self::new(nv, clauses).map_err(|e| err(0, e.to_string()))
    }

    pub fn to_dimacs(&self) -> String {
        let mut s = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            let _ = writeln!(s, "{} {} {} 0", c[0], c[1], c[2]);
        }
        s
    }
}

/// Exhaustive search for an assignment satisfying every clause under `semantics`. Assignments are
/// tried in increasing binary order with variable 1 as the least significant bit.
pub fn sat_bruteforce(f: &CnfFormula, semantics: Semantics) -> Result<Option<Vec<bool>>, ReductionError> {
    if f.num_vars > MAX_BRUTEFORCE_VARS {
        return Err(ReductionError::TooManyVariables(f.num_vars));
    }
    let n = f.num_vars;
    for mask in 0u32..(1u32 << n) {
        let a: Vec<bool> = (0..n).map(|i| mask & (1 << i) != 0).collect();
        if f.satisfies(&a, semantics) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}
