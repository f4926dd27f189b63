//! Exhaustive witness-partition enumeration, and maximum common labeled contraction on top of it.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::{Answer, Limits, SolveError, SolveResult, Solver, StatDetail};
use crate::graph::{
    witness_to_sequence, ContractionSequence, InstancePair, Label, LabeledGraph, WitnessStructure,
};

pub const DEFAULT_PARTITION_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Abandon partial assignments whose fixed vertices already make two non-adjacent H classes
    /// adjacent. Off means every complete partition is checked.
    pub prune: bool,
    /// Worker threads; the first free vertex's class splits the work into shards.
    pub threads: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { prune: true, threads: 1 }
    }
}

/// Index form of an instance: H vertices are `0..c` (ascending label), free vertices follow.
struct Compiled {
    labels: Vec<Label>,
    c: usize,
    adj: Vec<Vec<usize>>,
    hadj: Vec<bool>,
}

impl Compiled {
    fn new(inst: &InstancePair) -> Self {
        let mut labels: Vec<Label> = inst.h().vertices().collect();
        let c = labels.len();
        labels.extend(inst.free_vertices());
        let index: BTreeMap<Label, usize> = labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = labels
            .iter()
            .map(|&v| inst.g().neighbors(v).unwrap().iter().map(|w| index[w]).collect())
            .collect();
        let mut hadj = vec![false; c * c];
        for (a, b) in inst.h().edges() {
            let (i, j) = (index[&a], index[&b]);
            hadj[i * c + j] = true;
            hadj[j * c + i] = true;
        }
        Self { labels, c, adj, hadj }
    }

    fn n(&self) -> usize {
        self.labels.len()
    }

    /// Connectivity of every class and equality of class adjacency with E(H).
    fn is_witness(&self, cls: &[usize], parent: &mut Vec<usize>, seen: &mut Vec<bool>) -> bool {
        let n = self.n();
        parent.clear();
        parent.extend(0..n);
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        seen.clear();
        seen.resize(self.c * self.c, false);
        for a in 0..n {
            for &b in &self.adj[a] {
                if b <= a {
                    continue;
                }
                let (ca, cb) = (cls[a], cls[b]);
                if ca == cb {
                    let (ra, rb) = (find(parent, a), find(parent, b));
                    if ra != rb {
                        parent[ra] = rb;
                    }
                } else {
                    if !self.hadj[ca * self.c + cb] {
                        return false;
                    }
                    seen[ca * self.c + cb] = true;
                    seen[cb * self.c + ca] = true;
                }
            }
        }
        if seen != &self.hadj {
            return false;
        }
        // Class i is connected iff every member shares the root of vertex i.
        (self.c..n).all(|v| find(parent, v) == find(parent, cls[v]))
    }
}

struct Search<'a> {
    cp: &'a Compiled,
    prune: bool,
    budget: u64,
    limits: &'a Limits,
    checks: &'a AtomicU64,
    leaves: u64,
    local_checks: u64,
    cls: Vec<usize>,
    parent: Vec<usize>,
    seen: Vec<bool>,
}

enum Outcome {
    Found,
    Exhausted,
    Stopped,
}

impl Search<'_> {
    fn tick(&mut self) -> Result<(), SolveError> {
        self.local_checks += 1;
        if self.local_checks.is_multiple_of(1024) {
            let total = self.checks.fetch_add(1024, Ordering::Relaxed) + 1024;
            if total > self.budget {
                return Err(SolveError::BudgetExceeded(self.budget));
            }
            if self.limits.expired() {
                return Err(SolveError::Timeout);
            }
        }
        Ok(())
    }

    fn consistent(&self, v: usize) -> bool {
        let c = self.cp.c;
        let cv = self.cls[v];
        self.cp.adj[v]
            .iter()
            .all(|&w| w > v || self.cls[w] == cv || self.cp.hadj[cv * c + self.cls[w]])
    }

    /// Depth-first enumeration of positions `pos..n` in lexicographic order.
    fn run(&mut self, pos: usize, stop: &dyn Fn() -> bool) -> Result<Outcome, SolveError> {
        let n = self.cp.n();
        if pos == n {
            self.tick()?;
            self.leaves += 1;
            let (cls, parent, seen) = (&self.cls, &mut self.parent, &mut self.seen);
            return Ok(if self.cp.is_witness(cls, parent, seen) { Outcome::Found } else { Outcome::Exhausted });
        }
        if stop() {
            return Ok(Outcome::Stopped);
        }
        for class in 0..self.cp.c {
            self.cls[pos] = class;
            if self.prune {
                self.tick()?;
                if !self.consistent(pos) {
                    continue;
                }
            }
            match self.run(pos + 1, stop)? {
                Outcome::Exhausted => {}
                other => return Ok(other),
            }
        }
        Ok(Outcome::Exhausted)
    }
}

fn witness_from(cp: &Compiled, cls: &[usize]) -> WitnessStructure {
    let owner: BTreeMap<Label, Label> =
        (0..cp.n()).map(|v| (cp.labels[v], cp.labels[cls[v]])).collect();
    WitnessStructure::from_owner(&owner)
}

/// Brute-force solver with the default configuration and budget.
pub fn solve_bruteforce(inst: &InstancePair) -> Result<SolveResult, SolveError> {
    solve_bruteforce_with(inst, &OracleConfig::default(), &Limits::default())
}

/// Enumerates assignments of `V(G) \ V(H)` to the H classes as a mixed-radix counter over the free
/// vertices in label order. Returns the lexicographically first valid witness structure.
pub fn solve_bruteforce_with(
    inst: &InstancePair,
    cfg: &OracleConfig,
    limits: &Limits,
) -> Result<SolveResult, SolveError> {
    let started = Instant::now();
    let budget = limits.budget.unwrap_or(DEFAULT_PARTITION_BUDGET);
    let cp = Compiled::new(inst);
    let no = |partitions| {
        Ok(SolveResult::finish(inst, None, started, StatDetail::BruteForce { partitions }))
    };
    if inst.has_uncoverable_component() || (cp.c == 0 && cp.n() > 0) {
        return no(0);
    }
    let checks = AtomicU64::new(0);
    let fresh = |cls: Vec<usize>| Search {
        cp: &cp,
        prune: cfg.prune,
        budget,
        limits,
        checks: &checks,
        leaves: 0,
        local_checks: 0,
        cls,
        parent: Vec::new(),
        seen: Vec::new(),
    };
    let mut initial: Vec<usize> = (0..cp.c).collect();
    initial.resize(cp.n(), 0);

    if cfg.threads <= 1 || cp.n() == cp.c {
        let mut s = fresh(initial);
        let outcome = s.run(cp.c, &|| false)?;
        let cert = matches!(outcome, Outcome::Found).then(|| witness_from(&cp, &s.cls));
        return Ok(SolveResult::finish(inst, cert, started, StatDetail::BruteForce { partitions: s.leaves }));
    }

    // Shard on the class of the first free vertex; the lowest shard with a witness wins.
    let best = AtomicUsize::new(usize::MAX);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| SolveError::Unsupported(e.to_string()))?;
    let results: Vec<Result<(u64, Option<Vec<usize>>), SolveError>> = pool.install(|| {
        (0..cp.c)
            .into_par_iter()
            .map(|shard| {
                let mut s = fresh(initial.clone());
                s.cls[cp.c] = shard;
                if cfg.prune && !s.consistent(cp.c) {
                    return Ok((0, None));
                }
                let stop = || best.load(Ordering::Relaxed) < shard;
                let outcome = s.run(cp.c + 1, &stop)?;
                if matches!(outcome, Outcome::Found) {
                    best.fetch_min(shard, Ordering::Relaxed);
                    return Ok((s.leaves, Some(s.cls)));
                }
                Ok((s.leaves, None))
            })
            .collect()
    });
    let mut partitions = 0;
    let mut cert = None;
    for r in results {
        let (leaves, found) = r?;
        partitions += leaves;
        if cert.is_none() {
            cert = found.map(|cls| witness_from(&cp, &cls));
        }
    }
    Ok(SolveResult::finish(inst, cert, started, StatDetail::BruteForce { partitions }))
}

/// Registry entry for the brute-force oracle.
#[derive(Debug, Clone, Default)]
pub struct BruteForceSolver {
    pub config: OracleConfig,
}

impl Solver for BruteForceSolver {
    fn name(&self) -> &str {
        "bruteforce"
    }

    fn solve(&self, inst: &InstancePair, limits: &Limits) -> Result<SolveResult, SolveError> {
        solve_bruteforce_with(inst, &self.config, limits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaxCommonResult {
    pub answer: Answer,
    pub common: Option<LabeledGraph>,
    pub seq_g: Option<ContractionSequence>,
    pub seq_h: Option<ContractionSequence>,
    /// Distinct contractions of H that were tested against G.
    pub candidates: u64,
    pub partitions: u64,
    pub elapsed: Duration,
}

/// Quotient of `h` by `owner` (vertex to representative), if every class is connected.
fn quotient(h: &LabeledGraph, owner: &BTreeMap<Label, Label>) -> Option<LabeledGraph> {
    let w = WitnessStructure::from_owner(owner);
    if !w.classes.values().all(|c| h.is_connected_subset(c)) {
        return None;
    }
    let mut q = LabeledGraph::with_vertices(w.classes.keys().copied());
    for (a, b) in h.edges() {
        let (ra, rb) = (owner[&a], owner[&b]);
        if ra != rb {
            q.add_edge(ra, rb).unwrap();
        }
    }
    Some(q)
}

/// Maximum common labeled contraction: is there M with `G/S1 = M = H/S2` and `|S1| + |S2| <= k`?
///
/// Contractions of `h` are enumerated by representative set, largest first, and each distinct
/// candidate is tested against `g` with the brute-force solver.
pub fn solve_maxcommon(
    g: &LabeledGraph,
    h: &LabeledGraph,
    k: usize,
    limits: &Limits,
) -> Result<MaxCommonResult, SolveError> {
    let started = Instant::now();
    let budget = limits.budget.unwrap_or(DEFAULT_PARTITION_BUDGET);
    let hv: Vec<Label> = h.vertices().collect();
    let mut tried: BTreeSet<(Vec<Label>, Vec<(Label, Label)>)> = BTreeSet::new();
    let mut partitions = 0u64;
    let mut out = MaxCommonResult {
        answer: Answer::No,
        common: None,
        seq_g: None,
        seq_h: None,
        candidates: 0,
        partitions: 0,
        elapsed: Duration::ZERO,
    };
    let min_size = usize::from(!hv.is_empty());
    for size in (min_size..=hv.len()).rev() {
        let cost = (g.vertex_count().saturating_sub(size)) + (hv.len() - size);
        if size > g.vertex_count() {
            continue;
        }
        if cost > k {
            break;
        }
        for reps in combinations(&hv, size) {
            if !reps.iter().all(|&r| g.has_vertex(r)) {
                continue;
            }
            let others: Vec<Label> = hv.iter().copied().filter(|v| !reps.contains(v)).collect();
            let mut digits = vec![0usize; others.len()];
            loop {
                partitions += 1;
                if partitions > budget {
                    return Err(SolveError::BudgetExceeded(budget));
                }
                if limits.expired() {
                    return Err(SolveError::Timeout);
                }
                let mut owner: BTreeMap<Label, Label> = reps.iter().map(|&r| (r, r)).collect();
                for (i, &v) in others.iter().enumerate() {
                    owner.insert(v, reps[digits[i]]);
                }
                if let Some(q) = quotient(h, &owner) {
                    if tried.insert((reps.clone(), q.edges())) {
                        out.candidates += 1;
                        let inst = InstancePair::new(g.clone(), q.clone())?;
                        let sub_limits = Limits { budget: Some(budget - partitions), ..*limits };
                        let r = solve_bruteforce_with(&inst, &OracleConfig::default(), &sub_limits)?;
                        if let StatDetail::BruteForce { partitions: p } = r.stats.detail {
                            partitions += p;
                        }
                        if let Some(wg) = r.certificate {
                            let wh = WitnessStructure::from_owner(&owner);
                            out.answer = Answer::Yes;
                            out.seq_g = Some(witness_to_sequence(&wg, g)?);
                            out.seq_h = Some(witness_to_sequence(&wh, h)?);
                            out.common = Some(q);
                            out.partitions = partitions;
                            out.elapsed = started.elapsed();
                            return Ok(out);
                        }
                    }
                }
                // Mixed-radix increment over the non-representatives.
                let mut wrapped = true;
                for d in digits.iter_mut().rev() {
                    *d += 1;
                    if *d < size {
                        wrapped = false;
                        break;
                    }
                    *d = 0;
                }
                if wrapped {
                    break;
                }
            }
        }
    }
    out.partitions = partitions;
    out.elapsed = started.elapsed();
    Ok(out)
}

/// All `size`-element subsets of `items` in lexicographic order.
fn combinations(items: &[Label], size: usize) -> Vec<Vec<Label>> {
    fn rec(items: &[Label], size: usize, start: usize, cur: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
        if cur.len() == size {
            out.push(cur.clone());
            return;
        }
        for i in start..items.len() {
            if items.len() - i < size - cur.len() {
                break;
            }
            cur.push(items[i]);
            rec(items, size, i + 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(items, size, 0, &mut Vec::new(), &mut out);
    out
}
