//! Branch-and-prune search over class assignments of `V(G) \ V(H)`, with candidate classes filtered
//! by a proper colouring of H, adjacency consistency, distances and reachability.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::time::Instant;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use super::{Limits, SolveError, SolveResult, Solver, StatDetail};
use crate::graph::{check_witness, colors_used, InstancePair, Label, LabeledGraph, WitnessStructure};

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;
/// Largest H for which exact colouring is allowed.
pub const EXACT_COLORING_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ColoringMode {
    Greedy,
    Exact,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OrderStrategy {
    /// Next vertex: smallest label among unassigned vertices with an assigned neighbour whose class
    /// is not yet ruled out. Branches on those neighbour classes plus one "elsewhere" branch.
    Frontier,
    /// Next vertex: smallest unassigned label. Branches on every candidate class.
    Label,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchConfig {
    pub coloring_mode: ColoringMode,
    pub node_budget: u64,
    pub order_strategy: OrderStrategy,
}

impl Default for BranchConfig {
    fn default() -> Self {
        Self {
            coloring_mode: ColoringMode::Greedy,
            node_budget: DEFAULT_NODE_BUDGET,
            order_strategy: OrderStrategy::Frontier,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BranchStats {
    pub nodes_explored: u64,
    pub max_branching: usize,
    pub depth: usize,
    pub colors_used: usize,
}

/// Exact colouring by backtracking over increasing colour counts.
pub fn exact_coloring(h: &LabeledGraph) -> BTreeMap<Label, usize> {
    let mut order: Vec<Label> = h.vertices().collect();
    order.sort_by_key(|&v| (std::cmp::Reverse(h.degree(v)), v));
    fn fill(
        h: &LabeledGraph,
        order: &[Label],
        i: usize,
        k: usize,
        used: usize,
        color: &mut BTreeMap<Label, usize>,
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for c in 0..k.min(used + 1) {
            if h.neighbors(v).unwrap().iter().any(|w| color.get(w) == Some(&c)) {
                continue;
            }
            color.insert(v, c);
            if fill(h, order, i + 1, k, used.max(c + 1), color) {
                return true;
            }
            color.remove(&v);
        }
        false
    }
    for k in 1..=order.len().max(1) {
        let mut color = BTreeMap::new();
        if fill(h, &order, 0, k, 0, &mut color) {
            return color;
        }
    }
    BTreeMap::new()
}

const NONE: usize = usize::MAX;

/// Index form: H vertices are `0..c` in label order, free vertices follow in label order.
struct Context<'a> {
    inst: &'a InstancePair,
    labels: Vec<Label>,
    index: BTreeMap<Label, usize>,
    c: usize,
    adj: Vec<Vec<usize>>,
    hadj: Vec<bool>,
    gdist: Vec<u32>,
    hdist: Vec<u32>,
    color: Vec<usize>,
}

fn all_distances(n: usize, adj: &[Vec<usize>]) -> Vec<u32> {
    let mut d = vec![u32::MAX; n * n];
    let mut queue = VecDeque::new();
    for s in 0..n {
        d[s * n + s] = 0;
        queue.push_back(s);
        while let Some(x) = queue.pop_front() {
            let dx = d[s * n + x];
            for &y in &adj[x] {
                if d[s * n + y] == u32::MAX {
                    d[s * n + y] = dx + 1;
                    queue.push_back(y);
                }
            }
        }
    }
    d
}

impl<'a> Context<'a> {
    fn new(inst: &'a InstancePair, coloring: &BTreeMap<Label, usize>) -> Self {
        let mut labels: Vec<Label> = inst.h().vertices().collect();
        let c = labels.len();
        labels.extend(inst.free_vertices());
        let index: BTreeMap<Label, usize> = labels.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj: Vec<Vec<usize>> = labels
            .iter()
            .map(|&v| inst.g().neighbors(v).unwrap().iter().map(|w| index[w]).collect())
            .collect();
        let hadj_lists: Vec<Vec<usize>> = labels[..c]
            .iter()
            .map(|&v| inst.h().neighbors(v).unwrap().iter().map(|w| index[w]).collect())
            .collect();
        let mut hadj = vec![false; c * c];
        for (i, list) in hadj_lists.iter().enumerate() {
            for &j in list {
                hadj[i * c + j] = true;
            }
        }
        let gdist = all_distances(labels.len(), &adj);
        let hdist = all_distances(c, &hadj_lists);
        let color = labels[..c].iter().map(|v| coloring[v]).collect();
        Self { inst, labels, index, c, adj, hadj, gdist, hdist, color }
    }

    fn n(&self) -> usize {
        self.labels.len()
    }

    fn h_adjacent(&self, a: usize, b: usize) -> bool {
        self.hadj[a * self.c + b]
    }

    /// Classes that `x` may join given the current assignment `cls`.
    fn candidates(&self, x: usize, cls: &[usize], forbidden: &FixedBitSet) -> Vec<usize> {
        let n = self.n();
        let c = self.c;
        // Classes reachable from x through unassigned vertices.
        let mut reachable = FixedBitSet::with_capacity(c);
        let mut seen = FixedBitSet::with_capacity(n);
        seen.insert(x);
        let mut queue = VecDeque::from([x]);
        while let Some(v) = queue.pop_front() {
            for &w in &self.adj[v] {
                if cls[w] != NONE {
                    reachable.insert(cls[w]);
                } else if !seen.put(w) {
                    queue.push_back(w);
                }
            }
        }
        // Colour filter: same-coloured, non-adjacent H neighbours of x rule each other out.
        let hn: Vec<usize> = self.adj[x].iter().copied().filter(|&w| w < c).collect();
        let mut colour_clash = FixedBitSet::with_capacity(c);
        for &y1 in &hn {
            for &y2 in &hn {
                if y1 != y2 && self.color[y1] == self.color[y2] && !self.h_adjacent(y1, y2) {
                    colour_clash.insert(y1);
                }
            }
        }
        let assigned: Vec<usize> = (0..n).filter(|&w| cls[w] != NONE).collect();
        (0..c)
            .filter(|&h| !forbidden.contains(h) && reachable.contains(h) && !colour_clash.contains(h))
            .filter(|&h| {
                self.adj[x].iter().all(|&w| {
                    let d = cls[w];
                    d == NONE || d == h || self.h_adjacent(h, d)
                })
            })
            .filter(|&h| {
                assigned
                    .iter()
                    .all(|&w| self.hdist[h * c + cls[w]] <= self.gdist[x * n + w])
            })
            .collect()
    }

    fn witness(&self, cls: &[usize]) -> WitnessStructure {
        let owner: BTreeMap<Label, Label> =
            (0..self.n()).map(|v| (self.labels[v], self.labels[cls[v]])).collect();
        WitnessStructure::from_owner(&owner)
    }
}

/// Candidate classes for a free vertex `x` under a partial assignment (free vertex to class
/// representative), using `coloring` of H for the colour filter.
pub fn candidate_targets(
    x: Label,
    partial: &BTreeMap<Label, Label>,
    coloring: &BTreeMap<Label, usize>,
    inst: &InstancePair,
) -> BTreeSet<Label> {
    let ctx = Context::new(inst, coloring);
    let mut cls = vec![NONE; ctx.n()];
    for (i, slot) in cls.iter_mut().enumerate().take(ctx.c) {
        *slot = i;
    }
    for (v, r) in partial {
        cls[ctx.index[v]] = ctx.index[r];
    }
    let forbidden = FixedBitSet::with_capacity(ctx.c);
    ctx.candidates(ctx.index[&x], &cls, &forbidden)
        .into_iter()
        .map(|h| ctx.labels[h])
        .collect()
}

struct Search<'a> {
    ctx: Context<'a>,
    cfg: BranchConfig,
    budget: u64,
    limits: &'a Limits,
    cls: Vec<usize>,
    forbidden: Vec<FixedBitSet>,
    stats: BranchStats,
}

impl Search<'_> {
    fn neighbour_classes(&self, x: usize) -> FixedBitSet {
        let mut set = FixedBitSet::with_capacity(self.ctx.c);
        for &w in &self.ctx.adj[x] {
            if self.cls[w] != NONE {
                set.insert(self.cls[w]);
            }
        }
        set
    }

    fn pick(&self) -> Option<Option<usize>> {
        let free = self.ctx.c..self.ctx.n();
        let mut unassigned = free.filter(|&v| self.cls[v] == NONE).peekable();
        unassigned.peek()?;
        Some(match self.cfg.order_strategy {
            OrderStrategy::Label => unassigned.next(),
            OrderStrategy::Frontier => unassigned.find(|&v| {
                let mut open = self.neighbour_classes(v);
                open.difference_with(&self.forbidden[v]);
                !open.is_clear()
            }),
        })
    }

    fn dfs(&mut self, depth: usize) -> Result<bool, SolveError> {
        self.stats.nodes_explored += 1;
        self.stats.depth = self.stats.depth.max(depth);
        if self.stats.nodes_explored > self.budget {
            return Err(SolveError::BudgetExceeded(self.budget));
        }
        if self.stats.nodes_explored.is_multiple_of(256) && self.limits.expired() {
            return Err(SolveError::Timeout);
        }
        let x = match self.pick() {
            None => {
                let w = self.ctx.witness(&self.cls);
                return Ok(check_witness(self.ctx.inst, &w)?.is_valid());
            }
            Some(None) => return Ok(false),
            Some(Some(x)) => x,
        };
        let cands = self.ctx.candidates(x, &self.cls, &self.forbidden[x]);
        match self.cfg.order_strategy {
            OrderStrategy::Label => {
                self.stats.max_branching = self.stats.max_branching.max(cands.len());
                for h in cands {
                    self.cls[x] = h;
                    if self.dfs(depth + 1)? {
                        return Ok(true);
                    }
                }
                self.cls[x] = NONE;
            }
            OrderStrategy::Frontier => {
                let near = self.neighbour_classes(x);
                let (here, elsewhere): (Vec<usize>, Vec<usize>) =
                    cands.into_iter().partition(|&h| near.contains(h));
                let defer = !elsewhere.is_empty();
                self.stats.max_branching = self.stats.max_branching.max(here.len() + usize::from(defer));
                for h in here {
                    self.cls[x] = h;
                    if self.dfs(depth + 1)? {
                        return Ok(true);
                    }
                }
                self.cls[x] = NONE;
                if defer {
                    let saved = self.forbidden[x].clone();
                    self.forbidden[x].union_with(&near);
                    let found = self.dfs(depth + 1)?;
                    self.forbidden[x] = saved;
                    if found {
                        return Ok(true);
                    }
                }
            }
        }
        Ok(false)
    }
}

/// Branching solver with the default configuration.
pub fn solve_branch(inst: &InstancePair) -> Result<SolveResult, SolveError> {
    solve_branch_with(inst, &BranchConfig::default(), &Limits::default())
}

pub fn solve_branch_with(
    inst: &InstancePair,
    cfg: &BranchConfig,
    limits: &Limits,
) -> Result<SolveResult, SolveError> {
    let started = Instant::now();
    let coloring = match cfg.coloring_mode {
        ColoringMode::Greedy => inst.h().greedy_coloring(),
        ColoringMode::Exact => {
            if inst.h().vertex_count() > EXACT_COLORING_LIMIT {
                return Err(SolveError::Unsupported(format!(
                    "exact colouring needs |V(H)| <= {EXACT_COLORING_LIMIT}"
                )));
            }
            exact_coloring(inst.h())
        }
    };
    let mut stats = BranchStats { colors_used: colors_used(&coloring), ..Default::default() };
    if inst.has_uncoverable_component() {
        return Ok(SolveResult::finish(inst, None, started, StatDetail::Branch(stats)));
    }
    let ctx = Context::new(inst, &coloring);
    let mut cls = vec![NONE; ctx.n()];
    for (i, slot) in cls.iter_mut().enumerate().take(ctx.c) {
        *slot = i;
    }
    let forbidden = vec![FixedBitSet::with_capacity(ctx.c); ctx.n()];
    let mut search = Search {
        ctx,
        cfg: *cfg,
        budget: limits.budget.unwrap_or(cfg.node_budget),
        limits,
        cls,
        forbidden,
        stats: stats.clone(),
    };
    let found = search.dfs(0)?;
    let cert = found.then(|| search.ctx.witness(&search.cls));
    stats = search.stats;
    Ok(SolveResult::finish(inst, cert, started, StatDetail::Branch(stats)))
}

/// Registry entry for the branching solver.
#[derive(Debug, Clone, Default)]
pub struct BranchSolver {
    pub config: BranchConfig,
}

impl Solver for BranchSolver {
    fn name(&self) -> &str {
        "branch"
    }

    fn solve(&self, inst: &InstancePair, limits: &Limits) -> Result<SolveResult, SolveError> {
        solve_branch_with(inst, &self.config, limits)
    }
}
