//! Dynamic programming over a nice tree decomposition of the union graph G ∪ H.
//!
//! Tables are filled bottom-up; an instance is a YES instance exactly when the root table holds
//! the empty signature. A witness is rebuilt by following provenance links down from the root and
//! collecting the edges that were used to grow classes.

pub mod signature;
pub mod transitions;

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;

use super::{Limits, SolveError, SolveResult, Solver, StatDetail};
use crate::decomposition::{heuristic_decompose, nicify, NiceKind, NiceTreeDecomposition, TreeDecomposition};
use crate::graph::{union_graph, InstancePair, Label, WitnessStructure};

pub use signature::{DpContext, PairLevel, Parent, Signature, Slot};
pub use transitions::{
    join_signatures, transition_forget, transition_introduce_edge, transition_introduce_vertex,
    transition_join, transition_leaf, DpTable, Provenance,
};

/// Upper bound on the total number of table entries before giving up.
pub const DEFAULT_TABLE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct TwdpStats {
    pub nodes: usize,
    pub width: usize,
    pub max_table: usize,
    pub total_entries: u64,
    /// Table size per nice node, in node order.
    pub table_sizes: Vec<usize>,
}

/// Called once per processed node with the node id, its kind and its sorted rendered entries.
pub type TraceFn<'a> = dyn FnMut(usize, &NiceKind, Vec<String>) + 'a;

/// Runs the DP on a caller-supplied nice decomposition of the union graph.
pub fn solve_twdp(
    inst: &InstancePair,
    ntd: &NiceTreeDecomposition,
    limits: &Limits,
    mut trace: Option<&mut TraceFn<'_>>,
) -> Result<SolveResult, SolveError> {
    let started = Instant::now();
    let union = union_graph(inst);
    ntd.check(&union).map_err(|e| SolveError::InvalidDecomposition(e.to_string()))?;
    let mut stats = TwdpStats { nodes: ntd.len(), width: ntd.width(), ..Default::default() };
    if inst.has_uncoverable_component() {
        return Ok(SolveResult::finish(inst, None, started, StatDetail::Twdp(stats)));
    }
    let budget = limits.budget.unwrap_or(DEFAULT_TABLE_BUDGET);
    let ctx = DpContext { h: inst.h() };
    let mut tables: Vec<DpTable> = Vec::with_capacity(ntd.len());
    for (i, node) in ntd.nodes.iter().enumerate() {
        if limits.expired() {
            return Err(SolveError::Timeout);
        }
        let mut t = match node.kind {
            NiceKind::Leaf => transition_leaf(),
            NiceKind::IntroduceVertex(x) => transition_introduce_vertex(&ctx, &tables[node.children[0]], x),
            NiceKind::IntroduceEdge(u, v) => {
                let child = &tables[node.children[0]];
                if inst.g().has_edge(u, v) {
                    transition_introduce_edge(&ctx, child, u, v)
                } else {
                    // An H-only edge constrains nothing on its own.
                    identity(child)
                }
            }
            NiceKind::Forget(x) => transition_forget(&ctx, &tables[node.children[0]], x),
            NiceKind::Join => {
                transition_join(&ctx, &tables[node.children[0]], &tables[node.children[1]], &|| limits.expired())
                    .ok_or(SolveError::Timeout)?
            }
        };
        t.node = i;
        stats.max_table = stats.max_table.max(t.len());
        stats.total_entries += t.len() as u64;
        stats.table_sizes.push(t.len());
        if stats.total_entries > budget {
            return Err(SolveError::BudgetExceeded(budget));
        }
        if let Some(f) = trace.as_mut() {
            f(i, &node.kind, t.sorted().into_iter().map(|s| s.render(&ctx)).collect());
        }
        tables.push(t);
    }
    let root = &tables[ntd.root];
    let cert = match root.entries.get_index_of(&signature::Signature::default()) {
        Some(idx) => Some(reconstruct(inst, ntd, &tables, idx)?),
        None => None,
    };
    Ok(SolveResult::finish(inst, cert, started, StatDetail::Twdp(stats)))
}

fn identity(child: &DpTable) -> DpTable {
    DpTable {
        node: child.node,
        bag: child.bag.clone(),
        entries: (0..child.len())
            .map(|i| (child.entries.get_index(i).unwrap().0.clone(), Provenance::From { child: i, tree_edge: None }))
            .collect(),
    }
}

fn reconstruct(
    inst: &InstancePair,
    ntd: &NiceTreeDecomposition,
    tables: &[DpTable],
    root_entry: usize,
) -> Result<WitnessStructure, SolveError> {
    let internal = |m: &str| SolveError::Internal(format!("witness reconstruction: {m}"));
    let mut tree_edges: Vec<(Label, Label)> = Vec::new();
    let mut stack = vec![(ntd.root, root_entry)];
    while let Some((node, idx)) = stack.pop() {
        let (_, prov) = tables[node].entries.get_index(idx).ok_or_else(|| internal("dangling entry"))?;
        let children = &ntd.nodes[node].children;
        match *prov {
            Provenance::Leaf => {}
            Provenance::From { child, tree_edge } => {
                tree_edges.extend(tree_edge);
                stack.push((children[0], child));
            }
            Provenance::Joined { left, right } => {
                stack.push((children[0], left));
                stack.push((children[1], right));
            }
        }
    }
    let verts: Vec<Label> = inst.g().vertices().collect();
    let index: BTreeMap<Label, usize> = verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut parent: Vec<usize> = (0..verts.len()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (u, v) in tree_edges {
        let (a, b) = (find(&mut parent, index[&u]), find(&mut parent, index[&v]));
        if a == b {
            return Err(internal("tree edges contain a cycle"));
        }
        parent[a] = b;
    }
    let mut anchor: BTreeMap<usize, Label> = BTreeMap::new();
    for h in inst.h().vertices() {
        let r = find(&mut parent, index[&h]);
        if anchor.insert(r, h).is_some() {
            return Err(internal("two H vertices in one class"));
        }
    }
    let mut owner = BTreeMap::new();
    for (i, &v) in verts.iter().enumerate() {
        let r = find(&mut parent, i);
        owner.insert(v, *anchor.get(&r).ok_or_else(|| internal("vertex without a class"))?);
    }
    Ok(WitnessStructure::from_owner(&owner))
}

/// Registry entry for the decomposition-based solver. Without an explicit decomposition a min-fill
/// heuristic decomposition of the union graph is used.
#[derive(Debug, Clone, Default)]
pub struct TwdpSolver {
    pub decomposition: Option<TreeDecomposition>,
}

impl TwdpSolver {
    pub fn with_decomposition(td: TreeDecomposition) -> Self {
        Self { decomposition: Some(td) }
    }

    /// Nice decomposition this solver would run on for `inst`.
    pub fn nice_decomposition(&self, inst: &InstancePair) -> Result<NiceTreeDecomposition, SolveError> {
        let union = union_graph(inst);
        let td = match &self.decomposition {
            Some(td) => td.clone(),
            None => heuristic_decompose(&union),
        };
        let report = td.validate(&union);
        if !report.is_valid() {
            return Err(SolveError::InvalidDecomposition(report.summary()));
        }
        nicify(&td, &union).map_err(|e| SolveError::InvalidDecomposition(e.to_string()))
    }

    pub fn solve_traced(
        &self,
        inst: &InstancePair,
        limits: &Limits,
        trace: Option<&mut TraceFn<'_>>,
    ) -> Result<SolveResult, SolveError> {
        let ntd = self.nice_decomposition(inst)?;
        solve_twdp(inst, &ntd, limits, trace)
    }
}

impl Solver for TwdpSolver {
    fn name(&self) -> &str {
        "twdp"
    }

    fn solve(&self, inst: &InstancePair, limits: &Limits) -> Result<SolveResult, SolveError> {
        self.solve_traced(inst, limits, None)
    }
}
