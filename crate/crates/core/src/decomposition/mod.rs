//! Tree decompositions: validation, a min-fill heuristic, nice form, and PACE `.td` I/O.

mod heuristic;
mod nice;
mod pace;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::graph::{Label, LabeledGraph};

pub use heuristic::heuristic_decompose;
pub use nice::{nicify, NiceKind, NiceNode, NiceTreeDecomposition};
pub use pace::{parse_td, write_td};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
}

/// A tree over node ids `0..bags.len()` with one bag per node, rooted at `root`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub bags: Vec<BTreeSet<Label>>,
    pub edges: Vec<(usize, usize)>,
    pub root: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdProblem {
    NoBags,
    BadNodeId(usize),
    NotATree,
    UnknownVertex(Label),
    VertexUncovered(Label),
    EdgeUncovered(Label, Label),
    DisconnectedOccurrence(Label),
}

impl fmt::Display for TdProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdProblem::NoBags => write!(f, "decomposition has no bags"),
            TdProblem::BadNodeId(i) => write!(f, "tree edge references missing node {i}"),
            TdProblem::NotATree => write!(f, "decomposition tree is not a tree"),
            TdProblem::UnknownVertex(v) => write!(f, "bag contains unknown vertex {v}"),
            TdProblem::VertexUncovered(v) => write!(f, "vertex {v} is in no bag"),
            TdProblem::EdgeUncovered(u, v) => write!(f, "edge ({u}, {v}) is in no bag"),
            TdProblem::DisconnectedOccurrence(v) => {
                write!(f, "bags containing {v} do not form a subtree")
            }
        }
    }
}

/// Result of [`TreeDecomposition::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TdReport {
    pub width: usize,
    pub problems: Vec<TdProblem>,
}

impl TdReport {
    pub fn is_valid(&self) -> bool {
        self.problems.is_empty()
    }

    pub fn summary(&self) -> String {
        self.problems.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
    }
}

impl TreeDecomposition {
    pub fn new(bags: Vec<BTreeSet<Label>>, edges: Vec<(usize, usize)>) -> Self {
        Self { bags, edges, root: 0 }
    }

    /// One bag holding every vertex.
    pub fn single_bag(g: &LabeledGraph) -> Self {
        Self::new(vec![g.vertex_set()], vec![])
    }

    pub fn max_bag_size(&self) -> usize {
        self.bags.iter().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// Largest bag size minus one (zero for decompositions of empty or edgeless bags).
    pub fn width(&self) -> usize {
        self.max_bag_size().saturating_sub(1)
    }

    fn tree_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(a, b) in &self.edges {
            if a < adj.len() && b < adj.len() {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        adj
    }

    /// Parent pointers from a BFS at the root, and the BFS order.
    pub(crate) fn rooted(&self) -> (Vec<Option<usize>>, Vec<usize>) {
        let adj = self.tree_adjacency();
        let mut parent = vec![None; self.bags.len()];
        let mut seen = vec![false; self.bags.len()];
        let mut order = Vec::with_capacity(self.bags.len());
        if self.bags.is_empty() {
            return (parent, order);
        }
        seen[self.root] = true;
        let mut queue = VecDeque::from([self.root]);
        while let Some(x) = queue.pop_front() {
            order.push(x);
            for &y in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        (parent, order)
    }

    /// Checks that this is a tree decomposition of `g`.
    pub fn validate(&self, g: &LabeledGraph) -> TdReport {
        let mut problems = Vec::new();
        let n = self.bags.len();
        if n == 0 {
            problems.push(TdProblem::NoBags);
            return TdReport { width: 0, problems };
        }
        for &(a, b) in &self.edges {
            for x in [a, b] {
                if x >= n {
                    problems.push(TdProblem::BadNodeId(x));
                }
            }
        }
        let (_, order) = self.rooted();
        let distinct: BTreeSet<(usize, usize)> =
            self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        let self_loop = self.edges.iter().any(|&(a, b)| a == b);
        if self.root >= n || self.edges.len() != n - 1 || distinct.len() != n - 1 || self_loop || order.len() != n
        {
            problems.push(TdProblem::NotATree);
        }
        let mut occurrences: BTreeMap<Label, Vec<usize>> = BTreeMap::new();
        for (i, bag) in self.bags.iter().enumerate() {
            for &v in bag {
                if !g.has_vertex(v) {
                    problems.push(TdProblem::UnknownVertex(v));
                }
                occurrences.entry(v).or_default().push(i);
            }
        }
        for v in g.vertices() {
            if !occurrences.contains_key(&v) {
                problems.push(TdProblem::VertexUncovered(v));
            }
        }
        for (u, v) in g.edges() {
            if !self.bags.iter().any(|b| b.contains(&u) && b.contains(&v)) {
                problems.push(TdProblem::EdgeUncovered(u, v));
            }
        }
        if !problems.contains(&TdProblem::NotATree) {
            let adj = self.tree_adjacency();
            for (&v, nodes) in &occurrences {
                let set: BTreeSet<usize> = nodes.iter().copied().collect();
                let mut seen = BTreeSet::from([nodes[0]]);
                let mut queue = VecDeque::from([nodes[0]]);
                while let Some(x) = queue.pop_front() {
                    for &y in &adj[x] {
                        if set.contains(&y) && seen.insert(y) {
                            queue.push_back(y);
                        }
                    }
                }
                if seen.len() != set.len() {
                    problems.push(TdProblem::DisconnectedOccurrence(v));
                }
            }
        }
        problems.dedup();
        TdReport { width: self.width(), problems }
    }

    /// A redundant but valid variant: every node gets an extra leaf child carrying a copy of its bag.
    pub fn with_duplicated_bags(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.bags.len() {
            out.bags.push(self.bags[i].clone());
            out.edges.push((i, out.bags.len() - 1));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: &[Label], e: &[(Label, Label)]) -> LabeledGraph {
        LabeledGraph::from_edges(n.iter().copied(), e.iter().copied()).unwrap()
    }

    fn bag(v: &[Label]) -> BTreeSet<Label> {
        v.iter().copied().collect()
    }

    #[test]
    fn validate_examples() {
        let p3 = graph(&[1, 2, 3], &[(1, 2), (2, 3)]);
        let td = TreeDecomposition::new(vec![bag(&[1, 2]), bag(&[2, 3])], vec![(0, 1)]);
        let r = td.validate(&p3);
        assert!(r.is_valid());
        assert_eq!(r.width, 1);

        let k3 = graph(&[1, 2, 3], &[(1, 2), (2, 3), (1, 3)]);
        let r = TreeDecomposition::single_bag(&k3).validate(&k3);
        assert!(r.is_valid());
        assert_eq!(r.width, 2);

        let td = TreeDecomposition::new(vec![bag(&[1, 2]), bag(&[3])], vec![(0, 1)]);
        let r = td.validate(&p3);
        assert_eq!(r.problems, vec![TdProblem::EdgeUncovered(2, 3)]);
    }

    #[test]
    fn validate_detects_broken_subtree_and_tree() {
        let p3 = graph(&[1, 2, 3], &[(1, 2), (2, 3)]);
        let td = TreeDecomposition::new(
            vec![bag(&[1, 2]), bag(&[3]), bag(&[2, 3])],
            vec![(0, 1), (1, 2)],
        );
        assert_eq!(td.validate(&p3).problems, vec![TdProblem::DisconnectedOccurrence(2)]);
        let td = TreeDecomposition::new(vec![bag(&[1, 2]), bag(&[2, 3])], vec![]);
        assert!(td.validate(&p3).problems.contains(&TdProblem::NotATree));
        let td = TreeDecomposition::new(vec![bag(&[1, 2, 3, 9])], vec![]);
        assert_eq!(td.validate(&p3).problems, vec![TdProblem::UnknownVertex(9)]);
    }

    #[test]
    fn duplicated_bags_stay_valid() {
        let p3 = graph(&[1, 2, 3], &[(1, 2), (2, 3)]);
        let td = TreeDecomposition::new(vec![bag(&[1, 2]), bag(&[2, 3])], vec![(0, 1)]);
        let dup = td.with_duplicated_bags();
        assert_eq!(dup.bags.len(), 4);
        let r = dup.validate(&p3);
        assert!(r.is_valid());
        assert_eq!(r.width, 1);
    }
}
