use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{DecompositionError, TreeDecomposition};
use crate::graph::{Label, LabeledGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceKind {
    Leaf,
    IntroduceVertex(Label),
    IntroduceEdge(Label, Label),
    Forget(Label),
    Join,
}

impl fmt::Display for NiceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NiceKind::Leaf => write!(f, "leaf"),
            NiceKind::IntroduceVertex(x) => write!(f, "introduce {x}"),
            NiceKind::IntroduceEdge(u, v) => write!(f, "introduce-edge {u} {v}"),
            NiceKind::Forget(x) => write!(f, "forget {x}"),
            NiceKind::Join => write!(f, "join"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceKind,
    /// Sorted ascending.
    pub bag: Vec<Label>,
    pub children: Vec<usize>,
}

/// Nice tree decomposition. Nodes are stored in post-order, so every child precedes its parent and
/// the root is the last node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

struct Arena {
    kind: Vec<NiceKind>,
    bag: Vec<BTreeSet<Label>>,
    children: Vec<Vec<usize>>,
}

impl Arena {
    fn push(&mut self, kind: NiceKind, bag: BTreeSet<Label>, children: Vec<usize>) -> usize {
        self.kind.push(kind);
        self.bag.push(bag);
        self.children.push(children);
        self.kind.len() - 1
    }

    fn introduce(&mut self, child: usize, x: Label) -> usize {
        let mut bag = self.bag[child].clone();
        bag.insert(x);
        self.push(NiceKind::IntroduceVertex(x), bag, vec![child])
    }

    fn forget(&mut self, child: usize, x: Label) -> usize {
        let mut bag = self.bag[child].clone();
        bag.remove(&x);
        self.push(NiceKind::Forget(x), bag, vec![child])
    }
}

/// Converts a valid tree decomposition of `g` into nice form with one introduce-edge node per edge.
///
/// Each edge is introduced directly below the lower of its endpoints' forget nodes; several edges
/// under the same forget node are chained in lexicographic order, smallest lowest.
pub fn nicify(td: &TreeDecomposition, g: &LabeledGraph) -> Result<NiceTreeDecomposition, DecompositionError> {
    let report = td.validate(g);
    if !report.is_valid() {
        return Err(DecompositionError::InvalidDecomposition(report.summary()));
    }
    let (parent, bfs) = td.rooted();
    let mut tree_children = vec![Vec::new(); td.bags.len()];
    for (i, p) in parent.iter().enumerate() {
        if let Some(p) = p {
            tree_children[*p].push(i);
        }
    }
    let mut arena = Arena { kind: Vec::new(), bag: Vec::new(), children: Vec::new() };
    let mut built = vec![usize::MAX; td.bags.len()];
    for &t in bfs.iter().rev() {
        let target = &td.bags[t];
        let mut branches = Vec::new();
        if tree_children[t].is_empty() {
            let mut cur = arena.push(NiceKind::Leaf, BTreeSet::new(), vec![]);
            for &x in target {
                cur = arena.introduce(cur, x);
            }
            branches.push(cur);
        }
        for &c in &tree_children[t] {
            let mut cur = built[c];
            let gone: Vec<Label> = td.bags[c].difference(target).copied().collect();
            for x in gone {
                cur = arena.forget(cur, x);
            }
            let fresh: Vec<Label> = target.difference(&td.bags[c]).copied().collect();
            for x in fresh {
                cur = arena.introduce(cur, x);
            }
            branches.push(cur);
        }
        let mut cur = branches[0];
        for &b in &branches[1..] {
            cur = arena.push(NiceKind::Join, target.clone(), vec![cur, b]);
        }
        built[t] = cur;
    }
    let mut top = built[td.root];
    for x in td.bags[td.root].clone() {
        top = arena.forget(top, x);
    }

    // Depth of every arena node, to find the lower forget node of each edge.
    let mut depth = vec![0usize; arena.kind.len()];
    let mut stack = vec![top];
    while let Some(x) = stack.pop() {
        for &c in &arena.children[x] {
            depth[c] = depth[x] + 1;
            stack.push(c);
        }
    }
    let mut forget_of = BTreeMap::new();
    for (i, k) in arena.kind.iter().enumerate() {
        if let NiceKind::Forget(x) = k {
            forget_of.insert(*x, i);
        }
    }
    let mut edges_at: BTreeMap<usize, Vec<(Label, Label)>> = BTreeMap::new();
    for (u, v) in g.edges() {
        let (fu, fv) = (forget_of[&u], forget_of[&v]);
        let lower = if depth[fu] >= depth[fv] { fu } else { fv };
        edges_at.entry(lower).or_default().push((u, v));
    }
    for (f, edges) in edges_at {
        let mut cur = arena.children[f][0];
        for (u, v) in edges {
            let bag = arena.bag[cur].clone();
            cur = arena.push(NiceKind::IntroduceEdge(u, v), bag, vec![cur]);
        }
        arena.children[f][0] = cur;
    }

    // Post-order renumbering.
    let mut new_id = vec![usize::MAX; arena.kind.len()];
    let mut nodes = Vec::with_capacity(arena.kind.len());
    let mut stack = vec![(top, false)];
    while let Some((x, expanded)) = stack.pop() {
        if expanded {
            new_id[x] = nodes.len();
            nodes.push(NiceNode {
                kind: arena.kind[x],
                bag: arena.bag[x].iter().copied().collect(),
                children: arena.children[x].iter().map(|&c| new_id[c]).collect(),
            });
        } else {
            stack.push((x, true));
            for &c in arena.children[x].iter().rev() {
                stack.push((c, false));
            }
        }
    }
    let root = nodes.len() - 1;
    Ok(NiceTreeDecomposition { nodes, root })
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The underlying (non-nice) tree decomposition.
    pub fn to_tree_decomposition(&self) -> TreeDecomposition {
        let bags = self.nodes.iter().map(|n| n.bag.iter().copied().collect()).collect();
        let edges = self
            .nodes
            .iter()
            .enumerate()
            .flat_map(|(i, n)| n.children.iter().map(move |&c| (i, c)))
            .collect();
        TreeDecomposition { bags, edges, root: self.root }
    }

    /// Checks every structural invariant of a nice decomposition of `g`.
    pub fn check(&self, g: &LabeledGraph) -> Result<(), DecompositionError> {
        let fail = |msg: String| Err(DecompositionError::InvalidDecomposition(msg));
        if self.nodes.is_empty() || self.root != self.nodes.len() - 1 {
            return fail("root must be the last node".into());
        }
        if !self.nodes[self.root].bag.is_empty() {
            return fail("root bag is not empty".into());
        }
        let mut introduced: BTreeMap<(Label, Label), usize> = BTreeMap::new();
        for (i, node) in self.nodes.iter().enumerate() {
            if node.children.iter().any(|&c| c >= i) {
                return fail(format!("node {i} is not in post-order"));
            }
            if node.bag.windows(2).any(|w| w[0] >= w[1]) {
                return fail(format!("bag of node {i} is not sorted"));
            }
            let child_bag = |j: usize| &self.nodes[node.children[j]].bag;
            let ok = match node.kind {
                NiceKind::Leaf => node.children.is_empty() && node.bag.is_empty(),
                NiceKind::IntroduceVertex(x) => {
                    node.children.len() == 1 && {
                        let mut b = child_bag(0).clone();
                        !b.contains(&x) && {
                            b.push(x);
                            b.sort_unstable();
                            b == node.bag
                        }
                    }
                }
                NiceKind::Forget(x) => {
                    node.children.len() == 1 && {
                        let mut b = child_bag(0).clone();
                        b.contains(&x) && {
                            b.retain(|&y| y != x);
                            b == node.bag
                        }
                    }
                }
                NiceKind::IntroduceEdge(u, v) => {
                    *introduced.entry((u.min(v), u.max(v))).or_default() += 1;
                    node.children.len() == 1
                        && child_bag(0) == &node.bag
                        && node.bag.contains(&u)
                        && node.bag.contains(&v)
                        && g.has_edge(u, v)
                }
                NiceKind::Join => {
                    node.children.len() == 2 && child_bag(0) == &node.bag && child_bag(1) == &node.bag
                }
            };
            if !ok {
                return fail(format!("node {i} ({}) is malformed", node.kind));
            }
        }
        for e in g.edges() {
            if introduced.get(&e) != Some(&1) {
                return fail(format!("edge ({}, {}) is not introduced exactly once", e.0, e.1));
            }
        }
        let report = self.to_tree_decomposition().validate(g);
        if !report.is_valid() {
            return fail(report.summary());
        }
        Ok(())
    }
}
