//! Uniquely labeled simple graphs, labeled edge contraction and witness structures.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

/// Vertex label. Labels are stable across contractions and need not be contiguous.
pub type Label = u32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex label {0}")]
    UnknownLabel(Label),
    #[error("({0}, {1}) is not an edge")]
    NonEdge(Label, Label),
    #[error("self-loop on vertex {0}")]
    SelfLoop(Label),
    #[error("contraction step {index} ({u}, {v}) is not an edge of the current graph")]
    InvalidStep { index: usize, u: Label, v: Label },
    #[error("vertex {0} of H is not a vertex of G")]
    NotSubset(Label),
    #[error("witness classes do not partition V(G): {0}")]
    NotAPartition(String),
    #[error("witness representatives do not match V(H): {0}")]
    RepresentativeMismatch(String),
    #[error("witness class of {0} does not induce a connected subgraph")]
    DisconnectedClass(Label),
    #[error("the contraction sequence does not produce H")]
    NotAContractionToH,
}

/// Simple undirected graph keyed by label.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    adj: BTreeMap<Label, BTreeSet<Label>>,
}

impl LabeledGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_vertices<I: IntoIterator<Item = Label>>(vertices: I) -> Self {
        let mut g = Self::new();
        for v in vertices {
            g.add_vertex(v);
        }
        g
    }

    /// Builds a graph from a vertex list and an edge list. Edge endpoints must be listed vertices.
    pub fn from_edges<V, E>(vertices: V, edges: E) -> Result<Self, GraphError>
    where
        V: IntoIterator<Item = Label>,
        E: IntoIterator<Item = (Label, Label)>,
    {
        let mut g = Self::with_vertices(vertices);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Returns false if the vertex was already present.
    pub fn add_vertex(&mut self, v: Label) -> bool {
        if self.adj.contains_key(&v) {
            return false;
        }
        self.adj.insert(v, BTreeSet::new());
        true
    }

    /// Returns false if the edge was already present.
    pub fn add_edge(&mut self, u: Label, v: Label) -> Result<bool, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        for x in [u, v] {
            if !self.adj.contains_key(&x) {
                return Err(GraphError::UnknownLabel(x));
            }
        }
        let fresh = self.adj.get_mut(&u).unwrap().insert(v);
        self.adj.get_mut(&v).unwrap().insert(u);
        Ok(fresh)
    }

    /// Like [`add_edge`](Self::add_edge), but inserts missing endpoints first.
    pub fn connect(&mut self, u: Label, v: Label) -> Result<bool, GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.add_vertex(u);
        self.add_vertex(v);
        self.add_edge(u, v)
    }

    pub fn remove_edge(&mut self, u: Label, v: Label) -> bool {
        let removed = self.adj.get_mut(&u).is_some_and(|n| n.remove(&v));
        if removed {
            self.adj.get_mut(&v).unwrap().remove(&u);
        }
        removed
    }

    pub fn remove_vertex(&mut self, v: Label) -> bool {
        let Some(nbrs) = self.adj.remove(&v) else {
            return false;
        };
        for w in nbrs {
            self.adj.get_mut(&w).unwrap().remove(&v);
        }
        true
    }

    pub fn has_vertex(&self, v: Label) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: Label, v: Label) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains(&v))
    }

    pub fn neighbors(&self, v: Label) -> Option<&BTreeSet<Label>> {
        self.adj.get(&v)
    }

    pub fn degree(&self, v: Label) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// Vertices in ascending label order.
    pub fn vertices(&self) -> impl Iterator<Item = Label> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<Label> {
        self.adj.keys().copied().collect()
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(Label, Label)> {
        self.adj
            .iter()
            .flat_map(|(&u, n)| n.range(u + 1..).map(move |&v| (u, v)))
            .collect()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Whether `set` is non-empty and induces a connected subgraph.
    pub fn is_connected_subset(&self, set: &BTreeSet<Label>) -> bool {
        let Some(&start) = set.iter().next() else {
            return false;
        };
        let mut seen = BTreeSet::from([start]);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &y in self.adj.get(&x).into_iter().flatten() {
                if set.contains(&y) && seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.len() == set.len()
    }

    /// Connected components, each as a label set, ordered by smallest member.
    pub fn components(&self) -> Vec<BTreeSet<Label>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for &s in self.adj.keys() {
            if seen.contains(&s) {
                continue;
            }
            let mut comp = BTreeSet::from([s]);
            seen.insert(s);
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &y in &self.adj[&x] {
                    if seen.insert(y) {
                        comp.insert(y);
                        queue.push_back(y);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// BFS distances from `source` to every reachable vertex.
    pub fn distances_from(&self, source: Label) -> BTreeMap<Label, usize> {
        let mut dist = BTreeMap::new();
        if !self.has_vertex(source) {
            return dist;
        }
        dist.insert(source, 0);
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            let d = dist[&x];
            for &y in &self.adj[&x] {
                if let std::collections::btree_map::Entry::Vacant(e) = dist.entry(y) {
                    e.insert(d + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Labeled contraction G/(u,v): `v` is removed and `u` inherits `N(v) \ N[u]`.
    pub fn contract_edge(&self, u: Label, v: Label) -> Result<LabeledGraph, GraphError> {
        for x in [u, v] {
            if !self.has_vertex(x) {
                return Err(GraphError::UnknownLabel(x));
            }
        }
        if !self.has_edge(u, v) {
            return Err(GraphError::NonEdge(u, v));
        }
        let mut g = self.clone();
        let inherited: Vec<Label> = self.adj[&v].iter().copied().filter(|&w| w != u).collect();
        g.remove_vertex(v);
        for w in inherited {
            g.add_edge(u, w).expect("both endpoints present");
        }
        Ok(g)
    }

    /// Degeneracy and the min-degree removal order (ties broken by smallest label).
    ///
    /// Every vertex has at most `d` neighbours that come after it in the order.
    pub fn degeneracy(&self) -> (usize, Vec<Label>) {
        let mut deg: BTreeMap<Label, usize> =
            self.adj.iter().map(|(&v, n)| (v, n.len())).collect();
        let mut queue: BTreeSet<(usize, Label)> = deg.iter().map(|(&v, &d)| (d, v)).collect();
        let mut removed = BTreeSet::new();
        let mut order = Vec::with_capacity(self.adj.len());
        let mut best = 0;
        while let Some((d, v)) = queue.pop_first() {
            best = best.max(d);
            order.push(v);
            removed.insert(v);
            for &w in &self.adj[&v] {
                if removed.contains(&w) {
                    continue;
                }
                let dw = deg[&w];
                queue.remove(&(dw, w));
                deg.insert(w, dw - 1);
                queue.insert((dw - 1, w));
            }
        }
        (best, order)
    }

    /// Greedy colouring along the reversed degeneracy order; uses at most `d + 1` colours.
    pub fn greedy_coloring(&self) -> BTreeMap<Label, usize> {
        let (_, order) = self.degeneracy();
        let mut color = BTreeMap::new();
        for &v in order.iter().rev() {
            let used: BTreeSet<usize> =
                self.adj[&v].iter().filter_map(|w| color.get(w).copied()).collect();
            let c = (0..).find(|c| !used.contains(c)).unwrap();
            color.insert(v, c);
        }
        color
    }
}

/// Number of distinct colours in a colouring.
pub fn colors_used(coloring: &BTreeMap<Label, usize>) -> usize {
    coloring.values().collect::<BTreeSet<_>>().len()
}

pub fn is_proper_coloring(g: &LabeledGraph, coloring: &BTreeMap<Label, usize>) -> bool {
    g.vertices().all(|v| coloring.contains_key(&v))
        && g.edges().iter().all(|(u, v)| coloring[u] != coloring[v])
}

/// A problem input: graphs `g` and `h` with `V(h) ⊆ V(g)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstancePair {
    g: LabeledGraph,
    h: LabeledGraph,
}

impl InstancePair {
    pub fn new(g: LabeledGraph, h: LabeledGraph) -> Result<Self, GraphError> {
        if let Some(v) = h.vertices().find(|&v| !g.has_vertex(v)) {
            return Err(GraphError::NotSubset(v));
        }
        Ok(Self { g, h })
    }

    pub fn g(&self) -> &LabeledGraph {
        &self.g
    }

    pub fn h(&self) -> &LabeledGraph {
        &self.h
    }

    /// Number of contractions any solution uses: `|V(G)| - |V(H)|`.
    pub fn k(&self) -> usize {
        self.g.vertex_count() - self.h.vertex_count()
    }

    /// Vertices of G that are not in H, ascending.
    pub fn free_vertices(&self) -> Vec<Label> {
        self.g.vertices().filter(|&v| !self.h.has_vertex(v)).collect()
    }

    /// True if some component of G contains no vertex of H. Such instances are NO.
    pub fn has_uncoverable_component(&self) -> bool {
        self.g
            .components()
            .iter()
            .any(|c| c.iter().all(|&v| !self.h.has_vertex(v)))
    }
}

/// Ordered list of `(keep, remove)` contractions.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ContractionSequence {
    pub pairs: Vec<(Label, Label)>,
}

impl ContractionSequence {
    pub fn new(pairs: Vec<(Label, Label)>) -> Self {
        Self { pairs }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Folds labeled contraction over `s`, failing at the first step that is not an edge.
pub fn apply_sequence(g: &LabeledGraph, s: &ContractionSequence) -> Result<LabeledGraph, GraphError> {
    let mut cur = g.clone();
    for (index, &(u, v)) in s.pairs.iter().enumerate() {
        cur = cur
            .contract_edge(u, v)
            .map_err(|_| GraphError::InvalidStep { index, u, v })?;
    }
    Ok(cur)
}

/// Partition of V(G) into classes keyed by their H vertex.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WitnessStructure {
    pub classes: BTreeMap<Label, BTreeSet<Label>>,
}

impl WitnessStructure {
    pub fn new(classes: BTreeMap<Label, BTreeSet<Label>>) -> Self {
        Self { classes }
    }

    /// Every H vertex alone in its class.
    pub fn singletons(h: &LabeledGraph) -> Self {
        Self::new(h.vertices().map(|v| (v, BTreeSet::from([v]))).collect())
    }

    /// Builds classes from a map of each vertex to its representative.
    pub fn from_owner(owner: &BTreeMap<Label, Label>) -> Self {
        let mut classes: BTreeMap<Label, BTreeSet<Label>> = BTreeMap::new();
        for (&v, &r) in owner {
            classes.entry(r).or_default().insert(v);
        }
        Self::new(classes)
    }

    /// Map from each member to its representative.
    pub fn owner(&self) -> BTreeMap<Label, Label> {
        self.classes
            .iter()
            .flat_map(|(&r, members)| members.iter().map(move |&m| (m, r)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Violation {
    DisconnectedClass(Label),
    MissingEdge(Label, Label),
    ExtraAdjacency(Label, Label),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DisconnectedClass(r) => write!(f, "class {r} is not connected"),
            Violation::MissingEdge(a, b) => {
                write!(f, "classes {a} and {b} are not adjacent but ({a}, {b}) is an edge of H")
            }
            Violation::ExtraAdjacency(a, b) => {
                write!(f, "classes {a} and {b} are adjacent but ({a}, {b}) is not an edge of H")
            }
        }
    }
}

/// Outcome of checking a witness structure; lists every violated constraint.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidityReport {
    pub violations: Vec<Violation>,
}

impl ValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks a witness structure against an instance.
///
/// Structural problems (wrong keys, overlapping or missing members) are errors; connectivity and
/// adjacency problems are reported as violations.
pub fn check_witness(inst: &InstancePair, w: &WitnessStructure) -> Result<ValidityReport, GraphError> {
    let (g, h) = (inst.g(), inst.h());
    let keys: BTreeSet<Label> = w.classes.keys().copied().collect();
    if keys != h.vertex_set() {
        return Err(GraphError::RepresentativeMismatch(format!(
            "keys {:?} differ from V(H) {:?}",
            keys,
            h.vertex_set()
        )));
    }
    let mut owner: BTreeMap<Label, Label> = BTreeMap::new();
    for (&r, members) in &w.classes {
        if !members.contains(&r) {
            return Err(GraphError::RepresentativeMismatch(format!(
                "class {r} does not contain its representative"
            )));
        }
        for &m in members {
            if !g.has_vertex(m) {
                return Err(GraphError::NotAPartition(format!("{m} is not a vertex of G")));
            }
            if m != r && h.has_vertex(m) {
                return Err(GraphError::RepresentativeMismatch(format!(
                    "class {r} contains a second H vertex {m}"
                )));
            }
            if let Some(prev) = owner.insert(m, r) {
                return Err(GraphError::NotAPartition(format!(
                    "{m} belongs to classes {prev} and {r}"
                )));
            }
        }
    }
    if let Some(v) = g.vertices().find(|v| !owner.contains_key(v)) {
        return Err(GraphError::NotAPartition(format!("{v} is in no class")));
    }

    let mut violations = Vec::new();
    for (&r, members) in &w.classes {
        if !g.is_connected_subset(members) {
            violations.push(Violation::DisconnectedClass(r));
        }
    }
    let mut adjacent = BTreeSet::new();
    for (a, b) in g.edges() {
        let (ra, rb) = (owner[&a], owner[&b]);
        if ra != rb {
            adjacent.insert((ra.min(rb), ra.max(rb)));
        }
    }
    for (a, b) in h.edges() {
        if !adjacent.contains(&(a, b)) {
            violations.push(Violation::MissingEdge(a, b));
        }
    }
    for &(a, b) in &adjacent {
        if !h.has_edge(a, b) {
            violations.push(Violation::ExtraAdjacency(a, b));
        }
    }
    violations.sort();
    Ok(ValidityReport { violations })
}

/// Contraction sequence realizing a witness structure: per class (ascending representative), a BFS
/// spanning tree from the representative, contracted leaf-first.
pub fn witness_to_sequence(
    w: &WitnessStructure,
    g: &LabeledGraph,
) -> Result<ContractionSequence, GraphError> {
    let mut pairs = Vec::new();
    for (&r, members) in &w.classes {
        let mut parent = BTreeMap::new();
        let mut order = Vec::new();
        let mut seen = BTreeSet::from([r]);
        let mut queue = VecDeque::from([r]);
        while let Some(x) = queue.pop_front() {
            for &y in g.neighbors(x).ok_or(GraphError::UnknownLabel(x))? {
                if members.contains(&y) && seen.insert(y) {
                    parent.insert(y, x);
                    order.push(y);
                    queue.push_back(y);
                }
            }
        }
        if seen.len() != members.len() {
            return Err(GraphError::DisconnectedClass(r));
        }
        pairs.extend(order.iter().rev().map(|&y| (parent[&y], y)));
    }
    Ok(ContractionSequence::new(pairs))
}

/// Witness structure of a sequence that contracts G to H: each removed vertex joins the class of
/// its surviving keep-chain ancestor.
pub fn sequence_to_witness(
    inst: &InstancePair,
    s: &ContractionSequence,
) -> Result<WitnessStructure, GraphError> {
    let result = apply_sequence(inst.g(), s)?;
    if &result != inst.h() {
        return Err(GraphError::NotAContractionToH);
    }
    let absorbed: BTreeMap<Label, Label> = s.pairs.iter().map(|&(u, v)| (v, u)).collect();
    let owner: BTreeMap<Label, Label> = inst
        .g()
        .vertices()
        .map(|v| {
            let mut r = v;
            while let Some(&up) = absorbed.get(&r) {
                r = up;
            }
            (v, r)
        })
        .collect();
    Ok(WitnessStructure::from_owner(&owner))
}

/// The graph on V(G) with edge set E(G) ∪ E(H).
pub fn union_graph(inst: &InstancePair) -> LabeledGraph {
    let mut u = inst.g().clone();
    for (a, b) in inst.h().edges() {
        u.add_edge(a, b).expect("V(H) is a subset of V(G)");
    }
    u
}
