//! Sub-cubic partitioned vertex cover.
//!
//! Text format (`#` starts a comment); parts are listed in order, budgets in the same order:
//!
//! ```text
//! p pvc
//! part 1 2
//! part 3
//! budget 1 0
//! e 1 3
//! ```
//!
//! With base = the largest label of G and parts C_1..C_t, the new labels are x_i = base + 3i - 2,
//! y_i = base + 3i - 1, z_i = base + 3i, followed by the subset vertices of S_1, S_2, ... Each S_i
//! lists the (k_i + 1)-subsets of C_i in lexicographic order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::ReductionError;
use crate::graph::{InstancePair, Label, LabeledGraph, WitnessStructure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PvcInstance {
    pub graph: LabeledGraph,
    pub parts: Vec<BTreeSet<Label>>,
    pub budgets: Vec<usize>,
}

/// Labels of the gadget built for one part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartGadget {
    pub x: Label,
    pub y: Label,
    pub z: Label,
    /// Subset vertex and the subset of the part it stands for.
    pub subsets: Vec<(Label, Vec<Label>)>,
}

fn combinations(items: &[Label], k: usize) -> Vec<Vec<Label>> {
    let mut out = Vec::new();
    if k > items.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + items.len() - k) else {
            return out;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

impl PvcInstance {
    pub fn new(graph: LabeledGraph, parts: Vec<BTreeSet<Label>>, budgets: Vec<usize>) -> Result<Self, ReductionError> {
        let bad = |m: String| Err(ReductionError::InvalidPartition(m));
        if parts.is_empty() {
            return bad("no parts".into());
        }
        if parts.len() != budgets.len() {
            return bad(format!("{} parts but {} budgets", parts.len(), budgets.len()));
        }
        if graph.max_degree() > 3 {
            return bad(format!("maximum degree {} exceeds 3", graph.max_degree()));
        }
        let mut owner = BTreeMap::new();
        for (i, part) in parts.iter().enumerate() {
            if part.is_empty() {
                return bad(format!("part {} is empty", i + 1));
            }
            for &v in part {
                if !graph.has_vertex(v) {
                    return bad(format!("vertex {v} of part {} is not in the graph", i + 1));
                }
                if owner.insert(v, i).is_some() {
                    return bad(format!("vertex {v} is in two parts"));
                }
            }
        }
        if owner.len() != graph.vertex_count() {
            return bad("parts do not cover every vertex".into());
        }
        let mut between: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (u, v) in graph.edges() {
            let (a, b) = (owner[&u], owner[&v]);
            if a == b {
                return bad(format!("part {} is not independent: edge ({u}, {v})", a + 1));
            }
            *between.entry((a.min(b), a.max(b))).or_default() += 1;
        }
        for a in 0..parts.len() {
            for b in a + 1..parts.len() {
                let c = between.get(&(a, b)).copied().unwrap_or(0);
                if c != 1 {
                    return bad(format!("parts {} and {} share {c} edges, expected 1", a + 1, b + 1));
                }
            }
        }
        Ok(Self { graph, parts, budgets })
    }

    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let err = |line: usize, message: String| ReductionError::Parse { line, message };
        let mut seen_header = false;
        let mut parts = Vec::new();
        let mut budgets: Option<Vec<usize>> = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let t = raw.split('#').next().unwrap().trim();
            if t.is_empty() {
                continue;
            }
            let mut toks = t.split_whitespace();
            let key = toks.next().unwrap();
            if key == "p" {
                if toks.next() != Some("pvc") || seen_header {
                    return Err(err(line, "expected a single `p pvc` header".into()));
                }
                seen_header = true;
                continue;
            }
            if !seen_header {
                return Err(err(line, "expected `p pvc` header".into()));
            }
            let nums: Vec<Label> = toks
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| err(line, format!("bad number in `{t}`")))?;
            match key {
                "part" => parts.push(nums.into_iter().collect::<BTreeSet<_>>()),
                "budget" if budgets.is_none() => budgets = Some(nums.into_iter().map(|k| k as usize).collect()),
                "e" if nums.len() == 2 => edges.push((nums[0], nums[1])),
                _ => return Err(err(line, format!("unrecognised line `{t}`"))),
            }
        }
        if !seen_header {
            return Err(err(0, "empty input".into()));
        }
        let budgets = budgets.ok_or_else(|| err(0, "missing budget line".into()))?;
        let mut g = LabeledGraph::with_vertices(parts.iter().flatten().copied());
        for (u, v) in edges {
            if !g.has_vertex(u) || !g.has_vertex(v) {
                return Err(ReductionError::InvalidPartition(format!("edge ({u}, {v}) uses an unlisted vertex")));
            }
            g.add_edge(u, v)?;
        }
        Self::new(g, parts, budgets)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("p pvc\n");
        for part in &self.parts {
            let list: Vec<String> = part.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(s, "part {}", list.join(" "));
        }
        let b: Vec<String> = self.budgets.iter().map(|k| k.to_string()).collect();
        let _ = writeln!(s, "budget {}", b.join(" "));
        for (u, v) in self.graph.edges() {
            let _ = writeln!(s, "e {u} {v}");
        }
        s
    }

    /// Gadget labels for every part, in part order.
    pub fn gadgets(&self) -> Vec<PartGadget> {
        let base = self.graph.vertices().max().unwrap_or(0);
        let t = self.parts.len() as Label;
        let mut next = base + 3 * t;
        self.parts
            .iter()
            .zip(&self.budgets)
            .enumerate()
            .map(|(i, (part, &k))| {
                let i = i as Label;
                let items: Vec<Label> = part.iter().copied().collect();
                let subsets = combinations(&items, k + 1)
                    .into_iter()
                    .map(|c| {
                        next += 1;
                        (next, c)
                    })
                    .collect();
                PartGadget { x: base + 3 * i + 1, y: base + 3 * i + 2, z: base + 3 * i + 3, subsets }
            })
            .collect()
    }

    /// Whether `cover` is a vertex cover within every part budget.
    pub fn is_solution(&self, cover: &BTreeSet<Label>) -> bool {
        self.graph.edges().iter().all(|(u, v)| cover.contains(u) || cover.contains(v))
            && self
                .parts
                .iter()
                .zip(&self.budgets)
                .all(|(part, &k)| part.intersection(cover).count() <= k)
    }
}

/// Builds (G', H'). Each subset vertex is adjacent to the vertices of its own subset and to x_i,
/// and H' contains (s, x_i) as well as (s, y_i).
pub fn gen_from_pvc(p: &PvcInstance) -> Result<InstancePair, ReductionError> {
    let gadgets = p.gadgets();
    let index: BTreeMap<Label, usize> =
        p.parts.iter().enumerate().flat_map(|(i, part)| part.iter().map(move |&v| (v, i))).collect();
    let mut g = LabeledGraph::with_vertices(p.graph.vertices());
    let mut h = LabeledGraph::new();
    for (part, gd) in p.parts.iter().zip(&gadgets) {
        for &c in part {
            for a in [gd.x, gd.y, gd.z] {
                g.connect(c, a)?;
            }
        }
        g.connect(gd.z, gd.x)?;
        g.connect(gd.z, gd.y)?;
        h.connect(gd.x, gd.z)?;
        h.connect(gd.y, gd.z)?;
        for (s, subset) in &gd.subsets {
            for &c in subset {
                g.connect(*s, c)?;
            }
            g.connect(*s, gd.x)?;
            h.connect(*s, gd.x)?;
            h.connect(*s, gd.y)?;
        }
    }
    for (u, v) in p.graph.edges() {
        let (i, j) = (index[&u], index[&v]);
        g.connect(u, gadgets[j].x)?;
        g.connect(v, gadgets[i].x)?;
    }
    for (i, a) in gadgets.iter().enumerate() {
        for (j, b) in gadgets.iter().enumerate() {
            g.connect(a.x, b.y)?;
            h.connect(a.x, b.y)?;
            if i < j {
                g.connect(a.y, b.y)?;
                h.connect(a.y, b.y)?;
                h.connect(a.x, b.x)?;
            }
        }
    }
    Ok(InstancePair::new(g, h)?)
}

/// Witness structure for a feasible cover: covered vertices join x_i, the rest join y_i.
pub fn pvc_witness(p: &PvcInstance, cover: &BTreeSet<Label>) -> Option<WitnessStructure> {
    if !p.is_solution(cover) {
        return None;
    }
    let gadgets = p.gadgets();
    let inst = gen_from_pvc(p).ok()?;
    let mut owner: BTreeMap<Label, Label> = inst.h().vertices().map(|v| (v, v)).collect();
    for (part, gd) in p.parts.iter().zip(&gadgets) {
        for &c in part {
            owner.insert(c, if cover.contains(&c) { gd.x } else { gd.y });
        }
    }
    Some(WitnessStructure::from_owner(&owner))
}

/// Exhaustive search; returns the first feasible cover in increasing subset order of the sorted
/// vertex list.
pub fn pvc_bruteforce(p: &PvcInstance) -> Option<BTreeSet<Label>> {
    let verts: Vec<Label> = p.graph.vertices().collect();
    assert!(verts.len() < 32, "brute force supports at most 31 vertices");
    (0u32..(1 << verts.len()))
        .map(|mask| verts.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &v)| v).collect())
        .find(|cover| p.is_solution(cover))
}
