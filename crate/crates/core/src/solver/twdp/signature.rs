//! DP states over a bag.
//!
//! A partial solution below a node is a forest on the processed vertices. Each tree either contains
//! an H vertex (an anchored class, named by that H vertex) or not (a floating tree, named by its
//! root, which is always in the bag). The signature keeps, per bag vertex, where it sits in that
//! forest, which H-adjacency requirements between open classes are already met, which parts touch
//! a floating tree, and which class each floating tree has committed to join.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::graph::{Label, LabeledGraph};

/// Position of a bag vertex in the partial forest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    /// Root of a floating tree (no parent, no originator yet).
    Explorer,
    /// Non-root member of the floating tree rooted at the given bag vertex.
    Dependent(Label),
    /// Member of the anchored class of the given H vertex.
    Requester(Label),
}

/// Emulated parent of a bag vertex, as seen from the bag.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parent {
    /// Undetermined.
    Star,
    /// A bag vertex: the tree root for dependents, the class vertex for requesters.
    Vertex(Label),
    /// Anchored to an H vertex that has already been forgotten.
    Outside,
}

/// Status of a pair of classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairLevel {
    /// Required by E(H) but not yet realized.
    Unsat,
    /// Realized, or not required and not realized.
    Sat,
    /// Realized but not allowed by E(H).
    Inv,
}

impl PairLevel {
    /// Level of a pair before any adjacency is seen.
    pub fn initial(required: bool) -> Self {
        if required {
            PairLevel::Unsat
        } else {
            PairLevel::Sat
        }
    }

    /// Combination of the levels of the same pair from two disjoint partial solutions.
    pub fn merge(self, other: PairLevel) -> PairLevel {
        match (self, other) {
            (PairLevel::Inv, _) | (_, PairLevel::Inv) => PairLevel::Inv,
            (PairLevel::Sat, _) | (_, PairLevel::Sat) => PairLevel::Sat,
            _ => PairLevel::Unsat,
        }
    }

    /// Level after the two classes are observed adjacent.
    pub fn realize(self, required: bool) -> PairLevel {
        match (self, required) {
            (PairLevel::Inv, _) | (_, false) => PairLevel::Inv,
            _ => PairLevel::Sat,
        }
    }
}

/// Read-only view of H used by the transitions.
#[derive(Clone, Copy)]
pub struct DpContext<'a> {
    pub h: &'a LabeledGraph,
}

impl DpContext<'_> {
    pub fn is_h(&self, v: Label) -> bool {
        self.h.has_vertex(v)
    }

    pub fn required(&self, a: Label, b: Label) -> bool {
        self.h.has_edge(a, b)
    }
}

pub(crate) fn ordered(a: Label, b: Label) -> (Label, Label) {
    (a.min(b), a.max(b))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature {
    /// One slot per bag vertex.
    pub slots: BTreeMap<Label, Slot>,
    /// Realized H-edge pairs between open classes.
    pub sat: BTreeSet<(Label, Label)>,
    /// Adjacent part pairs where at least one part is a floating tree.
    pub adj: BTreeSet<(Label, Label)>,
    /// Floating tree root to the class it must eventually join.
    pub promise: BTreeMap<Label, Label>,
}

impl Signature {
    /// Name of the part containing bag vertex `v`.
    pub fn part(&self, v: Label) -> Label {
        match self.slots[&v] {
            Slot::Explorer => v,
            Slot::Dependent(r) | Slot::Requester(r) => r,
        }
    }

    /// Classes with at least one member in the bag.
    pub fn open_classes(&self) -> BTreeSet<Label> {
        self.slots
            .values()
            .filter_map(|s| match s {
                Slot::Requester(h) => Some(*h),
                _ => None,
            })
            .collect()
    }

    pub fn sigma(&self, v: Label) -> Parent {
        match self.slots[&v] {
            Slot::Explorer => Parent::Star,
            Slot::Dependent(r) => Parent::Vertex(r),
            Slot::Requester(h) if self.slots.contains_key(&h) => Parent::Vertex(h),
            Slot::Requester(_) => Parent::Outside,
        }
    }

    pub fn tau(&self, v: Label) -> Option<Label> {
        match self.slots[&v] {
            Slot::Requester(h) => Some(h),
            _ => None,
        }
    }

    /// Requester pairs in different classes with their level.
    pub fn requester_pairs(&self, ctx: &DpContext<'_>) -> Vec<(Label, Label, PairLevel)> {
        let req: Vec<(Label, Label)> =
            self.slots.keys().filter_map(|&v| self.tau(v).map(|h| (v, h))).collect();
        let mut out = Vec::new();
        for (i, &(u, a)) in req.iter().enumerate() {
            for &(v, b) in &req[i + 1..] {
                if a == b {
                    continue;
                }
                let level = if ctx.required(a, b) && !self.sat.contains(&ordered(a, b)) {
                    PairLevel::Unsat
                } else {
                    PairLevel::Sat
                };
                out.push((u, v, level));
            }
        }
        out
    }

    /// Line-oriented rendering used by the trace dump.
    pub fn render(&self, ctx: &DpContext<'_>) -> String {
        let mut s = String::new();
        s.push_str("sigma=");
        for &v in self.slots.keys() {
            match self.sigma(v) {
                Parent::Star => {
                    let _ = write!(s, "{v}:* ");
                }
                Parent::Vertex(p) => {
                    let _ = write!(s, "{v}:{p} ");
                }
                Parent::Outside => {
                    let _ = write!(s, "{v}:out ");
                }
            }
        }
        s.push_str("tau=");
        for &v in self.slots.keys() {
            match self.tau(v) {
                Some(h) => {
                    let _ = write!(s, "{v}:{h} ");
                }
                None => {
                    let _ = write!(s, "{v}:* ");
                }
            }
        }
        s.push_str("req=");
        for (u, v, l) in self.requester_pairs(ctx) {
            let _ = write!(s, "({u},{v},{}) ", format!("{l:?}").to_lowercase());
        }
        s.push_str("adj=");
        for (a, b) in &self.adj {
            let _ = write!(s, "({a},{b}) ");
        }
        s.push_str("commit=");
        for (r, h) in &self.promise {
            let _ = write!(s, "{r}->{h} ");
        }
        s.trim_end().to_string()
    }
}
