//! Cross matching: a perfect A-B matching whose contraction turns the graph into a clique.
//!
//! Text format, one item per line (`#` starts a comment):
//!
//! ```text
//! p cm
//! a 1 2
//! b 3 4
//! e 1 3
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::ReductionError;
use crate::graph::{InstancePair, Label, LabeledGraph, WitnessStructure};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossMatchingInstance {
    pub graph: LabeledGraph,
    pub side_a: BTreeSet<Label>,
    pub side_b: BTreeSet<Label>,
}

impl CrossMatchingInstance {
    pub fn new(graph: LabeledGraph, side_a: BTreeSet<Label>, side_b: BTreeSet<Label>) -> Result<Self, ReductionError> {
        let bad = |m: String| Err(ReductionError::InvalidPartition(m));
        if side_a.len() != side_b.len() {
            return bad(format!("|A| = {} but |B| = {}", side_a.len(), side_b.len()));
        }
        if let Some(v) = side_a.intersection(&side_b).next() {
            return bad(format!("vertex {v} is on both sides"));
        }
        let union: BTreeSet<Label> = side_a.union(&side_b).copied().collect();
        if union != graph.vertex_set() {
            return bad("A and B do not cover exactly the vertices".into());
        }
        Ok(Self { graph, side_a, side_b })
    }

    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let err = |line: usize, message: String| ReductionError::Parse { line, message };
        let mut seen_header = false;
        let (mut a, mut b) = (BTreeSet::new(), BTreeSet::new());
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
                if toks.next() != Some("cm") || seen_header {
                    return Err(err(line, "expected a single `p cm` header".into()));
                }
                seen_header = true;
                continue;
            }
            if !seen_header {
                return Err(err(line, "expected `p cm` header".into()));
            }
            let nums: Vec<Label> = toks
                .map(str::parse)
                .collect::<Result<_, _>>()
                .map_err(|_| err(line, format!("bad number in `{t}`")))?;
            match key {
                "a" => a.extend(nums),
                "b" => b.extend(nums),
                "e" if nums.len() == 2 => edges.push((nums[0], nums[1])),
                _ => return Err(err(line, format!("unrecognised line `{t}`"))),
            }
        }
        if !seen_header {
            return Err(err(0, "empty input".into()));
        }
        let mut g = LabeledGraph::with_vertices(a.iter().chain(&b).copied());
        for (u, v) in edges {
            if !g.has_vertex(u) || !g.has_vertex(v) {
                return Err(ReductionError::InvalidPartition(format!("edge ({u}, {v}) uses an unlisted vertex")));
            }
            g.add_edge(u, v)?;
        }
        Self::new(g, a, b)
    }

    pub fn to_text(&self) -> String {
        let join = |s: &BTreeSet<Label>| s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ");
        let mut s = format!("p cm\na {}\nb {}\n", join(&self.side_a), join(&self.side_b));
        for (u, v) in self.graph.edges() {
            let _ = writeln!(s, "e {u} {v}");
        }
        s
    }

    /// Labels of the two added vertices.
    pub fn extra_labels(&self) -> (Label, Label) {
        let max = self.graph.vertices().max().unwrap_or(0);
        (max + 1, max + 2)
    }
}

/// G adds x_1, x_2 adjacent to all of B; H is the complete graph on A + {x_1, x_2} minus x_1 x_2.
pub fn gen_from_crossmatching(cm: &CrossMatchingInstance) -> Result<InstancePair, ReductionError> {
    let (x1, x2) = cm.extra_labels();
    let mut g = cm.graph.clone();
    for &b in &cm.side_b {
        g.connect(x1, b)?;
        g.connect(x2, b)?;
    }
    let top: Vec<Label> = cm.side_a.iter().copied().chain([x1, x2]).collect();
    let mut h = LabeledGraph::with_vertices(top.iter().copied());
    for (i, &u) in top.iter().enumerate() {
        for &v in &top[i + 1..] {
            if (u, v) != (x1, x2) {
                h.connect(u, v)?;
            }
        }
    }
    Ok(InstancePair::new(g, h)?)
}

/// Exhaustive search over perfect A-B matchings. Returns the first matching (pairs (a, b), A in
/// ascending order) whose contraction is a clique.
pub fn crossmatch_bruteforce(cm: &CrossMatchingInstance) -> Option<Vec<(Label, Label)>> {
    let a: Vec<Label> = cm.side_a.iter().copied().collect();
    let mut chosen: Vec<Label> = Vec::with_capacity(a.len());
    let mut used = BTreeSet::new();
    fn rec(
        cm: &CrossMatchingInstance,
        a: &[Label],
        chosen: &mut Vec<Label>,
        used: &mut BTreeSet<Label>,
    ) -> bool {
        let i = chosen.len();
        if i == a.len() {
            return is_clique_after(cm, a, chosen);
        }
        for &b in cm.graph.neighbors(a[i]).unwrap() {
            if cm.side_b.contains(&b) && used.insert(b) {
                chosen.push(b);
                if rec(cm, a, chosen, used) {
                    return true;
                }
                chosen.pop();
                used.remove(&b);
            }
        }
        false
    }
    rec(cm, &a, &mut chosen, &mut used).then(|| a.iter().copied().zip(chosen).collect())
}

/// Witness for a cross matching: each a in A takes its partner, the two extra vertices stay alone.
/// `None` if `matching` is not a cross matching of `cm`.
pub fn crossmatch_witness(cm: &CrossMatchingInstance, matching: &[(Label, Label)]) -> Option<WitnessStructure> {
    let (a, b): (Vec<Label>, Vec<Label>) = matching.iter().copied().unzip();
    let covers = |side: &BTreeSet<Label>, xs: &[Label]| xs.iter().copied().collect::<BTreeSet<_>>() == *side && xs.len() == side.len();
    if !covers(&cm.side_a, &a) || !covers(&cm.side_b, &b) || matching.iter().any(|&(x, y)| !cm.graph.has_edge(x, y)) {
        return None;
    }
    if !is_clique_after(cm, &a, &b) {
        return None;
    }
    let (x1, x2) = cm.extra_labels();
    let mut classes: BTreeMap<Label, BTreeSet<Label>> =
        matching.iter().map(|&(x, y)| (x, BTreeSet::from([x, y]))).collect();
    classes.insert(x1, BTreeSet::from([x1]));
    classes.insert(x2, BTreeSet::from([x2]));
    Some(WitnessStructure::new(classes))
}

fn is_clique_after(cm: &CrossMatchingInstance, a: &[Label], b: &[Label]) -> bool {
    let g = &cm.graph;
    let touch = |i: usize, j: usize| {
        [a[i], b[i]].iter().any(|&x| [a[j], b[j]].iter().any(|&y| g.has_edge(x, y)))
    };
    (0..a.len()).all(|i| (i + 1..a.len()).all(|j| touch(i, j)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::oracle::solve_bruteforce;
    use crate::solver::Answer;

    fn cm(a: &[Label], b: &[Label], e: &[(Label, Label)]) -> CrossMatchingInstance {
        let g = LabeledGraph::from_edges(a.iter().chain(b).copied(), e.iter().copied()).unwrap();
        CrossMatchingInstance::new(g, a.iter().copied().collect(), b.iter().copied().collect()).unwrap()
    }

    #[test]
    fn single_pair() {
        let c = cm(&[1], &[2], &[(1, 2)]);
        let inst = gen_from_crossmatching(&c).unwrap();
        assert_eq!(inst.g().edges(), vec![(1, 2), (2, 3), (2, 4)]);
        assert_eq!(inst.h().edges(), vec![(1, 3), (1, 4)]);
        assert_eq!(solve_bruteforce(&inst).unwrap().answer, Answer::Yes);
        assert_eq!(crossmatch_bruteforce(&c), Some(vec![(1, 2)]));
        let w = crossmatch_witness(&c, &[(1, 2)]).unwrap();
        assert!(crate::graph::check_witness(&inst, &w).unwrap().is_valid());
        assert!(crossmatch_witness(&c, &[]).is_none());
    }

    #[test]
    fn no_cross_edges_is_no() {
        let c = cm(&[1, 2], &[3, 4], &[(1, 2), (3, 4)]);
        assert_eq!(crossmatch_bruteforce(&c), None);
        let inst = gen_from_crossmatching(&c).unwrap();
        assert_eq!(solve_bruteforce(&inst).unwrap().answer, Answer::No);
    }

    #[test]
    fn four_cycle() {
        // A = {1, 3}, B = {2, 4}, C4 1-2-3-4-1: matching {1-2, 3-4} contracts to K2.
        let c = cm(&[1, 3], &[2, 4], &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        assert!(crossmatch_bruteforce(&c).is_some());
        let inst = gen_from_crossmatching(&c).unwrap();
        assert_eq!(solve_bruteforce(&inst).unwrap().answer, Answer::Yes);
    }

    #[test]
    fn text_round_trip_and_validation() {
        let c = cm(&[1, 3], &[2, 4], &[(1, 2), (3, 4)]);
        let text = c.to_text();
        assert_eq!(text, "p cm\na 1 3\nb 2 4\ne 1 2\ne 3 4\n");
        assert_eq!(CrossMatchingInstance::parse(&text).unwrap(), c);
        assert!(CrossMatchingInstance::parse("p cm\na 1\nb 2 3\n").is_err());
        assert!(CrossMatchingInstance::parse("a 1\n").is_err());
    }
}
