use std::collections::{BTreeMap, BTreeSet};

use super::TreeDecomposition;
use crate::graph::{Label, LabeledGraph};

fn fill_in(work: &BTreeMap<Label, BTreeSet<Label>>, v: Label) -> usize {
    let nbrs: Vec<Label> = work[&v].iter().copied().collect();
    let mut missing = 0;
    for (i, a) in nbrs.iter().enumerate() {
        for b in &nbrs[i + 1..] {
            if !work[a].contains(b) {
                missing += 1;
            }
        }
    }
    missing
}

/// Tree decomposition from a min-fill elimination ordering.
///
/// Ties are broken by smaller degree, then by smaller label. Each eliminated vertex yields the bag
/// `{v} ∪ N(v)`; its parent is the bag of the neighbour eliminated next. Roots of separate
/// components hang off the last bag, which is the root.
pub fn heuristic_decompose(g: &LabeledGraph) -> TreeDecomposition {
    if g.is_empty() {
        return TreeDecomposition::new(vec![BTreeSet::new()], vec![]);
    }
    let mut work: BTreeMap<Label, BTreeSet<Label>> =
        g.vertices().map(|v| (v, g.neighbors(v).unwrap().clone())).collect();
    let mut order = Vec::with_capacity(g.vertex_count());
    let mut bags = Vec::with_capacity(g.vertex_count());
    while !work.is_empty() {
        let v = *work
            .keys()
            .min_by_key(|&&v| (fill_in(&work, v), work[&v].len(), v))
            .unwrap();
        let nbrs = work.remove(&v).unwrap();
        for &a in &nbrs {
            let entry = work.get_mut(&a).unwrap();
            entry.remove(&v);
            entry.extend(nbrs.iter().copied().filter(|&b| b != a));
        }
        let mut bag = nbrs;
        bag.insert(v);
        order.push(v);
        bags.push(bag);
    }
    let pos: BTreeMap<Label, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let last = bags.len() - 1;
    let mut edges = Vec::with_capacity(last);
    for (i, &v) in order.iter().enumerate().take(last) {
        let parent = bags[i]
            .iter()
            .filter(|&&w| w != v)
            .map(|w| pos[w])
            .min()
            .unwrap_or(last);
        edges.push((parent, i));
    }
    TreeDecomposition { bags, edges, root: last }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: Label) -> LabeledGraph {
        let id = |r: Label, c: Label| r * n + c + 1;
        let mut g = LabeledGraph::with_vertices((0..n * n).map(|i| i + 1));
        for r in 0..n {
            for c in 0..n {
                if c + 1 < n {
                    g.add_edge(id(r, c), id(r, c + 1)).unwrap();
                }
                if r + 1 < n {
                    g.add_edge(id(r, c), id(r + 1, c)).unwrap();
                }
            }
        }
        g
    }

    #[test]
    fn tree_has_width_one() {
        let g = LabeledGraph::from_edges(1..=7, [(1, 2), (1, 3), (2, 4), (2, 5), (3, 6), (3, 7)])
            .unwrap();
        let td = heuristic_decompose(&g);
        let r = td.validate(&g);
        assert!(r.is_valid(), "{}", r.summary());
        assert_eq!(r.width, 1);
    }

    #[test]
    fn clique_has_width_n_minus_one() {
        let mut g = LabeledGraph::with_vertices(1..=5);
        for a in 1..=5 {
            for b in a + 1..=5 {
                g.add_edge(a, b).unwrap();
            }
        }
        let td = heuristic_decompose(&g);
        assert!(td.validate(&g).is_valid());
        assert_eq!(td.width(), 4);
    }

    #[test]
    fn grid_width_bounded() {
        let g = grid(3);
        let td = heuristic_decompose(&g);
        let r = td.validate(&g);
        assert!(r.is_valid());
        assert!(r.width >= 3 && r.width <= 4, "width {}", r.width);
    }

    #[test]
    fn disconnected_and_empty() {
        let g = LabeledGraph::from_edges([1, 2, 3, 4, 9], [(1, 2), (3, 4)]).unwrap();
        let td = heuristic_decompose(&g);
        assert!(td.validate(&g).is_valid());
        let e = LabeledGraph::new();
        assert!(heuristic_decompose(&e).validate(&e).is_valid());
    }
}
