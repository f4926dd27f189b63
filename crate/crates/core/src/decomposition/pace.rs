//! PACE 2017 `.td` format. Vertex ids are 1-based positions into a caller-supplied vertex order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use super::{DecompositionError, TreeDecomposition};
use crate::graph::Label;

/// Serializes `td`; `order[i]` is the label written as id `i + 1`. Bag 1 is the root.
pub fn write_td(td: &TreeDecomposition, order: &[Label]) -> String {
    let id: BTreeMap<Label, usize> = order.iter().enumerate().map(|(i, &v)| (v, i + 1)).collect();
    // Renumber so the root is written first.
    let mut perm: Vec<usize> = (0..td.bags.len()).collect();
    if !perm.is_empty() {
        perm.swap(0, td.root);
    }
    let mut pos = vec![0; td.bags.len()];
    for (i, &p) in perm.iter().enumerate() {
        pos[p] = i + 1;
    }
    let mut out = String::new();
    let _ = writeln!(out, "s td {} {} {}", td.bags.len(), td.max_bag_size(), order.len());
    for &node in &perm {
        let mut ids: Vec<usize> = td.bags[node].iter().map(|v| id[v]).collect();
        ids.sort_unstable();
        let _ = write!(out, "b {}", pos[node]);
        for i in ids {
            let _ = write!(out, " {i}");
        }
        out.push('\n');
    }
    for &(a, b) in &td.edges {
        let _ = writeln!(out, "{} {}", pos[a], pos[b]);
    }
    out
}

/// Parses a `.td` file; ids are mapped through `order` (id `i` is `order[i - 1]`).
pub fn parse_td(text: &str, order: &[Label]) -> Result<TreeDecomposition, DecompositionError> {
    let err = |line: usize, message: String| DecompositionError::Parse { line, message };
    let mut header: Option<(usize, usize, usize)> = None;
    let mut bags: Vec<Option<BTreeSet<Label>>> = Vec::new();
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens: Vec<&str> = raw.split_whitespace().collect();
        if tokens.is_empty() || tokens[0] == "c" {
            continue;
        }
        let num = |s: &str| -> Result<usize, DecompositionError> {
            s.parse::<usize>().map_err(|_| err(line, format!("expected a number, found `{s}`")))
        };
        match tokens[0] {
            "s" => {
                if header.is_some() {
                    return Err(err(line, "duplicate header".into()));
                }
                if tokens.len() != 5 || tokens[1] != "td" {
                    return Err(err(line, "expected `s td <bags> <max_bag> <vertices>`".into()));
                }
                let h = (num(tokens[2])?, num(tokens[3])?, num(tokens[4])?);
                if h.2 != order.len() {
                    return Err(err(
                        line,
                        format!("header declares {} vertices, instance has {}", h.2, order.len()),
                    ));
                }
                bags = vec![None; h.0];
                header = Some(h);
            }
            "b" => {
                let (nb, max_bag, _) = header.ok_or_else(|| err(line, "bag before header".into()))?;
                if tokens.len() < 2 {
                    return Err(err(line, "bag line without id".into()));
                }
                let b = num(tokens[1])?;
                if b == 0 || b > nb {
                    return Err(err(line, format!("bag id {b} out of range")));
                }
                if bags[b - 1].is_some() {
                    return Err(err(line, format!("bag {b} defined twice")));
                }
                let mut bag = BTreeSet::new();
                for t in &tokens[2..] {
                    let v = num(t)?;
                    if v == 0 || v > order.len() {
                        return Err(err(line, format!("vertex id {v} out of range")));
                    }
                    bag.insert(order[v - 1]);
                }
                if bag.len() > max_bag {
                    return Err(err(line, format!("bag {b} exceeds declared size {max_bag}")));
                }
                bags[b - 1] = Some(bag);
            }
            _ => {
                let (nb, _, _) = header.ok_or_else(|| err(line, "edge before header".into()))?;
                if tokens.len() != 2 {
                    return Err(err(line, format!("unrecognized line `{raw}`")));
                }
                let (a, b) = (num(tokens[0])?, num(tokens[1])?);
                for x in [a, b] {
                    if x == 0 || x > nb {
                        return Err(err(line, format!("tree edge references bag {x}")));
                    }
                }
                edges.push((a - 1, b - 1));
            }
        }
    }
    if header.is_none() {
        return Err(err(0, "missing `s td` header".into()));
    }
    let mut out = Vec::with_capacity(bags.len());
    for (i, b) in bags.into_iter().enumerate() {
        out.push(b.ok_or_else(|| err(0, format!("bag {} is never defined", i + 1)))?);
    }
    Ok(TreeDecomposition::new(out, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_with_sparse_labels() {
        let order = [10, 30, 20];
        let td = TreeDecomposition {
            bags: vec![[10, 30].into_iter().collect(), [30, 20].into_iter().collect()],
            edges: vec![(0, 1)],
            root: 1,
        };
        let text = write_td(&td, &order);
        assert_eq!(text, "s td 2 2 3\nb 1 2 3\nb 2 1 2\n2 1\n");
        let back = parse_td(&text, &order).unwrap();
        assert_eq!(back.bags[0], td.bags[1]);
        assert_eq!(back.bags[1], td.bags[0]);
        assert_eq!(back.root, 0);
    }

    #[test]
    fn parse_errors_name_lines() {
        let order = [1, 2];
        let e = parse_td("s td 1 2 2\nb 1 1 7\n", &order).unwrap_err();
        assert_eq!(e, DecompositionError::Parse { line: 2, message: "vertex id 7 out of range".into() });
        assert!(parse_td("c only\n", &order).is_err());
        assert!(parse_td("s td 2 2 2\nb 1 1 2\n", &order).is_err());
        let ok = parse_td("c x\ns td 1 2 2\nb 1 1 2\n", &order).unwrap();
        assert_eq!(ok.bags.len(), 1);
    }
}
