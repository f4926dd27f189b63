//! Text formats for instances (`.lcp`) and certificates.
//!
//! An instance file lists G and then H explicitly so isolated vertices survive:
//!
//! ```text
//! c path 1-2-3 contracted to an edge
//! p lcp 3 2 2 1
//! gv 1
//! gv 2
//! gv 3
//! ge 1 2
//! ge 2 3
//! hv 1
//! hv 3
//! he 1 3
//! ```
//!
//! A certificate is either a contraction sequence (`ct <keep> <remove>` per step, in order) or a
//! witness structure (`w <rep> <member> ...` per class). The first non-comment line decides which.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use lcp_core::{ContractionSequence, InstancePair, Label, LabeledGraph, WitnessStructure};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct FormatError {
    pub line: usize,
    pub message: String,
}

fn fail<T>(line: usize, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { line, message: message.into() })
}

/// A parsed `.lcp` file. `g_order` keeps the `gv` lines in file order; `.td` vertex ids index it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceFile {
    pub g_order: Vec<Label>,
    pub inst: InstancePair,
}

impl InstanceFile {
    /// Wraps an instance, ordering G's vertices by label.
    pub fn from_instance(inst: InstancePair) -> Self {
        Self { g_order: inst.g().vertices().collect(), inst }
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut header: Option<(usize, [usize; 4])> = None;
        let mut g_order = Vec::new();
        let mut g = LabeledGraph::new();
        let mut h = LabeledGraph::new();
        let mut counts = [0usize; 4];
        let mut last_section = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let toks: Vec<&str> = raw.split_whitespace().collect();
            if toks.is_empty() || toks[0] == "c" {
                continue;
            }
            if toks[0] == "p" {
                if header.is_some() {
                    return fail(line, "duplicate header");
                }
                if toks.len() != 6 || toks[1] != "lcp" {
                    return fail(line, "expected `p lcp <nG> <mG> <nH> <mH>`");
                }
                let mut n = [0usize; 4];
                for (slot, t) in n.iter_mut().zip(&toks[2..]) {
                    *slot = t.parse().or_else(|_| fail(line, format!("bad count `{t}`")))?;
                }
                header = Some((line, n));
                continue;
            }
            if header.is_none() {
                return fail(line, "expected `p lcp` header before data lines");
            }
            let section = match toks[0] {
                "gv" => 0,
                "ge" => 1,
                "hv" => 2,
                "he" => 3,
                other => return fail(line, format!("unknown line type `{other}`")),
            };
            if section < last_section {
                return fail(line, format!("`{}` line after a later section", toks[0]));
            }
            last_section = section;
            let arity = if section % 2 == 0 { 1 } else { 2 };
            if toks.len() != arity + 1 {
                return fail(line, format!("`{}` takes {arity} label(s)", toks[0]));
            }
            let mut nums = [0 as Label; 2];
            for (slot, t) in nums.iter_mut().zip(&toks[1..]) {
                *slot = t.parse().or_else(|_| fail(line, format!("bad label `{t}`")))?;
            }
            counts[section] += 1;
            let (u, v) = (nums[0], nums[1]);
            match section {
                0 => {
                    if !g.add_vertex(u) {
                        return fail(line, format!("duplicate G vertex {u}"));
                    }
                    g_order.push(u);
                }
                2 => {
                    if !g.has_vertex(u) {
                        return fail(line, format!("H vertex {u} is not a G vertex"));
                    }
                    if !h.add_vertex(u) {
                        return fail(line, format!("duplicate H vertex {u}"));
                    }
                }
                _ => {
                    let target = if section == 1 { &mut g } else { &mut h };
                    match target.add_edge(u, v) {
                        Ok(true) => {}
                        Ok(false) => return fail(line, format!("duplicate edge {u} {v}")),
                        Err(e) => return fail(line, e.to_string()),
                    }
                }
            }
        }
        let Some((hline, expected)) = header else {
            return fail(0, "missing `p lcp` header");
        };
        if counts != expected {
            return fail(
                hline,
                format!("header announces {expected:?} (gv, ge, hv, he) lines but the file has {counts:?}"),
            );
        }
        let inst = InstancePair::new(g, h).or_else(|e| fail(hline, e.to_string()))?;
        Ok(Self { g_order, inst })
    }

    pub fn to_text(&self) -> String {
        let (g, h) = (self.inst.g(), self.inst.h());
        let mut s = format!("p lcp {} {} {} {}\n", g.vertex_count(), g.edge_count(), h.vertex_count(), h.edge_count());
        for v in &self.g_order {
            let _ = writeln!(s, "gv {v}");
        }
        for (u, v) in g.edges() {
            let _ = writeln!(s, "ge {u} {v}");
        }
        for v in h.vertices() {
            let _ = writeln!(s, "hv {v}");
        }
        for (u, v) in h.edges() {
            let _ = writeln!(s, "he {u} {v}");
        }
        s
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Sequence(ContractionSequence),
    Witness(WitnessStructure),
}

impl Certificate {
    /// An empty file is the empty sequence.
    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut kind: Option<&str> = None;
        let mut pairs = Vec::new();
        let mut classes: BTreeMap<Label, BTreeSet<Label>> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let toks: Vec<&str> = raw.split_whitespace().collect();
            if toks.is_empty() || toks[0] == "c" {
                continue;
            }
            let k = *kind.get_or_insert(toks[0]);
            if toks[0] != k {
                return fail(line, format!("`{}` line in a `{k}` certificate", toks[0]));
            }
            let nums: Vec<Label> = toks[1..]
                .iter()
                .map(|t| t.parse().or_else(|_| fail(line, format!("bad label `{t}`"))))
                .collect::<Result<_, _>>()?;
            match k {
                "ct" if nums.len() == 2 => pairs.push((nums[0], nums[1])),
                "ct" => return fail(line, "`ct` takes two labels"),
                "w" if !nums.is_empty() => {
                    let rep = nums[0];
                    if classes.contains_key(&rep) {
                        return fail(line, format!("class {rep} listed twice"));
                    }
                    let mut members: BTreeSet<Label> = nums.iter().copied().collect();
                    if members.len() != nums.len() {
                        return fail(line, "repeated label in class");
                    }
                    members.insert(rep);
                    classes.insert(rep, members);
                }
                "w" => return fail(line, "`w` needs a representative"),
                other => return fail(line, format!("unknown certificate line `{other}`")),
            }
        }
        Ok(match kind {
            Some("w") => Certificate::Witness(WitnessStructure::new(classes)),
            _ => Certificate::Sequence(ContractionSequence::new(pairs)),
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        match self {
            Certificate::Sequence(seq) => {
                for (u, v) in &seq.pairs {
                    let _ = writeln!(s, "ct {u} {v}");
                }
            }
            Certificate::Witness(w) => {
                for (rep, members) in &w.classes {
                    let _ = write!(s, "w {rep}");
                    for m in members.iter().filter(|&m| m != rep) {
                        let _ = write!(s, " {m}");
                    }
                    s.push('\n');
                }
            }
        }
        s
    }
}
