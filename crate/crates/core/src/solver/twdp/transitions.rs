//! Node transitions. Each output entry remembers one child entry it came from, so a witness can be
//! traced back from the root.

use std::collections::{BTreeMap, BTreeSet};

use indexmap::IndexMap;

use super::signature::{ordered, DpContext, PairLevel, Signature, Slot};
use crate::graph::Label;

/// How an entry was derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Leaf,
    /// From entry `child` of the only child; `tree_edge` is set when an edge joined two parts.
    From { child: usize, tree_edge: Option<(Label, Label)> },
    Joined { left: usize, right: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpTable {
    pub node: usize,
    /// Sorted ascending.
    pub bag: Vec<Label>,
    pub entries: IndexMap<Signature, Provenance>,
}

impl DpTable {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, sig: &Signature) -> bool {
        self.entries.contains_key(sig)
    }

    /// Entries in canonical (sorted) order.
    pub fn sorted(&self) -> Vec<&Signature> {
        let mut v: Vec<&Signature> = self.entries.keys().collect();
        v.sort();
        v
    }

    fn derived(child: &DpTable, bag: Vec<Label>) -> DpTable {
        DpTable { node: child.node, bag, entries: IndexMap::new() }
    }

    fn add(&mut self, sig: Signature, prov: Provenance) {
        self.entries.entry(sig).or_insert(prov);
    }
}

/// Table of a leaf: only the empty signature.
pub fn transition_leaf() -> DpTable {
    let mut entries = IndexMap::new();
    entries.insert(Signature::default(), Provenance::Leaf);
    DpTable { node: 0, bag: Vec::new(), entries }
}

/// A new non-H vertex starts its own floating tree; a new H vertex starts its own class.
pub fn transition_introduce_vertex(ctx: &DpContext<'_>, child: &DpTable, x: Label) -> DpTable {
    let mut bag = child.bag.clone();
    bag.push(x);
    bag.sort_unstable();
    let mut out = DpTable::derived(child, bag);
    let slot = if ctx.is_h(x) { Slot::Requester(x) } else { Slot::Explorer };
    for (i, sig) in child.entries.keys().enumerate() {
        let mut s = sig.clone();
        s.slots.insert(x, slot);
        out.add(s, Provenance::From { child: i, tree_edge: None });
    }
    out
}

/// Notes that parts `p` and `q` are adjacent. Fails if two classes touch without an H edge.
fn record(sig: &mut Signature, ctx: &DpContext<'_>, p: Label, q: Label) -> bool {
    if p == q {
        return true;
    }
    if ctx.is_h(p) && ctx.is_h(q) {
        let level = PairLevel::initial(ctx.required(p, q)).realize(ctx.required(p, q));
        if level == PairLevel::Inv {
            return false;
        }
        sig.sat.insert(ordered(p, q));
    } else {
        sig.adj.insert(ordered(p, q));
    }
    true
}

/// Moves the floating tree rooted at `r` into part `target` (a class or another floating tree).
fn absorb(sig: &mut Signature, ctx: &DpContext<'_>, r: Label, target: Label) -> bool {
    let promise = sig.promise.remove(&r);
    let slot = if ctx.is_h(target) {
        if promise.is_some_and(|p| p != target) {
            return false;
        }
        Slot::Requester(target)
    } else {
        if let Some(p) = promise {
            match sig.promise.get(&target) {
                Some(&q) if q != p => return false,
                _ => {
                    sig.promise.insert(target, p);
                }
            }
        }
        Slot::Dependent(target)
    };
    for s in sig.slots.values_mut() {
        let member = match *s {
            Slot::Explorer => false,
            Slot::Dependent(x) => x == r,
            Slot::Requester(_) => false,
        };
        if member {
            *s = slot;
        }
    }
    *sig.slots.get_mut(&r).unwrap() = slot;
    let touching: Vec<(Label, Label)> =
        sig.adj.iter().copied().filter(|&(a, b)| a == r || b == r).collect();
    for (a, b) in touching {
        sig.adj.remove(&(a, b));
        let other = if a == r { b } else { a };
        if !record(sig, ctx, target, other) {
            return false;
        }
    }
    true
}

/// A G edge `(u, v)` either stays a plain adjacency, or becomes a tree edge that hangs the floating
/// tree rooted at one endpoint below the other endpoint's part.
pub fn transition_introduce_edge(ctx: &DpContext<'_>, child: &DpTable, u: Label, v: Label) -> DpTable {
    let mut out = DpTable::derived(child, child.bag.clone());
    for (i, sig) in child.entries.keys().enumerate() {
        let (pu, pv) = (sig.part(u), sig.part(v));
        let mut s = sig.clone();
        if record(&mut s, ctx, pu, pv) {
            out.add(s, Provenance::From { child: i, tree_edge: None });
        }
        if pu == pv {
            continue;
        }
        for (keep, root, target) in [(u, v, pu), (v, u, pv)] {
            if sig.slots[&root] == Slot::Explorer {
                let mut s = sig.clone();
                if absorb(&mut s, ctx, root, target) {
                    out.add(s, Provenance::From { child: i, tree_edge: Some((keep, root)) });
                }
            }
        }
    }
    out
}

/// Every way to finish class `h`, whose last bag member was just forgotten.
fn close_class(ctx: &DpContext<'_>, mut sig: Signature, h: Label) -> Vec<Signature> {
    if sig.promise.values().any(|&p| p == h) {
        return Vec::new();
    }
    let open = sig.open_classes();
    let floating: Vec<Label> = sig
        .adj
        .iter()
        .filter_map(|&(a, b)| if a == h { Some(b) } else if b == h { Some(a) } else { None })
        .collect();
    sig.adj.retain(|&(a, b)| a != h && b != h);
    let met: BTreeSet<Label> = sig
        .sat
        .iter()
        .filter_map(|&(a, b)| if a == h { Some(b) } else if b == h { Some(a) } else { None })
        .collect();
    sig.sat.retain(|&(a, b)| a != h && b != h);

    let mut choices: Vec<(Label, Vec<Label>)> = Vec::new();
    for &r in &floating {
        match sig.promise.get(&r) {
            Some(&p) if !ctx.required(p, h) => return Vec::new(),
            Some(_) => {}
            None => {
                let targets: Vec<Label> =
                    open.iter().copied().filter(|&c| ctx.required(c, h)).collect();
                if targets.is_empty() {
                    return Vec::new();
                }
                choices.push((r, targets));
            }
        }
    }
    let needed: Vec<Label> = ctx
        .h
        .neighbors(h)
        .unwrap()
        .iter()
        .copied()
        .filter(|g| open.contains(g) && !met.contains(g))
        .collect();

    let mut out = Vec::new();
    let mut pick = vec![0usize; choices.len()];
    loop {
        let mut s = sig.clone();
        for (i, (r, targets)) in choices.iter().enumerate() {
            s.promise.insert(*r, targets[pick[i]]);
        }
        let covered: BTreeSet<Label> = floating.iter().map(|r| s.promise[r]).collect();
        if needed.iter().all(|g| covered.contains(g)) {
            out.push(s);
        }
        let mut wrapped = true;
        for (i, d) in pick.iter_mut().enumerate().rev() {
            *d += 1;
            if *d < choices[i].1.len() {
                wrapped = false;
                break;
            }
            *d = 0;
        }
        if wrapped {
            break;
        }
    }
    out
}

/// Forgetting `x`: a floating root cannot leave the bag; the last member of a class closes it.
pub fn transition_forget(ctx: &DpContext<'_>, child: &DpTable, x: Label) -> DpTable {
    let bag = child.bag.iter().copied().filter(|&y| y != x).collect();
    let mut out = DpTable::derived(child, bag);
    for (i, sig) in child.entries.keys().enumerate() {
        let mut s = sig.clone();
        let prov = Provenance::From { child: i, tree_edge: None };
        match s.slots.remove(&x) {
            Some(Slot::Explorer) | None => {}
            Some(Slot::Dependent(_)) => out.add(s, prov),
            Some(Slot::Requester(h)) => {
                if s.slots.values().any(|&t| t == Slot::Requester(h)) {
                    out.add(s, prov);
                } else {
                    for t in close_class(ctx, s, h) {
                        out.add(t, prov);
                    }
                }
            }
        }
    }
    out
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn non_root(slot: Slot, v: Label) -> bool {
    match slot {
        Slot::Explorer => false,
        Slot::Dependent(_) => true,
        Slot::Requester(h) => h != v,
    }
}

/// Combines two signatures over the same bag from disjoint subtrees, if compatible.
pub fn join_signatures(ctx: &DpContext<'_>, left: &Signature, right: &Signature) -> Option<Signature> {
    let bag: Vec<Label> = left.slots.keys().copied().collect();
    if bag.iter().any(|v| non_root(left.slots[v], *v) && non_root(right.slots[v], *v)) {
        return None;
    }
    // Part nodes: (side, part label).
    let mut ids: BTreeMap<(u8, Label), usize> = BTreeMap::new();
    for &v in &bag {
        let n = ids.len();
        ids.entry((0, left.part(v))).or_insert(n);
        let n = ids.len();
        ids.entry((1, right.part(v))).or_insert(n);
    }
    let mut parent: Vec<usize> = (0..ids.len()).collect();
    for &v in &bag {
        let (a, b) = (ids[&(0, left.part(v))], ids[&(1, right.part(v))]);
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra == rb {
            return None;
        }
        parent[ra] = rb;
    }
    // Name of each merged part: its class, or the vertex that is a root on both sides.
    let mut name: BTreeMap<usize, Label> = BTreeMap::new();
    for (&(_, p), &id) in &ids {
        if ctx.is_h(p) {
            let root = find(&mut parent, id);
            match name.insert(root, p) {
                Some(q) if q != p => return None,
                _ => {}
            }
        }
    }
    for &v in &bag {
        if left.slots[&v] == Slot::Explorer && right.slots[&v] == Slot::Explorer {
            let root = find(&mut parent, ids[&(0, v)]);
            name.entry(root).or_insert(v);
        }
    }
    let mut rename = |side: u8, p: Label| -> Label {
        let root = find(&mut parent, ids[&(side, p)]);
        name[&root]
    };

    let mut out = Signature::default();
    for &v in &bag {
        let n = rename(0, left.part(v));
        let slot = if ctx.is_h(n) {
            Slot::Requester(n)
        } else if n == v {
            Slot::Explorer
        } else {
            Slot::Dependent(n)
        };
        out.slots.insert(v, slot);
    }
    for (side, sig) in [(0u8, left), (1u8, right)] {
        for (&r, &p) in &sig.promise {
            let n = rename(side, r);
            if ctx.is_h(n) {
                if n != p {
                    return None;
                }
            } else {
                match out.promise.insert(n, p) {
                    Some(q) if q != p => return None,
                    _ => {}
                }
            }
        }
    }

    // Pair levels of open classes: merge both sides, then apply observed adjacencies.
    let open: Vec<Label> = out.open_classes().into_iter().collect();
    let (lo, ro) = (left.open_classes(), right.open_classes());
    let mut level: BTreeMap<(Label, Label), PairLevel> = BTreeMap::new();
    for (i, &a) in open.iter().enumerate() {
        for &b in &open[i + 1..] {
            let required = ctx.required(a, b);
            if !required {
                continue;
            }
            let side_level = |sig: &Signature, o: &BTreeSet<Label>| {
                (o.contains(&a) && o.contains(&b)).then(|| {
                    if sig.sat.contains(&(a, b)) {
                        PairLevel::Sat
                    } else {
                        PairLevel::Unsat
                    }
                })
            };
            let l = match (side_level(left, &lo), side_level(right, &ro)) {
                (Some(x), Some(y)) => x.merge(y),
                (Some(x), None) | (None, Some(x)) => x,
                (None, None) => PairLevel::initial(true),
            };
            level.insert((a, b), l);
        }
    }
    for (side, sig) in [(0u8, left), (1u8, right)] {
        for &(p, q) in &sig.adj {
            let (np, nq) = (rename(side, p), rename(side, q));
            if np == nq {
                continue;
            }
            if ctx.is_h(np) && ctx.is_h(nq) {
                let key = ordered(np, nq);
                let required = ctx.required(np, nq);
                let l = level.get(&key).copied().unwrap_or(PairLevel::initial(required));
                let l = l.realize(required);
                if l == PairLevel::Inv {
                    return None;
                }
                level.insert(key, l);
            } else {
                out.adj.insert(ordered(np, nq));
            }
        }
    }
    out.sat = level.into_iter().filter(|&(_, l)| l == PairLevel::Sat).map(|(k, _)| k).collect();
    Some(out)
}

/// Pairs every left entry with every right entry and keeps the compatible combinations. Returns
/// `None` as soon as `expired` reports true; it is polled once per left entry.
pub fn transition_join(
    ctx: &DpContext<'_>,
    left: &DpTable,
    right: &DpTable,
    expired: &dyn Fn() -> bool,
) -> Option<DpTable> {
    let mut out = DpTable::derived(left, left.bag.clone());
    for (i, l) in left.entries.keys().enumerate() {
        if expired() {
            return None;
        }
        for (j, r) in right.entries.keys().enumerate() {
            if let Some(s) = join_signatures(ctx, l, r) {
                out.add(s, Provenance::Joined { left: i, right: j });
            }
        }
    }
    Some(out)
}
