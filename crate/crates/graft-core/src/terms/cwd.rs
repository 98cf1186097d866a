//! Exact clique-width by dynamic programming over labeled partitions of
//! vertex subsets.
//!
//! Any term over disjoint union, edge addition and port renaming can be
//! normalized so that every edge is created directly above the union where
//! its endpoints first coexist (additions commute with each other and push
//! down through renamings without new labels). A subterm value is then
//! exactly the induced subgraph on its vertex set, with a port partition
//! into at most `k` classes. A union step pairs up classes of the two
//! sides (same-side classes carry distinct labels, so a label joins at
//! most one class per side), after which the missing cross edges must form
//! complete blocks between classes; renamings coarsen the partition
//! arbitrarily.

use crate::error::{Error, Result};
use crate::structures::Structure;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

type Mask = u32;
type Partition = Vec<Mask>;

struct Search {
    n: usize,
    adj: Vec<Mask>, // adj[x] = successors of x, loops excluded
}

impl Search {
    fn has_edge(&self, x: usize, y: usize) -> bool {
        self.adj[x] & (1 << y) != 0
    }

    /// Cross edges between the two sides missing from the union must be
    /// coverable by complete class blocks inside the final induced graph.
    /// A cross edge whose endpoints share a class is unrealizable: classes
    /// only coarsen upward, so no later addition can separate them.
    fn realizable(&self, s1: Mask, s2: Mask, merged: &Partition) -> bool {
        let crosses = |x: usize, y: usize| {
            (s1 & (1 << x) != 0 && s2 & (1 << y) != 0)
                || (s2 & (1 << x) != 0 && s1 & (1 << y) != 0)
        };
        for a in merged {
            for x in bits(*a) {
                for y in bits(*a) {
                    if x != y && crosses(x, y) && self.has_edge(x, y) {
                        return false;
                    }
                }
            }
        }
        for (i, a) in merged.iter().enumerate() {
            for (j, b) in merged.iter().enumerate() {
                if i == j {
                    continue;
                }
                // does the block (a -> b) contain a needed cross edge?
                let mut needed = false;
                let mut complete = true;
                for x in bits(*a) {
                    for y in bits(*b) {
                        let edge = self.has_edge(x, y);
                        if crosses(x, y) && edge {
                            needed = true;
                        }
                        if !edge {
                            complete = false;
                        }
                    }
                }
                if needed && !complete {
                    return false;
                }
            }
        }
        // every needed cross edge must lie in some block pair; with
        // complete blocks added for each needed pair the check above
        // suffices, since each cross edge lies in exactly one class pair
        true
    }
}

fn bits(m: Mask) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| m & (1 << i) != 0)
}

fn canonicalize(mut p: Partition) -> Partition {
    p.sort();
    p
}

/// All coarsenings reachable by merging classes, including the partition
/// itself.
fn coarsenings(p: &Partition) -> BTreeSet<Partition> {
    let mut out = BTreeSet::new();
    let mut frontier = alloc::vec![canonicalize(p.clone())];
    out.insert(frontier[0].clone());
    while let Some(q) = frontier.pop() {
        for i in 0..q.len() {
            for j in i + 1..q.len() {
                let mut next: Partition = q
                    .iter()
                    .enumerate()
                    .filter(|(idx, _)| *idx != i && *idx != j)
                    .map(|(_, m)| *m)
                    .collect();
                next.push(q[i] | q[j]);
                let next = canonicalize(next);
                if out.insert(next.clone()) {
                    frontier.push(next);
                }
            }
        }
    }
    out
}

/// Injective partial matchings between the classes of two partitions.
fn matchings(p1: &Partition, p2: &Partition) -> Vec<Vec<(usize, usize)>> {
    fn rec(
        i: usize,
        p1: &Partition,
        p2: &Partition,
        used: &mut Vec<bool>,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if i == p1.len() {
            out.push(current.clone());
            return;
        }
        // leave class i unmatched
        rec(i + 1, p1, p2, used, current, out);
        for j in 0..p2.len() {
            if !used[j] {
                used[j] = true;
                current.push((i, j));
                rec(i + 1, p1, p2, used, current, out);
                current.pop();
                used[j] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(
        0,
        p1,
        p2,
        &mut alloc::vec![false; p2.len()],
        &mut Vec::new(),
        &mut out,
    );
    out
}

fn achievable(search: &Search, k: usize) -> bool {
    let n = search.n;
    let full: Mask = if n == 32 { Mask::MAX } else { (1 << n) - 1 };
    let mut reach: BTreeMap<Mask, BTreeSet<Partition>> = BTreeMap::new();
    for v in 0..n {
        let m: Mask = 1 << v;
        reach.insert(m, [alloc::vec![m]].into_iter().collect());
    }
    // subsets in increasing popcount order
    let mut subsets: Vec<Mask> = (1..=full).collect();
    subsets.sort_by_key(|m| m.count_ones());
    for s in subsets {
        if s.count_ones() < 2 {
            continue;
        }
        let mut found: BTreeSet<Partition> = BTreeSet::new();
        // proper submask enumeration; keep s1 < s2 to halve the work,
        // union is symmetric
        let mut s1 = (s - 1) & s;
        while s1 != 0 {
            let s2 = s & !s1;
            if s1 < s2 {
                if let (Some(r1), Some(r2)) = (reach.get(&s1), reach.get(&s2)) {
                    for p1 in r1 {
                        for p2 in r2 {
                            for m in matchings(p1, p2) {
                                let total = p1.len() + p2.len() - m.len();
                                if total > k {
                                    continue;
                                }
                                let mut merged: Partition = Vec::new();
                                let mut used1 = alloc::vec![false; p1.len()];
                                let mut used2 = alloc::vec![false; p2.len()];
                                for (i, j) in &m {
                                    merged.push(p1[*i] | p2[*j]);
                                    used1[*i] = true;
                                    used2[*j] = true;
                                }
                                for (i, c) in p1.iter().enumerate() {
                                    if !used1[i] {
                                        merged.push(*c);
                                    }
                                }
                                for (j, c) in p2.iter().enumerate() {
                                    if !used2[j] {
                                        merged.push(*c);
                                    }
                                }
                                if search.realizable(s1, s2, &merged) {
                                    found.insert(canonicalize(merged));
                                }
                            }
                        }
                    }
                }
            }
            s1 = (s1 - 1) & s;
        }
        if !found.is_empty() {
            if s == full {
                return true;
            }
            let mut closed: BTreeSet<Partition> = BTreeSet::new();
            for p in &found {
                closed.extend(coarsenings(p));
            }
            reach.insert(s, closed);
        }
    }
    // single-vertex graphs reach the full set through the leaf alone
    n == 1
}

/// The least number of port labels `k <= max_k` for which the graph is
/// the value of a term over disjoint union, edge addition and port
/// renaming with `k` labels; `None` when every `k` up to the bound fails.
/// Exhaustive search, guarded by `cap` on the vertex count.
pub fn cwd_exact(g: &Structure, max_k: usize, cap: usize) -> Result<Option<usize>> {
    if !g.sort().is_graph() || !g.sort().consts.is_empty() {
        return Err(Error::Sort(
            "clique-width is defined for plain graphs".to_string(),
        ));
    }
    let n = g.domain().len();
    if n == 0 {
        return Err(Error::Invalid("the empty graph has no term".to_string()));
    }
    if n > cap {
        return Err(Error::Capacity(format!(
            "clique-width search over {n} vertices exceeds the cap of {cap}"
        )));
    }
    let compact = g.compact_ids();
    let mut adj = alloc::vec![0 as Mask; n];
    for t in compact.tuples(crate::structures::EDGE) {
        let (x, y) = (t[0] as usize, t[1] as usize);
        if x != y {
            adj[x] |= 1 << y;
        }
    }
    let search = Search { n, adj };
    for k in 1..=max_k {
        if achievable(&search, k) {
            return Ok(Some(k));
        }
    }
    Ok(None)
}

/// True when the graph has no edges apart from loops, the exact class of
/// clique-width one.
pub fn edgeless_apart_from_loops(g: &Structure) -> bool {
    g.tuples(crate::structures::EDGE)
        .iter()
        .all(|t| t[0] == t[1])
}
