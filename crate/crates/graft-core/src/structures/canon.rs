//! Isomorphism testing and canonical forms.
//!
//! Isomorphisms must preserve the sort, map the `c`-source to the
//! `c`-source for every label, and match tuple sets exactly. The canonical
//! form is the relabeling to `0..n-1` minimizing the encoded structure,
//! found by color refinement followed by backtracking over the remaining
//! cells. Fine for desk-scale domains (tens of elements).

use super::{ElemId, Label, Structure};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

/// Signature of an element under a coloring: per relation, the multiset of
/// (position, tuple-colors) it participates in, plus its source labels.
fn refine_colors(s: &Structure, init: &BTreeMap<ElemId, u64>) -> BTreeMap<ElemId, u64> {
    let mut colors = init.clone();
    loop {
        let mut sigs: BTreeMap<ElemId, Vec<(usize, usize, Vec<u64>)>> = s
            .domain()
            .iter()
            .map(|x| (*x, Vec::new()))
            .collect();
        for (ri, (_, tups)) in s.all_tuples().iter().enumerate() {
            for t in tups {
                let tc: Vec<u64> = t.iter().map(|x| colors[x]).collect();
                for (pos, x) in t.iter().enumerate() {
                    sigs.get_mut(x).unwrap().push((ri, pos, tc.clone()));
                }
            }
        }
        let mut keyed: Vec<(u64, Vec<(usize, usize, Vec<u64>)>, ElemId)> = sigs
            .into_iter()
            .map(|(x, mut v)| {
                v.sort();
                (colors[&x], v, x)
            })
            .collect();
        keyed.sort();
        let mut next: BTreeMap<ElemId, u64> = BTreeMap::new();
        let mut current = 0u64;
        for (i, item) in keyed.iter().enumerate() {
            if i > 0 && (item.0, &item.1) != (keyed[i - 1].0, &keyed[i - 1].1) {
                current += 1;
            }
            next.insert(item.2, current);
        }
        if next == colors {
            return colors;
        }
        colors = next;
    }
}

fn initial_colors(s: &Structure) -> BTreeMap<ElemId, u64> {
    // sources pin their elements: give each distinct label set its own
    // color, numbered in label-set order so the coloring is invariant
    let labels = s.labels_of();
    let keys: BTreeSet<Option<&BTreeSet<Label>>> =
        s.domain().iter().map(|x| labels.get(x)).collect();
    let classes: BTreeMap<Option<&BTreeSet<Label>>, u64> = keys
        .into_iter()
        .enumerate()
        .map(|(i, k)| (k, i as u64))
        .collect();
    s.domain()
        .iter()
        .map(|x| (*x, classes[&labels.get(x)]))
        .collect()
}

/// Encoding of a structure under a total relabeling, used to compare
/// candidate canonical forms.
fn encode(s: &Structure, map: &BTreeMap<ElemId, ElemId>) -> Vec<u8> {
    let mut out = Vec::new();
    for (r, tups) in s.all_tuples() {
        out.extend_from_slice(r.as_bytes());
        out.push(0);
        let mut enc: Vec<Vec<ElemId>> = tups
            .iter()
            .map(|t| t.iter().map(|x| map[x]).collect())
            .collect();
        enc.sort();
        for t in enc {
            for x in t {
                out.extend_from_slice(&x.to_be_bytes());
            }
            out.push(1);
        }
        out.push(2);
    }
    for (c, x) in s.sources() {
        out.extend_from_slice(c.as_bytes());
        out.push(0);
        out.extend_from_slice(&map[x].to_be_bytes());
    }
    out
}

/// The canonical relabeling of `s` to ids `0..n-1`: among all relabelings
/// compatible with the refined coloring, the one minimizing the encoding.
pub fn canonical_form(s: &Structure) -> Structure {
    let n = s.domain().len();
    if n == 0 {
        return s.clone();
    }
    let colors = refine_colors(s, &initial_colors(s));
    // order elements by color; elements in singleton cells are fixed,
    // others are permuted within their cell by backtracking
    let mut cells: BTreeMap<u64, Vec<ElemId>> = BTreeMap::new();
    for (x, c) in &colors {
        cells.entry(*c).or_default().push(*x);
    }
    let cell_list: Vec<Vec<ElemId>> = cells.into_values().collect();

    let mut best: Option<(Vec<u8>, BTreeMap<ElemId, ElemId>)> = None;
    let mut assign: BTreeMap<ElemId, ElemId> = BTreeMap::new();
    fn rec(
        s: &Structure,
        cell_list: &[Vec<ElemId>],
        ci: usize,
        used: u32,
        assign: &mut BTreeMap<ElemId, ElemId>,
        best: &mut Option<(Vec<u8>, BTreeMap<ElemId, ElemId>)>,
    ) {
        if ci == cell_list.len() {
            let enc = encode(s, assign);
            if best.as_ref().is_none_or(|(b, _)| enc < *b) {
                *best = Some((enc, assign.clone()));
            }
            return;
        }
        let cell = &cell_list[ci];
        // permute the cell's elements over the next |cell| ids
        fn perms(
            s: &Structure,
            cell: &[ElemId],
            remaining: &mut Vec<ElemId>,
            next_id: u32,
            cell_list: &[Vec<ElemId>],
            ci: usize,
            used: u32,
            assign: &mut BTreeMap<ElemId, ElemId>,
            best: &mut Option<(Vec<u8>, BTreeMap<ElemId, ElemId>)>,
        ) {
            if remaining.is_empty() {
                rec(s, cell_list, ci + 1, used + cell.len() as u32, assign, best);
                return;
            }
            for i in 0..remaining.len() {
                let x = remaining.remove(i);
                assign.insert(x, next_id);
                perms(s, cell, remaining, next_id + 1, cell_list, ci, used, assign, best);
                assign.remove(&x);
                remaining.insert(i, x);
            }
        }
        let mut rem = cell.clone();
        perms(s, cell, &mut rem, used, cell_list, ci, used, assign, best);
    }
    rec(s, &cell_list, 0, 0, &mut assign, &mut best);
    let (_, map) = best.expect("canonical search yields at least one labeling");
    s.relabel(&map)
}

/// Sort-preserving isomorphism test. Different sorts give `false`, not an
/// error.
pub fn isomorphic(s: &Structure, t: &Structure) -> bool {
    if s.sort() != t.sort() || s.domain().len() != t.domain().len() {
        return false;
    }
    for (r, tups) in s.all_tuples() {
        if tups.len() != t.tuples(r).len() {
            return false;
        }
    }
    // sources pin a partial map; extend by backtracking over refined colors
    canonical_form(s) == canonical_form(t)
}
