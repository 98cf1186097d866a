//! Exhaustive enumeration of structures of a sort, the oracle backbone for
//! validity checks and small-model decisions.

use super::{canonical_form, ElemId, Sort, Structure};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::String;
use alloc::vec::Vec;

/// All tuple subsets of `domain^arity`, as an iterator index space.
fn all_arg_tuples(domain: &[ElemId], arity: usize) -> Vec<Vec<ElemId>> {
    let mut out: Vec<Vec<ElemId>> = alloc::vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::new();
        for t in &out {
            for x in domain {
                let mut t2 = t.clone();
                t2.push(*x);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Iterator over every structure of `sort` with domain size up to
/// `max_size` (at least 1 when the sort has constants), each exactly once;
/// with `up_to_iso` only one representative per isomorphism class is
/// produced.
pub struct StructureIter {
    queue: Vec<Structure>,
    seen: BTreeSet<Structure>,
    up_to_iso: bool,
}

impl Iterator for StructureIter {
    type Item = Structure;

    fn next(&mut self) -> Option<Structure> {
        while let Some(s) = self.queue.pop() {
            if self.up_to_iso {
                let canon = canonical_form(&s);
                if !self.seen.insert(canon.clone()) {
                    continue;
                }
                return Some(canon);
            }
            return Some(s);
        }
        None
    }
}

pub fn enumerate_structures(sort: &Sort, max_size: usize, up_to_iso: bool) -> StructureIter {
    let min = usize::from(!sort.consts.is_empty());
    let mut queue = Vec::new();
    for n in (min..=max_size).rev() {
        enumerate_size(sort, n, &mut queue);
    }
    StructureIter {
        queue,
        seen: BTreeSet::new(),
        up_to_iso,
    }
}

fn enumerate_size(sort: &Sort, n: usize, out: &mut Vec<Structure>) {
    let domain: Vec<ElemId> = (0..n as ElemId).collect();
    // source assignments: every constant to some element
    let consts: Vec<&String> = sort.consts.iter().collect();
    let mut source_maps: Vec<BTreeMap<String, ElemId>> = alloc::vec![BTreeMap::new()];
    for c in consts {
        let mut next = Vec::new();
        for m in &source_maps {
            for x in &domain {
                let mut m2 = m.clone();
                m2.insert(c.clone(), *x);
                next.push(m2);
            }
        }
        source_maps = next;
    }
    if n == 0 && !sort.consts.is_empty() {
        return;
    }
    // relation contents: subsets of domain^arity per relation
    let mut rel_choices: Vec<BTreeMap<String, BTreeSet<Vec<ElemId>>>> =
        alloc::vec![BTreeMap::new()];
    for (r, ar) in &sort.rels {
        let tuples = all_arg_tuples(&domain, *ar);
        let mut next = Vec::new();
        for choice in &rel_choices {
            for mask in 0u64..(1u64 << tuples.len()) {
                let set: BTreeSet<Vec<ElemId>> = tuples
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, t)| t.clone())
                    .collect();
                let mut c2 = choice.clone();
                c2.insert(r.clone(), set);
                next.push(c2);
            }
        }
        rel_choices = next;
    }
    for sources in &source_maps {
        for tuples in &rel_choices {
            let s = Structure::new(
                sort.clone(),
                domain.iter().copied().collect(),
                tuples.clone(),
                sources.clone(),
            )
            .expect("enumerated structure is well formed");
            out.push(s);
        }
    }
}
