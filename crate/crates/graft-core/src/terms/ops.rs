//! Derived graph operations: parallel composition and its four-step
//! derivation, typed union-with-additions, modular composition and its
//! port-graph pipeline, and the powerset port form.

use super::{AlgTerm, Label};
use crate::error::{Error, Result};
use crate::qfd;
use crate::structures::{oplus, ElemId, Sort, Structure, EDGE};
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Parallel composition: disjoint union followed by identifying the
/// `c`-sources of the two sides for every shared label `c`. Shared labels
/// are allowed (unlike disjoint union); the relational parts may differ.
pub fn parallel_compose(s: &Structure, t: &Structure) -> Result<Structure> {
    let mut rels = s.sort().rels.clone();
    for (r, ar) in &t.sort().rels {
        if let Some(prev) = rels.insert(r.clone(), *ar) {
            if prev != *ar {
                return Err(Error::Sort(format!(
                    "relation {r} has conflicting arities"
                )));
            }
        }
    }
    let sort = Sort {
        rels,
        consts: s
            .sort()
            .consts
            .union(&t.sort().consts)
            .cloned()
            .collect(),
    };
    let shift = s.domain().iter().next_back().map_or(0, |m| m + 1);
    // union-find over the combined id space
    let mut parent: BTreeMap<ElemId, ElemId> = BTreeMap::new();
    for x in s.domain() {
        parent.insert(*x, *x);
    }
    for x in t.domain() {
        parent.insert(*x + shift, *x + shift);
    }
    fn find(parent: &mut BTreeMap<ElemId, ElemId>, x: ElemId) -> ElemId {
        let p = parent[&x];
        if p == x {
            return x;
        }
        let root = find(parent, p);
        parent.insert(x, root);
        root
    }
    for c in s.sort().consts.intersection(&t.sort().consts) {
        let a = find(&mut parent, s.source(c)?);
        let b = find(&mut parent, t.source(c)? + shift);
        let (keep, drop) = if a <= b { (a, b) } else { (b, a) };
        parent.insert(drop, keep);
    }
    let all_ids: Vec<ElemId> = parent.keys().copied().collect();
    let mut domain = BTreeSet::new();
    let mut class: BTreeMap<ElemId, ElemId> = BTreeMap::new();
    for x in all_ids {
        let r = find(&mut parent, x);
        class.insert(x, r);
        domain.insert(r);
    }
    let mut tuples: BTreeMap<String, BTreeSet<Vec<ElemId>>> = BTreeMap::new();
    for (r, ts) in s.all_tuples() {
        let set = tuples.entry(r.clone()).or_default();
        for tp in ts {
            set.insert(tp.iter().map(|x| class[x]).collect());
        }
    }
    for (r, ts) in t.all_tuples() {
        let set = tuples.entry(r.clone()).or_default();
        for tp in ts {
            set.insert(tp.iter().map(|x| class[&(x + shift)]).collect());
        }
    }
    let mut sources = BTreeMap::new();
    for (c, x) in s.sources() {
        sources.insert(c.clone(), class[x]);
    }
    for (c, x) in t.sources() {
        sources.insert(c.clone(), class[&(x + shift)]);
    }
    Structure::new(sort, domain, tuples, sources)
}

/// Parallel composition of multigraphs, derived: rename the shared labels
/// apart on the right, take the disjoint union, fuse the pairs and forget
/// the temporaries. All edge identities are kept.
pub fn m_parallel(
    g: &crate::structures::MultiGraph,
    h: &crate::structures::MultiGraph,
) -> Result<crate::structures::MultiGraph> {
    let shared: Vec<Label> = g
        .labels()
        .intersection(&h.labels())
        .cloned()
        .collect();
    let bar = |c: &Label| format!("{c}\u{2}bar");
    let mut right = h.clone();
    for c in &shared {
        right = right.m_srcren(c, &bar(c))?;
    }
    let mut u = g.m_oplus(&right)?;
    for c in &shared {
        u = u.mfus(c, &bar(c))?;
        u = u.m_srcfg(&bar(c))?;
    }
    Ok(u)
}

/// Forget every source label.
pub fn forget_all_sources(s: &Structure) -> Result<Structure> {
    let mut out = s.clone();
    let labels: Vec<Label> = out.sort().consts.iter().cloned().collect();
    for c in labels {
        out = qfd::apply_scheme(&qfd::srcfg(out.sort(), &c)?, &out)?;
    }
    Ok(out)
}

/// The four-step derived form of parallel composition as a term: rename
/// each shared label apart on the right, take the disjoint union, fuse the
/// pairs back together and forget the temporaries.
pub fn derive_parallel_term(left: AlgTerm, right: AlgTerm, shared: &BTreeSet<Label>) -> AlgTerm {
    let bar = |c: &Label| format!("{c}\u{2}bar");
    let mut renamed = right;
    for c in shared {
        renamed = AlgTerm::SrcRen(c.clone(), bar(c), Box::new(renamed));
    }
    let mut term = AlgTerm::Oplus(Box::new(left), Box::new(renamed));
    for c in shared {
        term = AlgTerm::Fus(c.clone(), bar(c), Box::new(term));
    }
    for c in shared {
        term = AlgTerm::SrcFg(bar(c), Box::new(term));
    }
    term
}

/// The typed product: disjoint union followed by the edge additions of the
/// pair list. The two port label sets must be disjoint and each pair must
/// cross them; the additions commute, so the application order is
/// immaterial.
pub fn otimes(j: &[(Label, Label)], g: &Structure, h: &Structure) -> Result<Structure> {
    let pg = g.sort().port_labels();
    let ph = h.sort().port_labels();
    if let Some(p) = pg.intersection(&ph).next() {
        return Err(Error::Sort(format!("port label {p} on both sides")));
    }
    for (p, q) in j {
        let crosses = (pg.contains(p) && ph.contains(q)) || (ph.contains(p) && pg.contains(q));
        if !crosses {
            return Err(Error::Sort(format!(
                "pair ({p},{q}) does not cross the two sides"
            )));
        }
    }
    let mut u = oplus(g, h)?;
    for (p, q) in j {
        u = qfd::apply_scheme(&qfd::add_ports(u.sort(), p, q)?, &u)?;
    }
    Ok(u)
}

/// Compose a quotient graph with parts: the disjoint union of the parts
/// plus, for every edge `(i,j)` of the quotient with `i != j`, an edge
/// from every vertex of part `i` to every vertex of part `j`. Quotient
/// vertices are `0..n-1` and index the parts in order; loops in the
/// quotient add nothing inside a part.
pub fn modular_compose(quotient: &Structure, parts: &[Structure]) -> Result<Structure> {
    if !quotient.sort().is_graph() || !quotient.sort().consts.is_empty() {
        return Err(Error::Sort(
            "the quotient must be a plain graph".to_string(),
        ));
    }
    if parts.len() < 2 {
        return Err(Error::Invalid(
            "composition needs at least two parts".to_string(),
        ));
    }
    let expected: BTreeSet<ElemId> = (0..parts.len() as ElemId).collect();
    if *quotient.domain() != expected {
        return Err(Error::Invalid(format!(
            "the quotient must have vertex set 0..{}",
            parts.len() - 1
        )));
    }
    for p in parts {
        if !p.sort().is_graph() || !p.sort().consts.is_empty() {
            return Err(Error::Sort("parts must be plain graphs".to_string()));
        }
        if p.domain().is_empty() {
            return Err(Error::Invalid("parts must be nonempty".to_string()));
        }
    }
    let mut blocks: Vec<Vec<ElemId>> = Vec::new();
    let mut union = Structure::graph(0, &[])?;
    let mut offset = 0;
    for p in parts {
        let compact = p.compact_ids();
        blocks.push(
            compact
                .domain()
                .iter()
                .map(|x| x + offset)
                .collect(),
        );
        union = oplus(&union, &compact)?;
        offset += compact.size() as ElemId;
    }
    let mut tuples = union.all_tuples().clone();
    let edges = tuples.entry(EDGE.to_string()).or_default();
    for t in quotient.tuples(EDGE) {
        let (i, j) = (t[0] as usize, t[1] as usize);
        if i == j {
            continue;
        }
        for x in &blocks[i] {
            for y in &blocks[j] {
                edges.insert(alloc::vec![*x, *y]);
            }
        }
    }
    Structure::new(
        union.sort().clone(),
        union.domain().clone(),
        tuples,
        BTreeMap::new(),
    )
}

/// Relabel every vertex by the exact set of port labels it carries. The
/// output sort has one label per subset of the input port labels; each
/// vertex is a port for exactly one of them.
pub fn powerset_port_form(g: &Structure) -> Result<Structure> {
    if !g.sort().is_port_graph() {
        return Err(Error::Sort("powerset form needs a port graph".to_string()));
    }
    let ports: Vec<Label> = g.sort().port_labels().into_iter().collect();
    let subset_label = |set: &BTreeSet<&Label>| -> Label {
        let mut out = String::from("{");
        for (i, l) in set.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(l);
        }
        out.push('}');
        out
    };
    let mut all_subsets: Vec<BTreeSet<&Label>> = alloc::vec![BTreeSet::new()];
    for p in &ports {
        let mut next = all_subsets.clone();
        for s in &all_subsets {
            let mut s2 = s.clone();
            s2.insert(p);
            next.push(s2);
        }
        all_subsets = next;
    }
    let out_sort = Sort::ports(all_subsets.iter().map(subset_label));
    let mut tuples: BTreeMap<String, BTreeSet<Vec<ElemId>>> = BTreeMap::new();
    tuples.insert(EDGE.to_string(), g.tuples(EDGE).clone());
    for x in g.domain() {
        let carried: BTreeSet<&Label> = ports
            .iter()
            .filter(|p| g.has_tuple(p, &[*x]))
            .collect();
        tuples
            .entry(subset_label(&carried))
            .or_default()
            .insert(alloc::vec![*x]);
    }
    Structure::new(out_sort, g.domain().clone(), tuples, BTreeMap::new())
}
