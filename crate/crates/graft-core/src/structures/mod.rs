//! Finite relational structures with named sources, and graphs as their
//! edge-only instances.
//!
//! Element ids are opaque `u32`s. Every operation assigns ids
//! deterministically so results are reproducible byte for byte; equality of
//! structures is isomorphism, with [`Structure::canonical_form`] providing a
//! normal representative for hashing and set membership.

mod canon;
mod enumerate;
mod multigraph;

pub use enumerate::{enumerate_structures, StructureIter};
pub use multigraph::{
    eta, has_multiedges, inject_iota, multigraph_type, predict_mfus_multiedge, simplify_u,
    EtaRelation, MultiGraph,
};

use crate::error::{Error, Result};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Name of the binary relation used for graph edges.
pub const EDGE: &str = "edge";

/// A source label or port label. Labels are drawn from a globally ordered
/// universe; the lexicographic order on the string is that order (it is what
/// [`split_sources`] minimizes over).
pub type Label = String;

/// An element of a structure's domain.
pub type ElemId = u32;

/// A sort `(R, C)`: a finite relational vocabulary (each symbol with a
/// positive arity) together with a finite set of source labels.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Sort {
    /// Relation symbols, name to arity. Arities are at least 1.
    pub rels: BTreeMap<String, usize>,
    /// Source labels.
    pub consts: BTreeSet<Label>,
}

impl Sort {
    pub fn new<R, C>(rels: R, consts: C) -> Result<Sort>
    where
        R: IntoIterator<Item = (String, usize)>,
        C: IntoIterator<Item = Label>,
    {
        let rels: BTreeMap<String, usize> = rels.into_iter().collect();
        for (name, ar) in &rels {
            if *ar == 0 {
                return Err(Error::Arity(format!("relation {name} has arity 0")));
            }
        }
        Ok(Sort {
            rels,
            consts: consts.into_iter().collect(),
        })
    }

    /// The graph sort: one binary `edge` relation, sources in `consts`.
    pub fn graph<C: IntoIterator<Item = Label>>(consts: C) -> Sort {
        Sort {
            rels: [(EDGE.to_string(), 2)].into_iter().collect(),
            consts: consts.into_iter().collect(),
        }
    }

    /// The port-graph sort: `edge` plus one unary relation per port label.
    pub fn ports<P: IntoIterator<Item = Label>>(ports: P) -> Sort {
        let mut rels: BTreeMap<String, usize> = [(EDGE.to_string(), 2)].into_iter().collect();
        for p in ports {
            rels.insert(p, 1);
        }
        Sort {
            rels,
            consts: BTreeSet::new(),
        }
    }

    /// Port labels of a port-graph sort: the unary relation names.
    pub fn port_labels(&self) -> BTreeSet<Label> {
        self.rels
            .iter()
            .filter(|(n, a)| **a == 1 && n.as_str() != EDGE)
            .map(|(n, _)| n.clone())
            .collect()
    }

    /// True if this is a graph sort, i.e. relations are exactly `{edge}`.
    pub fn is_graph(&self) -> bool {
        self.rels.len() == 1 && self.rels.get(EDGE) == Some(&2)
    }

    /// True if the relations are `edge` plus unary port labels.
    pub fn is_port_graph(&self) -> bool {
        self.rels.get(EDGE) == Some(&2)
            && self
                .rels
                .iter()
                .all(|(n, a)| n == EDGE || *a == 1)
    }

    /// Union of two sorts (used by disjoint union). Constants must be
    /// disjoint; relation vocabularies merge, with arity clashes rejected.
    pub fn union_disjoint_consts(&self, other: &Sort) -> Result<Sort> {
        if let Some(c) = self.consts.intersection(&other.consts).next() {
            return Err(Error::Sort(format!(
                "constant sets overlap on {c:?} in disjoint union"
            )));
        }
        let mut rels = self.rels.clone();
        for (name, ar) in &other.rels {
            if let Some(prev) = rels.insert(name.clone(), *ar) {
                if prev != *ar {
                    return Err(Error::Sort(format!(
                        "relation {name} has conflicting arities {prev} and {ar}"
                    )));
                }
            }
        }
        Ok(Sort {
            rels,
            consts: self.consts.union(&other.consts).cloned().collect(),
        })
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        let mut first = true;
        for (name, ar) in &self.rels {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{name}/{ar}")?;
            first = false;
        }
        write!(f, ";")?;
        let mut first = true;
        for c in &self.consts {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
            first = false;
        }
        write!(f, ")")
    }
}

/// A finite relational structure with sources: a domain of element ids, one
/// tuple set per relation symbol, and a total mapping from the sort's
/// constants to domain elements.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Structure {
    sort: Sort,
    domain: BTreeSet<ElemId>,
    tuples: BTreeMap<String, BTreeSet<Vec<ElemId>>>,
    sources: BTreeMap<Label, ElemId>,
}

impl Structure {
    /// Build a structure, checking all invariants: tuples and sources lie in
    /// the domain, tuple lengths match arities, sources are total on the
    /// sort's constants, and the domain may be empty only when there are no
    /// constants.
    pub fn new(
        sort: Sort,
        domain: BTreeSet<ElemId>,
        tuples: BTreeMap<String, BTreeSet<Vec<ElemId>>>,
        sources: BTreeMap<Label, ElemId>,
    ) -> Result<Structure> {
        if domain.is_empty() && !sort.consts.is_empty() {
            return Err(Error::Invalid(
                "empty domain with nonempty constant set".to_string(),
            ));
        }
        for (rel, tups) in &tuples {
            let ar = *sort
                .rels
                .get(rel)
                .ok_or_else(|| Error::UnknownSymbol(format!("relation {rel}")))?;
            for t in tups {
                if t.len() != ar {
                    return Err(Error::Arity(format!(
                        "tuple of length {} for relation {rel}/{ar}",
                        t.len()
                    )));
                }
                if let Some(x) = t.iter().find(|x| !domain.contains(x)) {
                    return Err(Error::Invalid(format!(
                        "tuple entry {x} outside the domain"
                    )));
                }
            }
        }
        for c in &sort.consts {
            match sources.get(c) {
                Some(x) if domain.contains(x) => {}
                Some(x) => {
                    return Err(Error::Invalid(format!("source {c} = {x} outside domain")))
                }
                None => return Err(Error::Invalid(format!("missing source {c}"))),
            }
        }
        if let Some((c, _)) = sources.iter().find(|(c, _)| !sort.consts.contains(*c)) {
            return Err(Error::UnknownSymbol(format!("source label {c}")));
        }
        let mut tuples = tuples;
        for rel in sort.rels.keys() {
            tuples.entry(rel.clone()).or_default();
        }
        Ok(Structure {
            sort,
            domain,
            tuples,
            sources,
        })
    }

    /// The structure with empty domain over a constant-free sort.
    pub fn empty(sort: Sort) -> Result<Structure> {
        Structure::new(sort, BTreeSet::new(), BTreeMap::new(), BTreeMap::new())
    }

    /// Single vertex carrying the given source labels (over a graph sort by
    /// default callers; the sort is `(∅, labels)` here).
    pub fn single_source<I: IntoIterator<Item = Label>>(labels: I) -> Structure {
        let consts: BTreeSet<Label> = labels.into_iter().collect();
        let sources = consts.iter().map(|c| (c.clone(), 0)).collect();
        Structure::new(
            Sort {
                rels: BTreeMap::new(),
                consts,
            },
            [0].into_iter().collect(),
            BTreeMap::new(),
            sources,
        )
        .expect("single source vertex is well formed")
    }

    /// Graph with vertices `0..n-1` and the given directed edges, no sources.
    pub fn graph(n: u32, edges: &[(ElemId, ElemId)]) -> Result<Structure> {
        let mut tuples: BTreeMap<String, BTreeSet<Vec<ElemId>>> = BTreeMap::new();
        tuples.insert(
            EDGE.to_string(),
            edges.iter().map(|(a, b)| alloc::vec![*a, *b]).collect(),
        );
        Structure::new(Sort::graph([]), (0..n).collect(), tuples, BTreeMap::new())
    }

    /// Graph with sources: vertices `0..n-1`, directed edges, labelled
    /// sources.
    pub fn graph_with_sources(
        n: u32,
        edges: &[(ElemId, ElemId)],
        sources: &[(&str, ElemId)],
    ) -> Result<Structure> {
        let mut tuples: BTreeMap<String, BTreeSet<Vec<ElemId>>> = BTreeMap::new();
        tuples.insert(
            EDGE.to_string(),
            edges.iter().map(|(a, b)| alloc::vec![*a, *b]).collect(),
        );
        Structure::new(
            Sort::graph(sources.iter().map(|(c, _)| c.to_string())),
            (0..n).collect(),
            tuples,
            sources.iter().map(|(c, x)| (c.to_string(), *x)).collect(),
        )
    }

    pub fn sort(&self) -> &Sort {
        &self.sort
    }

    pub fn domain(&self) -> &BTreeSet<ElemId> {
        &self.domain
    }

    pub fn size(&self) -> usize {
        self.domain.len()
    }

    pub fn tuples(&self, rel: &str) -> &BTreeSet<Vec<ElemId>> {
        static EMPTY: BTreeSet<Vec<ElemId>> = BTreeSet::new();
        self.tuples.get(rel).unwrap_or(&EMPTY)
    }

    pub fn all_tuples(&self) -> &BTreeMap<String, BTreeSet<Vec<ElemId>>> {
        &self.tuples
    }

    pub fn sources(&self) -> &BTreeMap<Label, ElemId> {
        &self.sources
    }

    pub fn source(&self, c: &str) -> Result<ElemId> {
        self.sources
            .get(c)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(format!("source label {c}")))
    }

    pub fn has_tuple(&self, rel: &str, t: &[ElemId]) -> bool {
        self.tuples.get(rel).is_some_and(|s| s.contains(t))
    }

    /// Directed edge test on graph structures.
    pub fn has_edge(&self, a: ElemId, b: ElemId) -> bool {
        self.has_tuple(EDGE, &[a, b])
    }

    /// Renumber the domain to `0..n-1` preserving the `BTreeSet` order of
    /// old ids. This is the compaction used when printing canonical JSON.
    pub fn compact_ids(&self) -> Structure {
        let map: BTreeMap<ElemId, ElemId> = self
            .domain
            .iter()
            .enumerate()
            .map(|(i, x)| (*x, i as ElemId))
            .collect();
        self.relabel(&map)
    }

    /// Apply an injective id relabeling.
    pub(crate) fn relabel(&self, map: &BTreeMap<ElemId, ElemId>) -> Structure {
        Structure {
            sort: self.sort.clone(),
            domain: self.domain.iter().map(|x| map[x]).collect(),
            tuples: self
                .tuples
                .iter()
                .map(|(r, ts)| {
                    (
                        r.clone(),
                        ts.iter()
                            .map(|t| t.iter().map(|x| map[x]).collect())
                            .collect(),
                    )
                })
                .collect(),
            sources: self.sources.iter().map(|(c, x)| (c.clone(), map[x])).collect(),
        }
    }

    /// True iff the source mapping is injective.
    pub fn is_source_separated(&self) -> bool {
        let values: BTreeSet<ElemId> = self.sources.values().copied().collect();
        values.len() == self.sources.len()
    }

    /// The labels naming each element, for elements that are sources.
    pub fn labels_of(&self) -> BTreeMap<ElemId, BTreeSet<Label>> {
        let mut m: BTreeMap<ElemId, BTreeSet<Label>> = BTreeMap::new();
        for (c, x) in &self.sources {
            m.entry(*x).or_default().insert(c.clone());
        }
        m
    }
}

/// The restriction of a structure to its set of sources, in canonical form.
/// Every element is the value of at least one constant, so the canonical
/// renumbering orders elements by their least label.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct StructType(Structure);

impl StructType {
    pub fn as_structure(&self) -> &Structure {
        &self.0
    }

    pub fn into_structure(self) -> Structure {
        self.0
    }

    /// Wrap a structure already satisfying the type invariant (domain =
    /// source image), canonicalizing ids.
    pub fn from_source_only(s: &Structure) -> Result<StructType> {
        let image: BTreeSet<ElemId> = s.sources.values().copied().collect();
        if image != s.domain {
            return Err(Error::Invalid(
                "type structure has non-source elements".to_string(),
            ));
        }
        Ok(StructType(canonicalize_type(s)))
    }
}

/// Renumber a source-only structure so that elements appear in the order of
/// their least label. Type structures are label-rigid, so this needs no
/// search.
fn canonicalize_type(s: &Structure) -> Structure {
    let labels = s.labels_of();
    let mut order: Vec<(&Label, ElemId)> = labels
        .iter()
        .map(|(x, ls)| (ls.iter().next().expect("type element has a label"), *x))
        .collect();
    order.sort();
    let map: BTreeMap<ElemId, ElemId> = order
        .iter()
        .enumerate()
        .map(|(i, (_, x))| (*x, i as ElemId))
        .collect();
    s.relabel(&map)
}

/// Disjoint union `S ⊕ S'`. The constant sets must be disjoint; the left
/// operand keeps its ids and the right block follows it, in ascending order.
pub fn oplus(s: &Structure, t: &Structure) -> Result<Structure> {
    let sort = s.sort.union_disjoint_consts(&t.sort)?;
    let shift = s.domain.iter().next_back().map_or(0, |m| m + 1);
    let map: BTreeMap<ElemId, ElemId> = t.domain.iter().map(|x| (*x, *x + shift)).collect();
    let t2 = t.relabel(&map);
    let mut tuples = s.tuples.clone();
    for (r, ts) in &t2.tuples {
        tuples.entry(r.clone()).or_default().extend(ts.iter().cloned());
    }
    let mut sources = s.sources.clone();
    sources.extend(t2.sources.clone());
    Structure::new(
        sort,
        s.domain.union(&t2.domain).copied().collect(),
        tuples,
        sources,
    )
}

/// The type of a structure: its restriction to the source image, with
/// tuples kept only when entirely within that image, returned in canonical
/// form.
pub fn compute_type(s: &Structure) -> StructType {
    let image: BTreeSet<ElemId> = s.sources.values().copied().collect();
    let tuples = s
        .tuples
        .iter()
        .map(|(r, ts)| {
            (
                r.clone(),
                ts.iter()
                    .filter(|t| t.iter().all(|x| image.contains(x)))
                    .cloned()
                    .collect(),
            )
        })
        .collect();
    let restricted = Structure {
        sort: s.sort.clone(),
        domain: image,
        tuples,
        sources: s.sources.clone(),
    };
    StructType(canonicalize_type(&restricted))
}

/// Result of splitting identified sources apart: the source-separated
/// structure, the label collapse `h0`, and the kept/split label sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SourceSplit {
    pub result: Structure,
    pub h0: BTreeMap<Label, Label>,
    pub c0: BTreeSet<Label>,
    pub c1: BTreeSet<Label>,
}

/// Split sources that were identified: each label class keeps its least
/// label on the original element; every other label of the class moves to a
/// fresh isolated element. Relations are unchanged.
pub fn split_sources(s: &Structure) -> SourceSplit {
    let mut h0: BTreeMap<Label, Label> = BTreeMap::new();
    for (c, x) in &s.sources {
        let min = s
            .sources
            .iter()
            .filter(|(_, y)| *y == x)
            .map(|(d, _)| d.clone())
            .next()
            .expect("label class is nonempty");
        h0.insert(c.clone(), min);
    }
    let c0: BTreeSet<Label> = h0.values().cloned().collect();
    let c1: BTreeSet<Label> = s
        .sort
        .consts
        .iter()
        .filter(|c| !c0.contains(*c))
        .cloned()
        .collect();
    let mut domain = s.domain.clone();
    let mut next = domain.iter().next_back().map_or(0, |m| m + 1);
    let mut sources = BTreeMap::new();
    for c in &c0 {
        sources.insert(c.clone(), s.sources[c]);
    }
    for c in &c1 {
        domain.insert(next);
        sources.insert(c.clone(), next);
        next += 1;
    }
    let result = Structure {
        sort: s.sort.clone(),
        domain,
        tuples: s.tuples.clone(),
        sources,
    };
    debug_assert!(result.is_source_separated());
    SourceSplit { result, h0, c0, c1 }
}

/// Delete the edges between the `a`-source and the `b`-source for every
/// pair `{a,b}` in `pairs` (both directions). Graph sorts only.
pub fn del_edges(g: &Structure, pairs: &BTreeSet<(Label, Label)>) -> Result<Structure> {
    if !g.sort.is_graph() {
        return Err(Error::Sort("del is defined on graph sorts".to_string()));
    }
    let mut drop: BTreeSet<Vec<ElemId>> = BTreeSet::new();
    for (a, b) in pairs {
        let x = g.source(a)?;
        let y = g.source(b)?;
        drop.insert(alloc::vec![x, y]);
        drop.insert(alloc::vec![y, x]);
    }
    let mut out = g.clone();
    let edges = out.tuples.entry(EDGE.to_string()).or_default();
    edges.retain(|t| !drop.contains(t));
    Ok(out)
}

/// Does `g` contain a directed complete bipartite subgraph on `n+n`
/// vertices? With `directed = false` the test runs on the symmetrized edge
/// relation (the undirected underlying graph).
pub fn has_bicomplete(g: &Structure, n: usize, directed: bool) -> Result<bool> {
    if !g.sort.is_graph() && !g.sort.is_port_graph() {
        return Err(Error::Sort(
            "bicomplete test is defined on (port) graph sorts".to_string(),
        ));
    }
    if n == 0 {
        return Err(Error::Invalid("bicomplete test needs n >= 1".to_string()));
    }
    let verts: Vec<ElemId> = g.domain.iter().copied().collect();
    let connects = |u: ElemId, w: ElemId| -> bool {
        if directed {
            g.has_edge(u, w)
        } else {
            g.has_edge(u, w) || g.has_edge(w, u)
        }
    };
    // out-degree style pruning: a vertex useful on the left must reach at
    // least n distinct other vertices
    let reach = |u: ElemId| verts.iter().filter(|w| **w != u && connects(u, **w)).count();
    let left_ok: Vec<ElemId> = verts.iter().copied().filter(|u| reach(*u) >= n).collect();
    if left_ok.len() < n {
        return Ok(false);
    }

    fn extend(
        left_pool: &[ElemId],
        start: usize,
        picked: &mut Vec<ElemId>,
        n: usize,
        verts: &[ElemId],
        connects: &dyn Fn(ElemId, ElemId) -> bool,
    ) -> bool {
        if picked.len() == n {
            // candidates for the right side: adjacent from every picked
            let cands: Vec<ElemId> = verts
                .iter()
                .copied()
                .filter(|w| !picked.contains(w) && picked.iter().all(|u| connects(*u, *w)))
                .collect();
            return cands.len() >= n;
        }
        for i in start..left_pool.len() {
            picked.push(left_pool[i]);
            // prune: common targets must still allow n on the right
            let common = verts
                .iter()
                .filter(|w| !picked.contains(w) && picked.iter().all(|u| connects(*u, **w)))
                .count();
            if common >= n && extend(left_pool, i + 1, picked, n, verts, connects) {
                return true;
            }
            picked.pop();
        }
        false
    }

    let mut picked = Vec::new();
    Ok(extend(&left_ok, 0, &mut picked, n, &verts, &connects))
}

/// Is every induced subgraph `H` of `g` within the edge budget
/// `card(E(H)) <= k card(V(H))`? Checking induced subsets suffices since
/// dropping edges only lowers the left side. Exhaustive over subsets and
/// guarded by `cap` on the vertex count.
pub fn is_uniformly_k_sparse(g: &Structure, k: usize, cap: usize) -> Result<bool> {
    if !g.sort.is_graph() && !g.sort.is_port_graph() {
        return Err(Error::Sort(
            "sparsity test is defined on (port) graph sorts".to_string(),
        ));
    }
    let n = g.domain.len();
    if n > cap {
        return Err(Error::Capacity(format!(
            "sparsity check over {n} vertices exceeds the cap of {cap}"
        )));
    }
    let verts: Vec<ElemId> = g.domain.iter().copied().collect();
    let edges: Vec<(usize, usize)> = g
        .tuples(EDGE)
        .iter()
        .map(|t| {
            (
                verts.iter().position(|v| *v == t[0]).unwrap(),
                verts.iter().position(|v| *v == t[1]).unwrap(),
            )
        })
        .collect();
    for mask in 1u64..(1u64 << n) {
        let count = edges
            .iter()
            .filter(|(a, b)| mask & (1 << a) != 0 && mask & (1 << b) != 0)
            .count();
        if count > k * (mask.count_ones() as usize) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub use canon::{canonical_form, isomorphic};

#[cfg(test)]
mod tests;
