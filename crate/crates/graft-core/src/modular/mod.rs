//! Modular decomposition of plain directed graphs: strong modules, prime
//! quotients, the decomposition tree, and membership in the closure of a
//! finite set of quotient shapes.
//!
//! A module is a vertex set whose members are indistinguishable from the
//! outside, in both edge directions. The decomposition recurses on the
//! maximal proper strong modules; their quotient is prime, complete,
//! edgeless, or a transitive tournament (the local orders of directed
//! graphs), the last three kept as flat nodes of arbitrary arity.

use crate::error::{Error, Result};
use crate::structures::{canonical_form, isomorphic, ElemId, Structure, EDGE};
use crate::terms::modular_compose;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::ToString;
use alloc::vec::Vec;

/// A modular decomposition tree: leaves are single vertices (with or
/// without a loop), inner nodes carry their quotient graph on vertex set
/// `0..k-1`, with one child per quotient vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ModularTree {
    Leaf { looped: bool },
    Inner {
        quotient: Structure,
        children: Vec<ModularTree>,
    },
}

impl ModularTree {
    /// Re-evaluate the tree through composition.
    pub fn eval(&self) -> Result<Structure> {
        match self {
            ModularTree::Leaf { looped } => {
                if *looped {
                    Structure::graph(1, &[(0, 0)])
                } else {
                    Structure::graph(1, &[])
                }
            }
            ModularTree::Inner { quotient, children } => {
                let parts: Result<Vec<Structure>> =
                    children.iter().map(|c| c.eval()).collect();
                modular_compose(quotient, &parts?)
            }
        }
    }

    /// Every inner quotient in the tree, depth first.
    pub fn quotients(&self) -> Vec<&Structure> {
        match self {
            ModularTree::Leaf { .. } => Vec::new(),
            ModularTree::Inner { quotient, children } => {
                let mut out = alloc::vec![quotient];
                for c in children {
                    out.extend(c.quotients());
                }
                out
            }
        }
    }
}

fn check_plain_graph(g: &Structure) -> Result<()> {
    if !g.sort().is_graph() || !g.sort().consts.is_empty() {
        return Err(Error::Sort(
            "modular decomposition works on plain graphs".to_string(),
        ));
    }
    Ok(())
}

/// Is the vertex set a module: every outside vertex relates uniformly to
/// all members, in both directions?
fn is_module(g: &Structure, members: &BTreeSet<ElemId>) -> bool {
    let mut outside = g.domain().iter().filter(|v| !members.contains(v));
    outside.all(|x| {
        let mut seen_out: Option<bool> = None;
        let mut seen_in: Option<bool> = None;
        members.iter().all(|m| {
            let o = g.has_edge(*x, *m);
            let i = g.has_edge(*m, *x);
            let ok = seen_out.is_none_or(|prev| prev == o)
                && seen_in.is_none_or(|prev| prev == i);
            seen_out = Some(o);
            seen_in = Some(i);
            ok
        })
    })
}

fn all_modules(g: &Structure) -> Vec<BTreeSet<ElemId>> {
    let verts: Vec<ElemId> = g.domain().iter().copied().collect();
    let n = verts.len();
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let members: BTreeSet<ElemId> = verts
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, v)| *v)
            .collect();
        if is_module(g, &members) {
            out.push(members);
        }
    }
    out
}

fn overlaps(a: &BTreeSet<ElemId>, b: &BTreeSet<ElemId>) -> bool {
    !a.is_disjoint(b) && !a.is_subset(b) && !b.is_subset(a)
}

/// The maximal proper strong modules: modules overlapping no other module,
/// maximal among those different from the whole vertex set. For any graph
/// on at least two vertices they partition the vertices.
pub fn find_strong_modules(g: &Structure) -> Result<Vec<BTreeSet<ElemId>>> {
    check_plain_graph(g)?;
    if g.domain().len() > 16 {
        return Err(Error::Capacity(
            "strong-module enumeration beyond 16 vertices".to_string(),
        ));
    }
    let modules = all_modules(g);
    let proper: Vec<BTreeSet<ElemId>> = modules
        .iter()
        .filter(|m| modules.iter().all(|other| !overlaps(m, other)))
        .filter(|m| m.len() < g.domain().len())
        .cloned()
        .collect();
    let maximal: Vec<BTreeSet<ElemId>> = proper
        .iter()
        .filter(|m| {
            proper
                .iter()
                .all(|other| other == *m || !m.is_subset(other))
        })
        .cloned()
        .collect();
    Ok(maximal)
}

/// Is the graph prime: no module other than the singletons and the whole
/// set? Graphs on fewer than two vertices are not prime by convention.
pub fn is_prime(g: &Structure) -> Result<bool> {
    check_plain_graph(g)?;
    let n = g.domain().len();
    if n < 2 {
        return Ok(false);
    }
    if g.domain().len() > 16 {
        return Err(Error::Capacity(
            "primality check beyond 16 vertices".to_string(),
        ));
    }
    Ok(all_modules(g)
        .iter()
        .all(|m| m.len() == 1 || m.len() == n))
}

/// Decompose a nonempty plain graph into its modular tree: the children of
/// each node are its maximal proper strong modules and the quotient is the
/// induced relation between them. Degenerate quotients (complete,
/// edgeless, transitive tournaments) come out flat because their
/// sub-blocks are never strong.
pub fn modular_decomposition(g: &Structure) -> Result<ModularTree> {
    check_plain_graph(g)?;
    let n = g.domain().len();
    if n == 0 {
        return Err(Error::Invalid("nothing to decompose".to_string()));
    }
    if n == 1 {
        let v = *g.domain().iter().next().expect("nonempty");
        return Ok(ModularTree::Leaf {
            looped: g.has_edge(v, v),
        });
    }
    let blocks = find_strong_modules(g)?;
    debug_assert_eq!(
        blocks.iter().map(|b| b.len()).sum::<usize>(),
        n,
        "maximal proper strong modules partition the vertex set"
    );
    // quotient on the blocks, ordered by least member
    let mut ordered = blocks;
    ordered.sort_by_key(|b| *b.iter().next().expect("blocks are nonempty"));
    let mut edges = Vec::new();
    for (i, bi) in ordered.iter().enumerate() {
        for (j, bj) in ordered.iter().enumerate() {
            if i == j {
                continue;
            }
            let x = *bi.iter().next().unwrap();
            let y = *bj.iter().next().unwrap();
            if g.has_edge(x, y) {
                edges.push((i as ElemId, j as ElemId));
            }
        }
    }
    let quotient = Structure::graph(ordered.len() as u32, &edges)?;
    let children: Result<Vec<ModularTree>> = ordered
        .iter()
        .map(|b| modular_decomposition(&induced(g, b)))
        .collect();
    Ok(ModularTree::Inner {
        quotient,
        children: children?,
    })
}

fn induced(g: &Structure, members: &BTreeSet<ElemId>) -> Structure {
    let tuples: BTreeMap<_, BTreeSet<Vec<ElemId>>> = g
        .all_tuples()
        .iter()
        .map(|(r, ts)| {
            (
                r.clone(),
                ts.iter()
                    .filter(|t| t.iter().all(|x| members.contains(x)))
                    .cloned()
                    .collect(),
            )
        })
        .collect();
    Structure::new(g.sort().clone(), members.clone(), tuples, BTreeMap::new())
        .expect("induced subgraph is well formed")
        .compact_ids()
}

/// Does every quotient of the decomposition tree come from the given set
/// of shapes? Flat degenerate quotients count as compositions of their
/// two-vertex versions, so the set is checked up to that closure.
pub fn is_f_graph(g: &Structure, shapes: &[Structure]) -> Result<bool> {
    check_plain_graph(g)?;
    for s in shapes {
        if !is_prime(s)? {
            return Err(Error::Invalid(
                "shape sets may contain only prime graphs".to_string(),
            ));
        }
    }
    let canon_shapes: BTreeSet<Structure> = shapes.iter().map(canonical_form).collect();
    let accepts = |q: &Structure| -> bool {
        if canon_shapes.contains(&canonical_form(q)) {
            return true;
        }
        // flat degenerate nodes reduce to chains of their binary form
        if q.domain().len() > 2 {
            if let Some(binary) = degenerate_binary(q) {
                return canon_shapes.contains(&canonical_form(&binary));
            }
        }
        false
    };
    let tree = modular_decomposition(g)?;
    Ok(tree.quotients().iter().all(|q| accepts(q)))
}

/// For a complete, edgeless or transitive-tournament quotient, its
/// two-vertex generator.
fn degenerate_binary(q: &Structure) -> Option<Structure> {
    let n = q.domain().len() as u32;
    let edgeless = q.tuples(EDGE).is_empty();
    if edgeless {
        return Some(Structure::graph(2, &[]).expect("two vertices"));
    }
    let complete = q
        .domain()
        .iter()
        .all(|x| q.domain().iter().all(|y| x == y || q.has_edge(*x, *y)));
    if complete {
        return Some(Structure::graph(2, &[(0, 1), (1, 0)]).expect("two vertices"));
    }
    // transitive tournament: a linear order
    let mut verts: Vec<ElemId> = q.domain().iter().copied().collect();
    verts.sort_by_key(|v| {
        q.domain()
            .iter()
            .filter(|w| *w != v && q.has_edge(*v, **w))
            .count()
    });
    verts.reverse();
    let linear = (0..n as usize).all(|i| {
        ((i + 1)..n as usize).all(|j| {
            q.has_edge(verts[i], verts[j]) && !q.has_edge(verts[j], verts[i])
        })
    }) && verts.iter().all(|v| !q.has_edge(*v, *v));
    if linear {
        return Some(Structure::graph(2, &[(0, 1)]).expect("two vertices"));
    }
    None
}

/// Exhaustive check that a decomposition is faithful: its evaluation is
/// isomorphic to the graph it came from.
pub fn decomposition_roundtrip(g: &Structure) -> Result<bool> {
    let tree = modular_decomposition(g)?;
    Ok(isomorphic(&tree.eval()?, g))
}

#[cfg(test)]
mod tests;
