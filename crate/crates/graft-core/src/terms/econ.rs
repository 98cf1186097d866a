//! Ordered graphs and the six-operation two-sorted signature that
//! generates all plain undirected loop-free graphs through them.

use crate::structures::{canonical_form, ElemId, Structure, EDGE};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// An undirected loop-free graph whose vertices are linearly ordered: ids
/// `0..n-1` in id order, edges stored as normalized pairs.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct OrderedGraph {
    n: u32,
    edges: BTreeSet<(u32, u32)>,
}

impl OrderedGraph {
    pub fn empty() -> OrderedGraph {
        OrderedGraph {
            n: 0,
            edges: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.n as usize
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn renumber(&self, map: impl Fn(u32) -> u32) -> OrderedGraph {
        OrderedGraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|(a, b)| {
                    let (x, y) = (map(*a), map(*b));
                    (x.min(y), x.max(y))
                })
                .collect(),
        }
    }

    /// Add one vertex as the new least element.
    pub fn add_vertex(&self) -> OrderedGraph {
        let mut shifted = self.renumber(|v| v + 1);
        shifted.n = self.n + 1;
        shifted
    }

    /// Add an undirected edge between the two least vertices; identity
    /// below two vertices.
    pub fn add_edge_two_least(&self) -> OrderedGraph {
        let mut out = self.clone();
        if out.n >= 2 {
            out.edges.insert((0, 1));
        }
        out
    }

    /// Rotate the order by one position; identity below two vertices.
    pub fn circular_shift(&self) -> OrderedGraph {
        if self.n < 2 {
            return self.clone();
        }
        let n = self.n;
        self.renumber(|v| (v + 1) % n)
    }

    /// Swap the two least vertices; identity below two vertices.
    pub fn swap_two_least(&self) -> OrderedGraph {
        if self.n < 2 {
            return self.clone();
        }
        self.renumber(|v| match v {
            0 => 1,
            1 => 0,
            other => other,
        })
    }

    /// Forget the order: the plain graph with each undirected edge stored
    /// as a symmetric pair of directed edges.
    pub fn forget_order(&self) -> Structure {
        let mut tuples: BTreeMap<String, BTreeSet<Vec<ElemId>>> = BTreeMap::new();
        let mut set = BTreeSet::new();
        for (a, b) in &self.edges {
            set.insert(alloc::vec![*a, *b]);
            set.insert(alloc::vec![*b, *a]);
        }
        tuples.insert(EDGE.to_string(), set);
        Structure::new(
            crate::structures::Sort::graph([]),
            (0..self.n).collect(),
            tuples,
            BTreeMap::new(),
        )
        .expect("ordered graph is well formed")
    }
}

/// Breadth-first closure of the signature up to the vertex bound: every
/// ordered graph reachable from the empty graph, reported as the set of
/// canonical plain graphs their order-forgetting produces.
pub fn econ_reachable_graphs(max_vertices: usize) -> BTreeSet<Structure> {
    let mut seen: BTreeSet<OrderedGraph> = BTreeSet::new();
    let mut frontier: Vec<OrderedGraph> = alloc::vec![OrderedGraph::empty()];
    seen.insert(OrderedGraph::empty());
    while let Some(g) = frontier.pop() {
        let mut nexts = alloc::vec![
            g.add_edge_two_least(),
            g.circular_shift(),
            g.swap_two_least(),
        ];
        if g.len() < max_vertices {
            nexts.push(g.add_vertex());
        }
        for h in nexts {
            if seen.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    seen.into_iter()
        .map(|g| canonical_form(&g.forget_order()))
        .collect()
}
