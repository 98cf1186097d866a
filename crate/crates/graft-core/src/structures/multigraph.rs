//! Multigraphs with sources: a two-sorted incidence representation where
//! edges have identities, so source fusion can create parallel edges.

use super::{ElemId, Error, Label, Result, StructType, Structure, EDGE};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Multigraph with sources: vertex ids, edge ids with an incidence map
/// `edge -> (origin, end)`, and labelled source vertices.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct MultiGraph {
    vertices: BTreeSet<ElemId>,
    inc: BTreeMap<ElemId, (ElemId, ElemId)>,
    sources: BTreeMap<Label, ElemId>,
}

impl MultiGraph {
    pub fn new(
        vertices: BTreeSet<ElemId>,
        inc: BTreeMap<ElemId, (ElemId, ElemId)>,
        sources: BTreeMap<Label, ElemId>,
    ) -> Result<MultiGraph> {
        for (e, (x, y)) in &inc {
            if !vertices.contains(x) || !vertices.contains(y) {
                return Err(Error::Invalid(format!(
                    "edge {e} has an endpoint outside the vertex set"
                )));
            }
        }
        if let Some((c, x)) = sources.iter().find(|(_, x)| !vertices.contains(*x)) {
            return Err(Error::Invalid(format!("source {c} = {x} is not a vertex")));
        }
        Ok(MultiGraph {
            vertices,
            inc,
            sources,
        })
    }

    pub fn vertices(&self) -> &BTreeSet<ElemId> {
        &self.vertices
    }

    pub fn inc(&self) -> &BTreeMap<ElemId, (ElemId, ElemId)> {
        &self.inc
    }

    pub fn sources(&self) -> &BTreeMap<Label, ElemId> {
        &self.sources
    }

    pub fn labels(&self) -> BTreeSet<Label> {
        self.sources.keys().cloned().collect()
    }

    pub fn source(&self, c: &str) -> Result<ElemId> {
        self.sources
            .get(c)
            .copied()
            .ok_or_else(|| Error::UnknownSymbol(format!("source label {c}")))
    }

    /// Disjoint union; source label sets must be disjoint. Left operand
    /// keeps its vertex and edge ids, the right block follows.
    pub fn m_oplus(&self, other: &MultiGraph) -> Result<MultiGraph> {
        if let Some(c) = self
            .sources
            .keys()
            .find(|c| other.sources.contains_key(*c))
        {
            return Err(Error::Sort(format!(
                "source label sets overlap on {c:?} in disjoint union"
            )));
        }
        let vshift = self.vertices.iter().next_back().map_or(0, |m| m + 1);
        let eshift = self.inc.keys().next_back().map_or(0, |m| m + 1);
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices.iter().map(|v| v + vshift));
        let mut inc = self.inc.clone();
        inc.extend(
            other
                .inc
                .iter()
                .map(|(e, (x, y))| (e + eshift, (x + vshift, y + vshift))),
        );
        let mut sources = self.sources.clone();
        sources.extend(other.sources.iter().map(|(c, x)| (c.clone(), x + vshift)));
        MultiGraph::new(vertices, inc, sources)
    }

    /// Rename the `a`-source to `b`; `b` must not be a label yet.
    pub fn m_srcren(&self, a: &str, b: &str) -> Result<MultiGraph> {
        let x = self.source(a)?;
        if self.sources.contains_key(b) {
            return Err(Error::Sort(format!("label {b} already present")));
        }
        let mut sources = self.sources.clone();
        sources.remove(a);
        sources.insert(b.to_string(), x);
        MultiGraph::new(self.vertices.clone(), self.inc.clone(), sources)
    }

    /// Forget the `a`-source.
    pub fn m_srcfg(&self, a: &str) -> Result<MultiGraph> {
        self.source(a)?;
        let mut sources = self.sources.clone();
        sources.remove(a);
        MultiGraph::new(self.vertices.clone(), self.inc.clone(), sources)
    }

    /// Fuse the `a`-source and the `b`-source. All edge ids are kept, so
    /// parallel edges may arise. Identity when the two sources coincide.
    pub fn mfus(&self, a: &str, b: &str) -> Result<MultiGraph> {
        let xa = self.source(a)?;
        let xb = self.source(b)?;
        if xa == xb {
            return Ok(self.clone());
        }
        // keep the b-vertex, drop the a-vertex
        let redirect = |v: ElemId| if v == xa { xb } else { v };
        let mut vertices = self.vertices.clone();
        vertices.remove(&xa);
        let inc = self
            .inc
            .iter()
            .map(|(e, (x, y))| (*e, (redirect(*x), redirect(*y))))
            .collect();
        let sources = self
            .sources
            .iter()
            .map(|(c, x)| (c.clone(), redirect(*x)))
            .collect();
        MultiGraph::new(vertices, inc, sources)
    }
}

/// Does the multigraph carry two distinct edges with the same origin and
/// end?
pub fn has_multiedges(g: &MultiGraph) -> bool {
    let mut seen = BTreeSet::new();
    g.inc.values().any(|pair| !seen.insert(*pair))
}

/// Fuse parallel edges into a simple edge relation. This is a homomorphism
/// with respect to disjoint union, source renaming and source forgetting,
/// and maps multigraph fusion onto simple-graph fusion.
pub fn simplify_u(g: &MultiGraph) -> Structure {
    let mut tuples: BTreeMap<String, BTreeSet<Vec<ElemId>>> = BTreeMap::new();
    tuples.insert(
        EDGE.to_string(),
        g.inc.values().map(|(x, y)| alloc::vec![*x, *y]).collect(),
    );
    Structure::new(
        super::Sort::graph(g.sources.keys().cloned()),
        g.vertices.clone(),
        tuples,
        g.sources.clone(),
    )
    .expect("simplified multigraph is well formed")
}

/// The natural injection of a simple graph: one edge id per edge tuple, in
/// tuple order.
pub fn inject_iota(s: &Structure) -> Result<MultiGraph> {
    if !s.sort().is_graph() {
        return Err(Error::Sort("injection needs an edge-only sort".to_string()));
    }
    let inc = s
        .tuples(EDGE)
        .iter()
        .enumerate()
        .map(|(i, t)| (i as ElemId, (t[0], t[1])))
        .collect();
    MultiGraph::new(s.domain().clone(), inc, s.sources().clone())
}

/// Symmetric anti-reflexive set of source label pairs.
pub type EtaRelation = BTreeSet<(Label, Label)>;

fn pair(a: &str, b: &str) -> (Label, Label) {
    if a <= b {
        (a.to_string(), b.to_string())
    } else {
        (b.to_string(), a.to_string())
    }
}

/// The pairs `{a,b}` of distinct labels with distinct values such that some
/// vertex has edges to both sources, or edges from both sources. Defined on
/// simple graphs only; apply [`simplify_u`] first for multigraphs.
pub fn eta(g: &Structure) -> Result<EtaRelation> {
    if !g.sort().is_graph() {
        return Err(Error::Sort("eta needs an edge-only sort".to_string()));
    }
    let mut out = EtaRelation::new();
    let labels: Vec<&Label> = g.sources().keys().collect();
    for (i, a) in labels.iter().enumerate() {
        for b in &labels[i + 1..] {
            let xa = g.sources()[*a];
            let xb = g.sources()[*b];
            if xa == xb {
                continue;
            }
            let witnessed = g.domain().iter().any(|x| {
                (g.has_edge(*x, xa) && g.has_edge(*x, xb))
                    || (g.has_edge(xa, *x) && g.has_edge(xb, *x))
            });
            if witnessed {
                out.insert(pair(a, b));
            }
        }
    }
    Ok(out)
}

/// Decide, from the type and the eta relation alone, whether fusing the
/// `a`- and `b`-sources of any realizing simple graph creates parallel
/// edges: either `{a,b}` is in eta, or fusing the sources inside the type
/// itself already does.
pub fn predict_mfus_multiedge(
    t: &StructType,
    e: &EtaRelation,
    a: &str,
    b: &str,
) -> Result<bool> {
    let s = t.as_structure();
    s.source(a)?;
    let xb = s.source(b)?;
    if a == b {
        return Err(Error::Invalid("labels must differ".to_string()));
    }
    if e.contains(&pair(a, b)) {
        return Ok(true);
    }
    let m = inject_iota(s)?.mfus(a, b)?;
    let _ = xb;
    Ok(has_multiedges(&m))
}

/// The type of a multigraph: restriction to its sources and the edges
/// between them (edge identities kept).
pub fn multigraph_type(g: &MultiGraph) -> MultiGraph {
    let image: BTreeSet<ElemId> = g.sources.values().copied().collect();
    let inc = g
        .inc
        .iter()
        .filter(|(_, (x, y))| image.contains(x) && image.contains(y))
        .map(|(e, p)| (*e, *p))
        .collect();
    MultiGraph {
        vertices: image,
        inc,
        sources: g.sources.clone(),
    }
}
