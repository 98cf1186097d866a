//! Many-sorted signatures of graph and structure operations, terms over
//! them, type checking and evaluation.
//!
//! One term grammar covers all signatures; each signature admits a subset
//! of the node kinds and the type checker arbitrates overloaded names by
//! sort inference. Evaluation is the unique homomorphism into the chosen
//! algebra: structures with sources, graphs with ports, multigraphs, or
//! ordered graphs.

mod cwd;
mod econ;
mod families;
mod ops;
mod sexpr;

pub use cwd::{cwd_exact, edgeless_apart_from_loops};
pub use econ::{econ_reachable_graphs, OrderedGraph};
pub use families::{clique_term, path_term, vr_term_for_modular};
pub use ops::{
    derive_parallel_term, m_parallel, modular_compose, otimes, parallel_compose,
    powerset_port_form,
};
pub use sexpr::{parse_term, print_term};

use crate::error::{Error, Result};
use crate::qfd::{self, QfdScheme};
use crate::structures::{MultiGraph, Sort, Structure, EDGE};
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub type Label = crate::structures::Label;

/// A term over the operation grammar. Which nodes are admissible depends
/// on the signature it is checked against.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AlgTerm {
    // constants
    /// Single vertex carrying one source label.
    Src(Label),
    /// Two vertices with an edge from the first, sources `a`, `b`.
    EdgeConst(Label, Label),
    /// Single vertex with a loop, one source label.
    LoopConst(Label),
    /// Single vertex that is a `p`-port.
    Port(Label),
    /// Single `p`-port vertex with a loop.
    PortLoop(Label),
    /// Single anonymous vertex.
    Vertex,
    /// Single anonymous vertex with a loop.
    VertexLoop,
    /// The empty ordered graph.
    EconEmpty,
    // binary operations
    Oplus(Box<AlgTerm>, Box<AlgTerm>),
    Parallel(Box<AlgTerm>, Box<AlgTerm>),
    /// Parallel composition followed by forgetting all sources.
    BoxC(Box<AlgTerm>, Box<AlgTerm>),
    /// Disjoint union followed by the edge additions of the pair list.
    Otimes(Vec<(Label, Label)>, Box<AlgTerm>, Box<AlgTerm>),
    // unary operations on structures with sources
    SrcRen(Label, Label, Box<AlgTerm>),
    SrcFg(Label, Box<AlgTerm>),
    SrcFgAll(Box<AlgTerm>),
    Fus(Label, Label, Box<AlgTerm>),
    /// Fusion followed by forgetting the first label.
    FusTo(Label, Label, Box<AlgTerm>),
    /// Multigraph fusion, keeping all edge identities.
    MFus(Label, Label, Box<AlgTerm>),
    /// Delete edges between the named source pairs.
    Del(Vec<(Label, Label)>, Box<AlgTerm>),
    /// Fuse all the named source pairs, in any order.
    FusRel(Vec<(Label, Label)>, Box<AlgTerm>),
    // unary operations on graphs with ports
    Add(Label, Label, Box<AlgTerm>),
    Ren(Label, Label, Box<AlgTerm>),
    Fg(Label, Box<AlgTerm>),
    Mdf(Vec<(Label, Label)>, Box<AlgTerm>),
    Mark(Label, Box<AlgTerm>),
    /// A named scheme from the evaluation registry.
    ApplyScheme(String, Box<AlgTerm>),
    // ordered-graph operations
    EconForget(Box<AlgTerm>),
    EconAddVertex(Box<AlgTerm>),
    EconAddEdge(Box<AlgTerm>),
    EconShift(Box<AlgTerm>),
    EconSwap(Box<AlgTerm>),
}

impl AlgTerm {
    pub fn children(&self) -> Vec<&AlgTerm> {
        use AlgTerm::*;
        match self {
            Src(..) | EdgeConst(..) | LoopConst(..) | Port(..) | PortLoop(..) | Vertex
            | VertexLoop | EconEmpty => alloc::vec![],
            Oplus(a, b) | Parallel(a, b) | BoxC(a, b) | Otimes(_, a, b) => alloc::vec![&**a, &**b],
            SrcRen(_, _, t) | SrcFg(_, t) | SrcFgAll(t) | Fus(_, _, t) | FusTo(_, _, t)
            | MFus(_, _, t) | Del(_, t) | FusRel(_, t) | Add(_, _, t) | Ren(_, _, t)
            | Fg(_, t) | Mdf(_, t) | Mark(_, t) | ApplyScheme(_, t) | EconForget(t)
            | EconAddVertex(t) | EconAddEdge(t) | EconShift(t) | EconSwap(t) => {
                alloc::vec![&**t]
            }
        }
    }

    /// Number of leaves (constants) in the term.
    pub fn leaf_count(&self) -> usize {
        let kids = self.children();
        if kids.is_empty() {
            1
        } else {
            kids.iter().map(|k| k.leaf_count()).sum()
        }
    }
}

/// The signatures terms can be checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignatureDef {
    /// Structures with sources: disjoint union and every quantifier-free
    /// definable unary operation.
    S,
    /// Graphs with ports: disjoint union, edge addition and port
    /// redefinition.
    Vr,
    /// The same enriched with all unary qfd operations between port-graph
    /// sorts (marking, named schemes).
    VrPlus,
    /// Only disjoint union, edge addition and port renaming; the algebra
    /// whose terms define clique-width.
    VrPi,
    /// Typed union-with-additions, port forgetting and renaming.
    Nlc,
    /// Graphs with sources: disjoint union, source renaming, forgetting
    /// and fusion.
    Hr,
    /// As `Hr` with parallel composition instead of disjoint union.
    HrPar,
    /// Source-separated variant: fusion only in its separation-preserving
    /// form.
    HrSep,
    /// Source-separated variant with parallel composition.
    HrSepPar,
    /// Parallel composition and forget-all only.
    HrFg,
    /// Parallel composition and source renaming only.
    HrRen,
    /// Only the compose-and-forget-all binary operations.
    Cs,
    /// Multigraphs with sources; fusion keeps edge identities.
    Hrm,
    /// The six-operation two-sorted signature generating all plain
    /// undirected graphs through ordered graphs.
    Econ,
}

/// Evaluation context: a signature plus named schemes usable through
/// `apply-scheme` nodes.
#[derive(Clone, Debug, Default)]
pub struct SchemeRegistry {
    schemes: BTreeMap<String, QfdScheme>,
}

impl SchemeRegistry {
    pub fn new() -> SchemeRegistry {
        SchemeRegistry::default()
    }

    pub fn insert(&mut self, name: &str, scheme: QfdScheme) {
        self.schemes.insert(name.to_string(), scheme);
    }

    pub fn get(&self, name: &str) -> Result<&QfdScheme> {
        self.schemes
            .get(name)
            .ok_or_else(|| Error::UnknownSymbol(format!("scheme {name}")))
    }
}

/// The sort of a term: a structure sort, a multigraph label set, or one of
/// the two ordered-graph sorts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TermSort {
    St(Sort),
    Multi(BTreeSet<Label>),
    EconOrdered,
}

impl core::fmt::Display for TermSort {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            TermSort::St(s) => write!(f, "{s}"),
            TermSort::Multi(c) => write!(f, "multi{c:?}"),
            TermSort::EconOrdered => write!(f, "ordered"),
        }
    }
}

/// A value of one of the algebras.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlgValue {
    St(Structure),
    Multi(MultiGraph),
    Ordered(econ::OrderedGraph),
}

impl AlgValue {
    pub fn structure(&self) -> Result<&Structure> {
        match self {
            AlgValue::St(s) => Ok(s),
            _ => Err(Error::Invalid("expected a structure value".to_string())),
        }
    }

    pub fn multigraph(&self) -> Result<&MultiGraph> {
        match self {
            AlgValue::Multi(m) => Ok(m),
            _ => Err(Error::Invalid("expected a multigraph value".to_string())),
        }
    }
}

fn ill<T>(path: &[usize], msg: String) -> Result<T> {
    Err(Error::IllTyped {
        path: path.to_vec(),
        msg,
    })
}

/// Node kinds for admission checks.
fn node_admitted(sig: &SignatureDef, t: &AlgTerm) -> bool {
    use AlgTerm::*;
    use SignatureDef::*;
    match sig {
        S => matches!(
            t,
            Src(..)
                | EdgeConst(..)
                | LoopConst(..)
                | Port(..)
                | PortLoop(..)
                | Vertex
                | VertexLoop
                | Oplus(..)
                | SrcRen(..)
                | SrcFg(..)
                | SrcFgAll(..)
                | Fus(..)
                | FusTo(..)
                | Del(..)
                | FusRel(..)
                | Add(..)
                | Ren(..)
                | Fg(..)
                | Mdf(..)
                | Mark(..)
                | ApplyScheme(..)
        ),
        Vr => matches!(
            t,
            Port(..) | PortLoop(..) | Vertex | VertexLoop | Oplus(..) | Add(..) | Ren(..)
                | Fg(..) | Mdf(..)
        ),
        VrPlus => matches!(
            t,
            Port(..)
                | PortLoop(..)
                | Vertex
                | VertexLoop
                | Oplus(..)
                | Add(..)
                | Ren(..)
                | Fg(..)
                | Mdf(..)
                | Mark(..)
                | ApplyScheme(..)
        ),
        VrPi => matches!(
            t,
            Port(..) | PortLoop(..) | Oplus(..) | Add(..) | Ren(..)
        ),
        Nlc => matches!(
            t,
            Port(..) | PortLoop(..) | Otimes(..) | Ren(..) | Fg(..)
        ),
        Hr => matches!(
            t,
            Src(..)
                | EdgeConst(..)
                | LoopConst(..)
                | Vertex
                | VertexLoop
                | Oplus(..)
                | SrcRen(..)
                | SrcFg(..)
                | SrcFgAll(..)
                | Fus(..)
                | FusTo(..)
                | Del(..)
                | FusRel(..)
        ),
        HrPar => matches!(
            t,
            Src(..) | EdgeConst(..) | LoopConst(..) | Vertex | VertexLoop | Parallel(..)
                | SrcRen(..) | SrcFg(..) | Fus(..)
        ),
        HrSep => matches!(
            t,
            Src(..) | EdgeConst(..) | LoopConst(..) | Vertex | VertexLoop | Oplus(..)
                | SrcRen(..) | SrcFg(..) | FusTo(..)
        ),
        HrSepPar => matches!(
            t,
            Src(..) | EdgeConst(..) | LoopConst(..) | Vertex | VertexLoop | Parallel(..)
                | SrcRen(..) | SrcFg(..) | FusTo(..)
        ),
        HrFg => matches!(
            t,
            Src(..) | EdgeConst(..) | LoopConst(..) | Vertex | VertexLoop | Parallel(..)
                | SrcFgAll(..)
        ),
        HrRen => matches!(
            t,
            Src(..) | EdgeConst(..) | LoopConst(..) | Vertex | VertexLoop | Parallel(..)
                | SrcRen(..)
        ),
        Cs => matches!(
            t,
            Src(..) | EdgeConst(..) | LoopConst(..) | Vertex | VertexLoop | BoxC(..)
        ),
        Hrm => matches!(
            t,
            Src(..) | EdgeConst(..) | LoopConst(..) | Vertex | VertexLoop | Oplus(..)
                | Parallel(..) | SrcRen(..) | SrcFg(..) | MFus(..)
        ),
        Econ => matches!(
            t,
            EconEmpty
                | EconForget(..)
                | EconAddVertex(..)
                | EconAddEdge(..)
                | EconShift(..)
                | EconSwap(..)
        ),
    }
}

/// Compute the sort of a term under a signature, or report the first
/// ill-typed node with its path from the root.
pub fn typecheck_term(t: &AlgTerm, sig: &SignatureDef, reg: &SchemeRegistry) -> Result<TermSort> {
    infer(t, sig, reg, &mut Vec::new())
}

fn graph_sort_of(ts: &TermSort, path: &[usize]) -> Result<Sort> {
    match ts {
        TermSort::St(s) => Ok(s.clone()),
        _ => ill(path, "expected a structure-sorted subterm".to_string()),
    }
}

fn infer(
    t: &AlgTerm,
    sig: &SignatureDef,
    reg: &SchemeRegistry,
    path: &mut Vec<usize>,
) -> Result<TermSort> {
    use AlgTerm::*;
    if !node_admitted(sig, t) {
        return ill(path, format!("node not admitted by the {sig:?} signature"));
    }
    let multi = matches!(sig, SignatureDef::Hrm);
    match t {
        Src(a) => Ok(if multi {
            TermSort::Multi([a.clone()].into_iter().collect())
        } else {
            TermSort::St(Sort::graph([a.clone()]))
        }),
        EdgeConst(a, b) => {
            if a == b {
                return ill(path, "edge constant needs two distinct labels".to_string());
            }
            Ok(if multi {
                TermSort::Multi([a.clone(), b.clone()].into_iter().collect())
            } else {
                TermSort::St(Sort::graph([a.clone(), b.clone()]))
            })
        }
        LoopConst(a) => Ok(if multi {
            TermSort::Multi([a.clone()].into_iter().collect())
        } else {
            TermSort::St(Sort::graph([a.clone()]))
        }),
        Port(p) | PortLoop(p) => Ok(TermSort::St(Sort::ports([p.clone()]))),
        Vertex | VertexLoop => Ok(if multi {
            TermSort::Multi(BTreeSet::new())
        } else {
            TermSort::St(Sort::graph([]))
        }),
        EconEmpty => Ok(TermSort::EconOrdered),
        Oplus(a, b) => {
            path.push(0);
            let sa = infer(a, sig, reg, path)?;
            path.pop();
            path.push(1);
            let sb = infer(b, sig, reg, path)?;
            path.pop();
            match (sa, sb) {
                (TermSort::St(x), TermSort::St(y)) => match x.union_disjoint_consts(&y) {
                    Ok(u) => Ok(TermSort::St(u)),
                    Err(e) => ill(path, format!("{e}")),
                },
                (TermSort::Multi(x), TermSort::Multi(y)) => {
                    if let Some(c) = x.intersection(&y).next() {
                        return ill(path, format!("source label {c} on both sides"));
                    }
                    Ok(TermSort::Multi(x.union(&y).cloned().collect()))
                }
                _ => ill(path, "mismatched operand kinds".to_string()),
            }
        }
        Parallel(a, b) => {
            path.push(0);
            let sa = infer(a, sig, reg, path)?;
            path.pop();
            path.push(1);
            let sb = infer(b, sig, reg, path)?;
            path.pop();
            if let (TermSort::Multi(x), TermSort::Multi(y)) = (&sa, &sb) {
                return Ok(TermSort::Multi(x.union(y).cloned().collect()));
            }
            let sa = graph_sort_of(&sa, path)?;
            let sb = graph_sort_of(&sb, path)?;
            let mut rels = sa.rels.clone();
            for (r, ar) in &sb.rels {
                if let Some(prev) = rels.insert(r.clone(), *ar) {
                    if prev != *ar {
                        return ill(path, format!("relation {r} with conflicting arities"));
                    }
                }
            }
            Ok(TermSort::St(Sort {
                rels,
                consts: sa.consts.union(&sb.consts).cloned().collect(),
            }))
        }
        BoxC(a, b) => {
            path.push(0);
            let sa = graph_sort_of(&infer(a, sig, reg, path)?, path)?;
            path.pop();
            path.push(1);
            let sb = graph_sort_of(&infer(b, sig, reg, path)?, path)?;
            path.pop();
            if sa != sb {
                return ill(path, format!("compose needs equal sorts, got {sa} and {sb}"));
            }
            Ok(TermSort::St(Sort {
                rels: sa.rels.clone(),
                consts: BTreeSet::new(),
            }))
        }
        Otimes(j, a, b) => {
            path.push(0);
            let sa = graph_sort_of(&infer(a, sig, reg, path)?, path)?;
            path.pop();
            path.push(1);
            let sb = graph_sort_of(&infer(b, sig, reg, path)?, path)?;
            path.pop();
            let pa = sa.port_labels();
            let pb = sb.port_labels();
            if let Some(p) = pa.intersection(&pb).next() {
                return ill(path, format!("port label {p} on both sides of the product"));
            }
            for (p, q) in j {
                let ok = (pa.contains(p) && pb.contains(q)) || (pb.contains(p) && pa.contains(q));
                if !ok {
                    return ill(path, format!("pair ({p},{q}) does not cross the two sides"));
                }
            }
            match sa.union_disjoint_consts(&sb) {
                Ok(u) => Ok(TermSort::St(u)),
                Err(e) => ill(path, format!("{e}")),
            }
        }
        SrcRen(a, b, inner) => {
            path.push(0);
            let s = infer(inner, sig, reg, path)?;
            path.pop();
            match s {
                TermSort::St(s) => {
                    if !s.consts.contains(a) {
                        return ill(path, format!("no source {a} to rename"));
                    }
                    if s.consts.contains(b) {
                        return ill(path, format!("target label {b} already present"));
                    }
                    let mut consts = s.consts.clone();
                    consts.remove(a);
                    consts.insert(b.clone());
                    Ok(TermSort::St(Sort {
                        rels: s.rels,
                        consts,
                    }))
                }
                TermSort::Multi(mut c) => {
                    if !c.remove(a) {
                        return ill(path, format!("no source {a} to rename"));
                    }
                    if !c.insert(b.clone()) {
                        return ill(path, format!("target label {b} already present"));
                    }
                    Ok(TermSort::Multi(c))
                }
                _ => ill(path, "source renaming needs a (multi)graph".to_string()),
            }
        }
        SrcFg(a, inner) => {
            path.push(0);
            let s = infer(inner, sig, reg, path)?;
            path.pop();
            match s {
                TermSort::St(s) => {
                    if !s.consts.contains(a) {
                        return ill(path, format!("no source {a} to forget"));
                    }
                    let mut consts = s.consts.clone();
                    consts.remove(a);
                    Ok(TermSort::St(Sort {
                        rels: s.rels,
                        consts,
                    }))
                }
                TermSort::Multi(mut c) => {
                    if !c.remove(a) {
                        return ill(path, format!("no source {a} to forget"));
                    }
                    Ok(TermSort::Multi(c))
                }
                _ => ill(path, "source forgetting needs a (multi)graph".to_string()),
            }
        }
        SrcFgAll(inner) => {
            path.push(0);
            let s = graph_sort_of(&infer(inner, sig, reg, path)?, path)?;
            path.pop();
            Ok(TermSort::St(Sort {
                rels: s.rels,
                consts: BTreeSet::new(),
            }))
        }
        Fus(a, b, inner) | FusTo(a, b, inner) => {
            if a == b {
                return ill(path, "fusion needs two distinct labels".to_string());
            }
            path.push(0);
            let s = graph_sort_of(&infer(inner, sig, reg, path)?, path)?;
            path.pop();
            for l in [a, b] {
                if !s.consts.contains(l) {
                    return ill(path, format!("no source {l} to fuse"));
                }
            }
            let consts = if matches!(t, FusTo(..)) {
                s.consts.iter().filter(|c| *c != a).cloned().collect()
            } else {
                s.consts.clone()
            };
            Ok(TermSort::St(Sort {
                rels: s.rels,
                consts,
            }))
        }
        MFus(a, b, inner) => {
            if a == b {
                return ill(path, "fusion needs two distinct labels".to_string());
            }
            path.push(0);
            let s = infer(inner, sig, reg, path)?;
            path.pop();
            match s {
                TermSort::Multi(c) => {
                    for l in [a, b] {
                        if !c.contains(l) {
                            return ill(path, format!("no source {l} to fuse"));
                        }
                    }
                    Ok(TermSort::Multi(c))
                }
                _ => ill(path, "multigraph fusion needs a multigraph".to_string()),
            }
        }
        Del(pairs, inner) | FusRel(pairs, inner) => {
            path.push(0);
            let s = graph_sort_of(&infer(inner, sig, reg, path)?, path)?;
            path.pop();
            for (a, b) in pairs {
                if a == b {
                    return ill(path, "pair list must be anti-reflexive".to_string());
                }
                for l in [a, b] {
                    if !s.consts.contains(l) {
                        return ill(path, format!("label {l} not in the sort"));
                    }
                }
            }
            Ok(TermSort::St(s))
        }
        Add(p, q, inner) => {
            if p == q {
                return ill(path, "edge addition needs two distinct labels".to_string());
            }
            path.push(0);
            let s = graph_sort_of(&infer(inner, sig, reg, path)?, path)?;
            path.pop();
            if !s.is_port_graph() {
                return ill(path, "edge addition needs a port graph".to_string());
            }
            let mut ports = s.port_labels();
            ports.insert(p.clone());
            ports.insert(q.clone());
            Ok(TermSort::St(Sort::ports(ports)))
        }
        Ren(p, q, inner) => {
            if p == q {
                return ill(path, "port renaming needs two distinct labels".to_string());
            }
            path.push(0);
            let s = graph_sort_of(&infer(inner, sig, reg, path)?, path)?;
            path.pop();
            if !s.is_port_graph() {
                return ill(path, "port renaming needs a port graph".to_string());
            }
            let mut ports = s.port_labels();
            ports.remove(p);
            ports.insert(q.clone());
            Ok(TermSort::St(Sort::ports(ports)))
        }
        Fg(p, inner) => {
            path.push(0);
            let s = graph_sort_of(&infer(inner, sig, reg, path)?, path)?;
            path.pop();
            if !s.is_port_graph() {
                return ill(path, "port forgetting needs a port graph".to_string());
            }
            let mut ports = s.port_labels();
            ports.remove(p);
            Ok(TermSort::St(Sort::ports(ports)))
        }
        Mdf(d, inner) => {
            path.push(0);
            let s = graph_sort_of(&infer(inner, sig, reg, path)?, path)?;
            path.pop();
            if !s.is_port_graph() {
                return ill(path, "port redefinition needs a port graph".to_string());
            }
            let range: BTreeSet<Label> = d.iter().map(|(_, q)| q.clone()).collect();
            Ok(TermSort::St(Sort::ports(range)))
        }
        Mark(i, inner) => {
            path.push(0);
            let s = graph_sort_of(&infer(inner, sig, reg, path)?, path)?;
            path.pop();
            if !s.is_graph() {
                return ill(path, "marking needs a port-free graph".to_string());
            }
            Ok(TermSort::St(Sort::ports([i.clone()])))
        }
        ApplyScheme(name, inner) => {
            path.push(0);
            let s = graph_sort_of(&infer(inner, sig, reg, path)?, path)?;
            path.pop();
            let scheme = match reg.get(name) {
                Ok(s) => s,
                Err(e) => return ill(path, format!("{e}")),
            };
            if *scheme.input() != s {
                return ill(
                    path,
                    format!("scheme {name} expects {}, got {s}", scheme.input()),
                );
            }
            Ok(TermSort::St(scheme.output().clone()))
        }
        EconForget(inner) => {
            path.push(0);
            let s = infer(inner, sig, reg, path)?;
            path.pop();
            match s {
                TermSort::EconOrdered => Ok(TermSort::St(Sort::graph([]))),
                other => ill(path, format!("expected an ordered graph, got {other}")),
            }
        }
        EconAddVertex(inner) | EconAddEdge(inner) | EconShift(inner) | EconSwap(inner) => {
            path.push(0);
            let s = infer(inner, sig, reg, path)?;
            path.pop();
            match s {
                TermSort::EconOrdered => Ok(TermSort::EconOrdered),
                other => ill(path, format!("expected an ordered graph, got {other}")),
            }
        }
    }
}

fn single_vertex_graph(labels: &[&Label], with_loop: bool) -> Structure {
    let sort = Sort::graph(labels.iter().map(|l| (*l).clone()));
    let mut tuples: BTreeMap<String, BTreeSet<Vec<u32>>> = BTreeMap::new();
    if with_loop {
        tuples.insert(EDGE.to_string(), [alloc::vec![0, 0]].into_iter().collect());
    }
    Structure::new(
        sort,
        [0].into_iter().collect(),
        tuples,
        labels.iter().map(|l| ((*l).clone(), 0)).collect(),
    )
    .expect("constant graph is well formed")
}

fn single_port_graph(p: &Label, with_loop: bool) -> Structure {
    let sort = Sort::ports([p.clone()]);
    let mut tuples: BTreeMap<String, BTreeSet<Vec<u32>>> = BTreeMap::new();
    tuples.insert(p.clone(), [alloc::vec![0]].into_iter().collect());
    if with_loop {
        tuples.insert(EDGE.to_string(), [alloc::vec![0, 0]].into_iter().collect());
    }
    Structure::new(sort, [0].into_iter().collect(), tuples, BTreeMap::new())
        .expect("constant graph is well formed")
}

fn st_to_multi(s: &Structure) -> Result<MultiGraph> {
    crate::structures::inject_iota(s)
}

/// Lift a port-graph value into a larger port sort through the inclusion
/// scheme.
fn lift_ports(s: &Structure, target: &Sort) -> Result<Structure> {
    if s.sort() == target {
        return Ok(s.clone());
    }
    qfd::apply_scheme(&qfd::inclusion(s.sort(), target)?, s)
}

/// Evaluate a term under a signature. The term is type checked first; the
/// value is the image of the unique homomorphism from the term algebra.
pub fn eval_term(t: &AlgTerm, sig: &SignatureDef, reg: &SchemeRegistry) -> Result<AlgValue> {
    typecheck_term(t, sig, reg)?;
    eval_unchecked(t, sig, reg)
}

fn eval_unchecked(t: &AlgTerm, sig: &SignatureDef, reg: &SchemeRegistry) -> Result<AlgValue> {
    use AlgTerm::*;
    let multi = matches!(sig, SignatureDef::Hrm);
    let value = match t {
        Src(a) => {
            let g = single_vertex_graph(&[a], false);
            if multi {
                AlgValue::Multi(st_to_multi(&g)?)
            } else {
                AlgValue::St(g)
            }
        }
        LoopConst(a) => {
            let g = single_vertex_graph(&[a], true);
            if multi {
                AlgValue::Multi(st_to_multi(&g)?)
            } else {
                AlgValue::St(g)
            }
        }
        EdgeConst(a, b) => {
            let g = Structure::graph_with_sources(2, &[(0, 1)], &[(a, 0), (b, 1)])?;
            if multi {
                AlgValue::Multi(st_to_multi(&g)?)
            } else {
                AlgValue::St(g)
            }
        }
        Vertex => {
            let g = Structure::graph(1, &[])?;
            if multi {
                AlgValue::Multi(st_to_multi(&g)?)
            } else {
                AlgValue::St(g)
            }
        }
        VertexLoop => {
            let g = Structure::graph(1, &[(0, 0)])?;
            if multi {
                AlgValue::Multi(st_to_multi(&g)?)
            } else {
                AlgValue::St(g)
            }
        }
        Port(p) => AlgValue::St(single_port_graph(p, false)),
        PortLoop(p) => AlgValue::St(single_port_graph(p, true)),
        EconEmpty => AlgValue::Ordered(econ::OrderedGraph::empty()),
        Oplus(a, b) => {
            let va = eval_unchecked(a, sig, reg)?;
            let vb = eval_unchecked(b, sig, reg)?;
            match (va, vb) {
                (AlgValue::St(x), AlgValue::St(y)) => {
                    AlgValue::St(crate::structures::oplus(&x, &y)?)
                }
                (AlgValue::Multi(x), AlgValue::Multi(y)) => AlgValue::Multi(x.m_oplus(&y)?),
                _ => return Err(Error::Invalid("mismatched operand kinds".to_string())),
            }
        }
        Parallel(a, b) => {
            let va = eval_unchecked(a, sig, reg)?;
            let vb = eval_unchecked(b, sig, reg)?;
            match (va, vb) {
                (AlgValue::St(x), AlgValue::St(y)) => {
                    AlgValue::St(ops::parallel_compose(&x, &y)?)
                }
                (AlgValue::Multi(x), AlgValue::Multi(y)) => {
                    AlgValue::Multi(ops::m_parallel(&x, &y)?)
                }
                _ => return Err(Error::Invalid("mismatched operand kinds".to_string())),
            }
        }
        BoxC(a, b) => {
            let va = eval_unchecked(a, sig, reg)?.structure()?.clone();
            let vb = eval_unchecked(b, sig, reg)?.structure()?.clone();
            let par = ops::parallel_compose(&va, &vb)?;
            AlgValue::St(ops::forget_all_sources(&par)?)
        }
        Otimes(j, a, b) => {
            let va = eval_unchecked(a, sig, reg)?.structure()?.clone();
            let vb = eval_unchecked(b, sig, reg)?.structure()?.clone();
            AlgValue::St(ops::otimes(j, &va, &vb)?)
        }
        SrcRen(a, b, inner) => match eval_unchecked(inner, sig, reg)? {
            AlgValue::St(s) => {
                AlgValue::St(qfd::apply_scheme(&qfd::srcren(s.sort(), a, b)?, &s)?)
            }
            AlgValue::Multi(m) => AlgValue::Multi(m.m_srcren(a, b)?),
            _ => return Err(Error::Invalid("bad operand".to_string())),
        },
        SrcFg(a, inner) => match eval_unchecked(inner, sig, reg)? {
            AlgValue::St(s) => AlgValue::St(qfd::apply_scheme(&qfd::srcfg(s.sort(), a)?, &s)?),
            AlgValue::Multi(m) => AlgValue::Multi(m.m_srcfg(a)?),
            _ => return Err(Error::Invalid("bad operand".to_string())),
        },
        SrcFgAll(inner) => {
            let s = eval_unchecked(inner, sig, reg)?.structure()?.clone();
            AlgValue::St(ops::forget_all_sources(&s)?)
        }
        Fus(a, b, inner) => {
            let s = eval_unchecked(inner, sig, reg)?.structure()?.clone();
            AlgValue::St(qfd::apply_scheme(&qfd::fus(s.sort(), a, b)?, &s)?)
        }
        FusTo(a, b, inner) => {
            let s = eval_unchecked(inner, sig, reg)?.structure()?.clone();
            let fused = qfd::apply_scheme(&qfd::fus(s.sort(), a, b)?, &s)?;
            AlgValue::St(qfd::apply_scheme(&qfd::srcfg(fused.sort(), a)?, &fused)?)
        }
        MFus(a, b, inner) => {
            let m = eval_unchecked(inner, sig, reg)?.multigraph()?.clone();
            AlgValue::Multi(m.mfus(a, b)?)
        }
        Del(pairs, inner) => {
            let s = eval_unchecked(inner, sig, reg)?.structure()?.clone();
            let set: BTreeSet<(Label, Label)> = pairs.iter().cloned().collect();
            AlgValue::St(crate::structures::del_edges(&s, &set)?)
        }
        FusRel(pairs, inner) => {
            let mut s = eval_unchecked(inner, sig, reg)?.structure()?.clone();
            for (a, b) in pairs {
                s = qfd::apply_scheme(&qfd::fus(s.sort(), a, b)?, &s)?;
            }
            AlgValue::St(s)
        }
        Add(p, q, inner) => {
            let s = eval_unchecked(inner, sig, reg)?.structure()?.clone();
            let mut ports = s.sort().port_labels();
            ports.insert(p.clone());
            ports.insert(q.clone());
            let lifted = lift_ports(&s, &Sort::ports(ports))?;
            AlgValue::St(qfd::apply_scheme(&qfd::add_ports(lifted.sort(), p, q)?, &lifted)?)
        }
        Ren(p, q, inner) => {
            let s = eval_unchecked(inner, sig, reg)?.structure()?.clone();
            let mut ports = s.sort().port_labels();
            ports.insert(p.clone());
            let lifted = lift_ports(&s, &Sort::ports(ports))?;
            AlgValue::St(qfd::apply_scheme(&qfd::ren_port(lifted.sort(), p, q)?, &lifted)?)
        }
        Fg(p, inner) => {
            let s = eval_unchecked(inner, sig, reg)?.structure()?.clone();
            let mut ports = s.sort().port_labels();
            ports.insert(p.clone());
            let lifted = lift_ports(&s, &Sort::ports(ports))?;
            AlgValue::St(qfd::apply_scheme(&qfd::fg_port(lifted.sort(), p)?, &lifted)?)
        }
        Mdf(d, inner) => {
            let s = eval_unchecked(inner, sig, reg)?.structure()?.clone();
            let mut ports = s.sort().port_labels();
            ports.extend(d.iter().map(|(p, _)| p.clone()));
            let lifted = lift_ports(&s, &Sort::ports(ports))?;
            AlgValue::St(qfd::apply_scheme(&qfd::mdf(lifted.sort(), d)?, &lifted)?)
        }
        Mark(i, inner) => {
            let s = eval_unchecked(inner, sig, reg)?.structure()?.clone();
            AlgValue::St(qfd::apply_scheme(&qfd::mark(i)?, &s)?)
        }
        ApplyScheme(name, inner) => {
            let s = eval_unchecked(inner, sig, reg)?.structure()?.clone();
            AlgValue::St(qfd::apply_scheme(reg.get(name)?, &s)?)
        }
        EconForget(inner) => match eval_unchecked(inner, sig, reg)? {
            AlgValue::Ordered(o) => AlgValue::St(o.forget_order()),
            _ => return Err(Error::Invalid("bad operand".to_string())),
        },
        EconAddVertex(inner) | EconAddEdge(inner) | EconShift(inner) | EconSwap(inner) => {
            match eval_unchecked(inner, sig, reg)? {
                AlgValue::Ordered(o) => AlgValue::Ordered(match t {
                    EconAddVertex(..) => o.add_vertex(),
                    EconAddEdge(..) => o.add_edge_two_least(),
                    EconShift(..) => o.circular_shift(),
                    _ => o.swap_two_least(),
                }),
                _ => return Err(Error::Invalid("bad operand".to_string())),
            }
        }
    };
    Ok(value)
}

#[cfg(test)]
mod tests;
