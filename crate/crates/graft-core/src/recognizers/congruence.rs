//! Congruence evaluators on concrete values: finite labelings promising
//! stability under the operations of a signature, spot-checkable by
//! exhaustive enumeration; the type evaluator, the simplicity evaluator
//! for multigraphs with its transition-table automaton, and the
//! four-way primality evaluator for the modular signature.

use super::{full_op_key, TreeAutomaton};
use crate::error::{Error, Result};
use crate::modular::is_prime;
use crate::qfd;
use crate::structures::{
    compute_type, enumerate_structures, eta, has_multiedges, inject_iota, oplus, simplify_u,
    EtaRelation, Label, MultiGraph, Sort, StructType, Structure,
};
use crate::terms::AlgValue;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// A finite labeling of values together with the documented promise that
/// it factors through a congruence of some signature. The promise is
/// checkable on small instances through [`check_congruence`].
pub struct CongruenceEvaluator {
    pub name: String,
    label_fn: Box<dyn Fn(&AlgValue) -> Result<String> + Send + Sync>,
}

impl CongruenceEvaluator {
    pub fn new(
        name: &str,
        label_fn: Box<dyn Fn(&AlgValue) -> Result<String> + Send + Sync>,
    ) -> CongruenceEvaluator {
        CongruenceEvaluator {
            name: name.to_string(),
            label_fn,
        }
    }

    pub fn label(&self, v: &AlgValue) -> Result<String> {
        (self.label_fn)(v)
    }
}

/// One concrete operation instance at the value level.
pub struct ValueOp {
    pub name: String,
    pub arity: usize,
    pub apply: Box<dyn Fn(&[&AlgValue]) -> Result<AlgValue> + Send + Sync>,
}

/// Outcome of a congruence spot check.
#[derive(Clone, Debug)]
pub enum CongruenceCheck {
    Holds,
    Violated {
        op: String,
        witness_a: String,
        witness_b: String,
        label_a: String,
        label_b: String,
    },
}

impl CongruenceCheck {
    pub fn holds(&self) -> bool {
        matches!(self, CongruenceCheck::Holds)
    }
}

/// Check label stability: for every operation and position, arguments with
/// equal labels must produce results with equal labels, other positions
/// held at class representatives. Applications that reject their argument
/// sorts are skipped; a label class mixing applicable and inapplicable
/// values is itself reported as a violation.
pub fn check_congruence(
    ev: &CongruenceEvaluator,
    ops: &[ValueOp],
    pool: &[AlgValue],
) -> Result<CongruenceCheck> {
    let mut classes: BTreeMap<String, Vec<&AlgValue>> = BTreeMap::new();
    for v in pool {
        classes.entry(ev.label(v)?).or_default().push(v);
    }
    let reps: Vec<&AlgValue> = classes.values().map(|c| c[0]).collect();
    for op in ops {
        for position in 0..op.arity {
            // representative tuples for the other positions
            let mut contexts: Vec<Vec<&AlgValue>> = alloc::vec![Vec::new()];
            for p in 0..op.arity {
                if p == position {
                    continue;
                }
                let mut next = Vec::new();
                for ctx in &contexts {
                    for r in &reps {
                        let mut c2 = ctx.clone();
                        c2.push(*r);
                        next.push(c2);
                    }
                }
                contexts = next;
            }
            for class in classes.values() {
                let rep = class[0];
                for member in &class[1..] {
                    for ctx in &contexts {
                        let build = |x: &AlgValue| -> Vec<&AlgValue> {
                            let mut args: Vec<&AlgValue> = Vec::new();
                            let mut it = ctx.iter();
                            for p in 0..op.arity {
                                if p == position {
                                    args.push(x);
                                } else {
                                    args.push(it.next().expect("context arity"));
                                }
                            }
                            args
                        };
                        let ra = (op.apply)(&build(rep));
                        let rb = (op.apply)(&build(member));
                        match (ra, rb) {
                            (Err(_), Err(_)) => {}
                            (Ok(a), Ok(b)) => {
                                let la = ev.label(&a)?;
                                let lb = ev.label(&b)?;
                                if la != lb {
                                    return Ok(CongruenceCheck::Violated {
                                        op: op.name.clone(),
                                        witness_a: format!("{rep:?}"),
                                        witness_b: format!("{member:?}"),
                                        label_a: la,
                                        label_b: lb,
                                    });
                                }
                            }
                            _ => {
                                return Ok(CongruenceCheck::Violated {
                                    op: op.name.clone(),
                                    witness_a: format!("{rep:?}"),
                                    witness_b: format!("{member:?}"),
                                    label_a: "applicable".to_string(),
                                    label_b: "inapplicable".to_string(),
                                })
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(CongruenceCheck::Holds)
}

/// Compact deterministic encoding of a structure for state labels.
pub(crate) fn encode_structure(s: &Structure) -> String {
    let mut out = format!("{};n={}", s.sort(), s.size());
    for (r, ts) in s.all_tuples() {
        out.push_str(&format!(";{r}="));
        for t in ts {
            out.push_str(&format!("{t:?}"));
        }
    }
    out.push_str(";src=");
    for (c, x) in s.sources() {
        out.push_str(&format!("{c}:{x},"));
    }
    out
}

fn encode_eta(e: &EtaRelation) -> String {
    let mut out = String::new();
    for (a, b) in e {
        out.push_str(&format!("{{{a},{b}}}"));
    }
    out
}

/// The type evaluator: labels a structure by the canonical form of its
/// restriction to the sources. Source separation is readable off the
/// label.
pub fn zeta_evaluator() -> CongruenceEvaluator {
    CongruenceEvaluator::new(
        "zeta",
        Box::new(|v: &AlgValue| {
            let s = v.structure()?;
            let t = compute_type(s);
            let sep = t.as_structure().is_source_separated();
            Ok(format!("zeta[sep={sep}]{}", encode_structure(t.as_structure())))
        }),
    )
}

/// Multigraph simplicity state: parallel edges somewhere, absorbing, or
/// the pair of the type and the shared-neighbor relation of the
/// simplified graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum SimState {
    Multi(BTreeSet<Label>),
    Simple {
        zeta: Structure,
        eta: EtaRelation,
    },
}

impl SimState {
    fn label(&self) -> String {
        match self {
            SimState::Multi(c) => format!("multi{c:?}"),
            SimState::Simple { zeta, eta } => {
                format!("simple;{};eta={}", encode_structure(zeta), encode_eta(eta))
            }
        }
    }

    fn labels(&self) -> BTreeSet<Label> {
        match self {
            SimState::Multi(c) => c.clone(),
            SimState::Simple { zeta, .. } => zeta.sort().consts.clone(),
        }
    }

    fn of_multigraph(m: &MultiGraph) -> SimState {
        if has_multiedges(m) {
            SimState::Multi(m.labels())
        } else {
            let s = simplify_u(m);
            SimState::Simple {
                zeta: compute_type(&s).into_structure(),
                eta: eta(&s).expect("simplified graphs have the edge sort"),
            }
        }
    }
}

/// Transition laws of the simplicity state under the multigraph
/// operations: additive type and shared-neighbor tracking, with the
/// four-case update under fusion and the type-level test for created
/// parallel edges.
mod sim_laws {
    use super::*;

    pub fn op_oplus(a: &SimState, b: &SimState) -> Result<SimState> {
        let union: BTreeSet<Label> = a.labels().union(&b.labels()).cloned().collect();
        match (a, b) {
            (SimState::Simple { zeta: z1, eta: e1 }, SimState::Simple { zeta: z2, eta: e2 }) => {
                let zeta = compute_type(&oplus(z1, z2)?).into_structure();
                let eta = e1.union(e2).cloned().collect();
                Ok(SimState::Simple { zeta, eta })
            }
            _ => Ok(SimState::Multi(union)),
        }
    }

    pub fn op_srcren(a: &SimState, from: &str, to: &str) -> Result<SimState> {
        match a {
            SimState::Multi(c) => {
                let mut c2 = c.clone();
                c2.remove(from);
                c2.insert(to.to_string());
                Ok(SimState::Multi(c2))
            }
            SimState::Simple { zeta, eta } => {
                let scheme = qfd::srcren(zeta.sort(), from, to)?;
                let z2 = compute_type(&qfd::apply_scheme(&scheme, zeta)?).into_structure();
                let e2 = eta
                    .iter()
                    .map(|(x, y)| {
                        let rn = |l: &Label| {
                            if l == from {
                                to.to_string()
                            } else {
                                l.clone()
                            }
                        };
                        let (x2, y2) = (rn(x), rn(y));
                        if x2 <= y2 {
                            (x2, y2)
                        } else {
                            (y2, x2)
                        }
                    })
                    .collect();
                Ok(SimState::Simple { zeta: z2, eta: e2 })
            }
        }
    }

    pub fn op_srcfg(a: &SimState, label: &str) -> Result<SimState> {
        match a {
            SimState::Multi(c) => {
                let mut c2 = c.clone();
                c2.remove(label);
                Ok(SimState::Multi(c2))
            }
            SimState::Simple { zeta, eta } => {
                let scheme = qfd::srcfg(zeta.sort(), label)?;
                let z2 = compute_type(&qfd::apply_scheme(&scheme, zeta)?).into_structure();
                let e2 = eta
                    .iter()
                    .filter(|(x, y)| x != label && y != label)
                    .cloned()
                    .collect();
                Ok(SimState::Simple { zeta: z2, eta: e2 })
            }
        }
    }

    pub fn op_mfus(state: &SimState, a: &str, b: &str) -> Result<SimState> {
        let SimState::Simple { zeta, eta } = state else {
            return Ok(SimState::Multi(state.labels()));
        };
        if zeta.source(a)? == zeta.source(b)? {
            return Ok(state.clone());
        }
        // does fusing create parallel edges? readable off the type and eta
        let fused_type_multi = inject_iota(zeta)?.mfus(a, b)?;
        let pair = |x: &str, y: &str| {
            if x <= y {
                (x.to_string(), y.to_string())
            } else {
                (y.to_string(), x.to_string())
            }
        };
        if eta.contains(&pair(a, b)) || has_multiedges(&fused_type_multi) {
            return Ok(SimState::Multi(state.labels()));
        }
        let z2 = StructType::from_source_only(&simplify_u(&fused_type_multi))?.into_structure();
        // the four-case update of the shared-neighbor relation
        let mut e2: EtaRelation = eta.clone();
        let consts: Vec<Label> = zeta.sort().consts.iter().cloned().collect();
        let edge = |x: &str, y: &str| -> bool {
            match (zeta.source(x), zeta.source(y)) {
                (Ok(u), Ok(v)) => zeta.has_edge(u, v),
                _ => false,
            }
        };
        // (2) pairs reached from the fused vertex through old a/b edges
        for c in &consts {
            for d in &consts {
                if c == d {
                    continue;
                }
                if (edge(a, c) && edge(b, d)) || (edge(c, a) && edge(d, b)) {
                    e2.insert(pair(c, d));
                }
            }
        }
        // (3) pairs transferred between the fused labels
        for c in &consts {
            if eta.contains(&pair(b, c)) {
                e2.insert(pair(a, c));
            }
            if eta.contains(&pair(a, c)) {
                e2.insert(pair(b, c));
            }
        }
        // (4) a loop arising from an a-b edge plus any a/b-c edge
        let ab_edge = edge(a, b) || edge(b, a);
        if ab_edge {
            for c in &consts {
                if c == a || c == b {
                    continue;
                }
                if edge(a, c) || edge(c, a) || edge(b, c) || edge(c, b) {
                    e2.insert(pair(a, c));
                    e2.insert(pair(b, c));
                }
            }
        }
        // keep only pairs valid in the fused type: distinct labels on
        // distinct elements
        let e2 = e2
            .into_iter()
            .filter(|(x, y)| match (z2.source(x), z2.source(y)) {
                (Ok(u), Ok(v)) => u != v,
                _ => false,
            })
            .collect();
        Ok(SimState::Simple { zeta: z2, eta: e2 })
    }
}

/// The simplicity evaluator on multigraph values: parallel edges collapse
/// to the absorbing state, otherwise the label is the pair of the type and
/// the shared-neighbor relation of the simplified graph.
pub fn simplicity_evaluator() -> CongruenceEvaluator {
    CongruenceEvaluator::new(
        "simplicity",
        Box::new(|v: &AlgValue| {
            let m = v.multigraph()?;
            Ok(SimState::of_multigraph(m).label())
        }),
    )
}

/// The tree automaton over the multigraph signature on the given source
/// labels, recognizing the terms that evaluate to simple multigraphs.
/// States are reachable simplicity states; transitions implement the
/// update laws, so running a term never builds the multigraph itself.
pub fn simplicity_recognizer(labels: &BTreeSet<Label>) -> Result<TreeAutomaton> {
    let sort_of = |c: &BTreeSet<Label>| format!("multi{c:?}");

    // constants and their states
    let mut state_data: Vec<SimState> = Vec::new();
    let mut state_index: BTreeMap<String, usize> = BTreeMap::new();
    let mut ops: BTreeMap<String, (Vec<String>, String)> = BTreeMap::new();
    let mut trans: BTreeMap<(String, Vec<usize>), usize> = BTreeMap::new();

    let mut intern = |s: SimState, data: &mut Vec<SimState>, idx: &mut BTreeMap<String, usize>| {
        let label = s.label();
        if let Some(i) = idx.get(&label) {
            return *i;
        }
        let i = data.len();
        idx.insert(label, i);
        data.push(s);
        i
    };

    let mut constants: Vec<(String, String, SimState)> = Vec::new();
    for a in labels {
        constants.push((
            format!("src:{a}"),
            sort_of(&[a.clone()].into_iter().collect()),
            SimState::of_multigraph(&inject_iota(&Structure::graph_with_sources(
                1,
                &[],
                &[(a, 0)],
            )?)?),
        ));
        constants.push((
            format!("loop:{a}"),
            sort_of(&[a.clone()].into_iter().collect()),
            SimState::of_multigraph(&inject_iota(&Structure::graph_with_sources(
                1,
                &[(0, 0)],
                &[(a, 0)],
            )?)?),
        ));
        for b in labels {
            if a == b {
                continue;
            }
            constants.push((
                format!("edge:{a}:{b}"),
                sort_of(&[a.clone(), b.clone()].into_iter().collect()),
                SimState::of_multigraph(&inject_iota(&Structure::graph_with_sources(
                    2,
                    &[(0, 1)],
                    &[(a, 0), (b, 1)],
                )?)?),
            ));
        }
    }
    constants.push((
        "v".to_string(),
        sort_of(&BTreeSet::new()),
        SimState::of_multigraph(&inject_iota(&Structure::graph(1, &[])?)?),
    ));
    constants.push((
        "v-loop".to_string(),
        sort_of(&BTreeSet::new()),
        SimState::of_multigraph(&inject_iota(&Structure::graph(1, &[(0, 0)])?)?),
    ));

    let mut frontier: Vec<usize> = Vec::new();
    for (desc, sort, st) in constants {
        let key = full_op_key(&desc, &[]);
        ops.insert(key.clone(), (Vec::new(), sort));
        let i = intern(st, &mut state_data, &mut state_index);
        trans.insert((key, Vec::new()), i);
        frontier.push(i);
    }

    // close under the unary operations and the disjoint unions
    let mut processed: BTreeSet<usize> = BTreeSet::new();
    while let Some(i) = frontier.pop() {
        if !processed.insert(i) {
            continue;
        }
        let st = state_data[i].clone();
        let c = st.labels();
        let my_sort = sort_of(&c);
        // unary ops
        let mut unary: Vec<(String, SimState)> = Vec::new();
        for a in &c {
            unary.push((format!("srcfg:{a}"), sim_laws::op_srcfg(&st, a)?));
            for b in labels.iter().filter(|b| !c.contains(*b)) {
                unary.push((format!("srcren:{a}:{b}"), sim_laws::op_srcren(&st, a, b)?));
            }
            for b in &c {
                if a != b {
                    unary.push((format!("mfus:{a}:{b}"), sim_laws::op_mfus(&st, a, b)?));
                }
            }
        }
        for (desc, result) in unary {
            let key = full_op_key(&desc, &[my_sort.clone()]);
            let result_sort = sort_of(&result.labels());
            ops.insert(key.clone(), (alloc::vec![my_sort.clone()], result_sort));
            let j = intern(result, &mut state_data, &mut state_index);
            trans.insert((key, alloc::vec![i]), j);
            frontier.push(j);
        }
        // unions with every compatible processed state (and itself)
        let partners: Vec<usize> = (0..state_data.len()).collect();
        for j in partners {
            let other = state_data[j].clone();
            let d = other.labels();
            if !c.is_disjoint(&d) {
                continue;
            }
            for (x, y, sx, sy) in [(i, j, &st, &other), (j, i, &other, &st)] {
                let key = full_op_key(
                    "oplus",
                    &[sort_of(&sx.labels()), sort_of(&sy.labels())],
                );
                let result = sim_laws::op_oplus(sx, sy)?;
                let result_sort = sort_of(&result.labels());
                ops.insert(
                    key.clone(),
                    (
                        alloc::vec![sort_of(&sx.labels()), sort_of(&sy.labels())],
                        result_sort,
                    ),
                );
                let r = intern(result, &mut state_data, &mut state_index);
                trans.insert((key, alloc::vec![x, y]), r);
                frontier.push(r);
            }
        }
    }

    let states: Vec<(String, String)> = state_data
        .iter()
        .map(|s| (sort_of(&s.labels()), s.label()))
        .collect();
    let accepting: BTreeSet<usize> = state_data
        .iter()
        .enumerate()
        .filter(|(_, s)| matches!(s, SimState::Simple { .. }))
        .map(|(i, _)| i)
        .collect();
    Ok(TreeAutomaton::new(states, ops, trans, accepting))
}

/// The four-way primality evaluator for the modular signature,
/// parameterized by a membership predicate for a set of prime graphs.
/// Loop-carrying singletons get their own class so that all-singleton
/// compositions stay determined by the argument classes.
pub fn prime_evaluator(
    membership: Box<dyn Fn(&Structure) -> bool + Send + Sync>,
) -> CongruenceEvaluator {
    CongruenceEvaluator::new(
        "prime",
        Box::new(move |v: &AlgValue| {
            let g = v.structure()?;
            if !g.sort().is_graph() || !g.sort().consts.is_empty() {
                return Err(Error::Sort("primality labels plain graphs".to_string()));
            }
            if g.size() == 1 {
                let x = *g.domain().iter().next().expect("nonempty");
                return Ok(if g.has_edge(x, x) {
                    "one-loop".to_string()
                } else {
                    "one".to_string()
                });
            }
            Ok(if is_prime(g)? {
                if membership(g) {
                    "prime-in".to_string()
                } else {
                    "prime-out".to_string()
                }
            } else {
                "composite".to_string()
            })
        }),
    )
}

/// Every multigraph over the given labels with at most the given numbers
/// of vertices and edges.
pub fn enumerate_multigraphs(
    labels: &BTreeSet<Label>,
    max_vertices: usize,
    max_edges: usize,
) -> Vec<MultiGraph> {
    let min = usize::from(!labels.is_empty());
    let mut out = Vec::new();
    for n in min..=max_vertices {
        let verts: Vec<u32> = (0..n as u32).collect();
        // source assignments
        let mut sources: Vec<BTreeMap<Label, u32>> = alloc::vec![BTreeMap::new()];
        for c in labels {
            let mut next = Vec::new();
            for m in &sources {
                for v in &verts {
                    let mut m2 = m.clone();
                    m2.insert(c.clone(), *v);
                    next.push(m2);
                }
            }
            sources = next;
        }
        if n == 0 && !labels.is_empty() {
            continue;
        }
        // edge multisets: nondecreasing sequences of ordered pairs
        let pairs: Vec<(u32, u32)> = verts
            .iter()
            .flat_map(|x| verts.iter().map(move |y| (*x, *y)))
            .collect();
        let mut multisets: Vec<Vec<(u32, u32)>> = alloc::vec![Vec::new()];
        let mut current: Vec<Vec<(u32, u32)>> = alloc::vec![Vec::new()];
        for _ in 0..max_edges {
            let mut next = Vec::new();
            for seq in &current {
                let start = seq
                    .last()
                    .map(|last| pairs.iter().position(|p| p == last).expect("member"))
                    .unwrap_or(0);
                for p in &pairs[start..] {
                    let mut s2 = seq.clone();
                    s2.push(*p);
                    next.push(s2);
                }
            }
            multisets.extend(next.iter().cloned());
            current = next;
        }
        for edges in &multisets {
            for srcs in &sources {
                let inc: BTreeMap<u32, (u32, u32)> = edges
                    .iter()
                    .enumerate()
                    .map(|(i, p)| (i as u32, *p))
                    .collect();
                out.push(
                    MultiGraph::new(verts.iter().copied().collect(), inc, srcs.clone())
                        .expect("enumerated multigraph is well formed"),
                );
            }
        }
    }
    out
}

/// Value pools and operations for congruence checks over the structure
/// operations on graphs with sources.
pub fn hr_value_ops(labels: &BTreeSet<Label>) -> Vec<ValueOp> {
    let mut ops: Vec<ValueOp> = Vec::new();
    ops.push(ValueOp {
        name: "oplus".to_string(),
        arity: 2,
        apply: Box::new(|args: &[&AlgValue]| {
            Ok(AlgValue::St(oplus(args[0].structure()?, args[1].structure()?)?))
        }),
    });
    for a in labels {
        let a1 = a.clone();
        ops.push(ValueOp {
            name: format!("srcfg:{a}"),
            arity: 1,
            apply: Box::new(move |args: &[&AlgValue]| {
                let s = args[0].structure()?;
                Ok(AlgValue::St(qfd::apply_scheme(
                    &qfd::srcfg(s.sort(), &a1)?,
                    s,
                )?))
            }),
        });
        for b in labels {
            if a == b {
                continue;
            }
            let (a2, b2) = (a.clone(), b.clone());
            ops.push(ValueOp {
                name: format!("fus:{a}:{b}"),
                arity: 1,
                apply: Box::new(move |args: &[&AlgValue]| {
                    let s = args[0].structure()?;
                    Ok(AlgValue::St(qfd::apply_scheme(
                        &qfd::fus(s.sort(), &a2, &b2)?,
                        s,
                    )?))
                }),
            });
        }
    }
    ops
}

/// Multigraph operations for congruence checks.
pub fn hrm_value_ops(labels: &BTreeSet<Label>) -> Vec<ValueOp> {
    let mut ops: Vec<ValueOp> = Vec::new();
    ops.push(ValueOp {
        name: "oplus".to_string(),
        arity: 2,
        apply: Box::new(|args: &[&AlgValue]| {
            Ok(AlgValue::Multi(
                args[0].multigraph()?.m_oplus(args[1].multigraph()?)?,
            ))
        }),
    });
    for a in labels {
        let a1 = a.clone();
        ops.push(ValueOp {
            name: format!("srcfg:{a}"),
            arity: 1,
            apply: Box::new(move |args: &[&AlgValue]| {
                Ok(AlgValue::Multi(args[0].multigraph()?.m_srcfg(&a1)?))
            }),
        });
        for b in labels {
            if a == b {
                continue;
            }
            let (a2, b2) = (a.clone(), b.clone());
            ops.push(ValueOp {
                name: format!("mfus:{a}:{b}"),
                arity: 1,
                apply: Box::new(move |args: &[&AlgValue]| {
                    Ok(AlgValue::Multi(args[0].multigraph()?.mfus(&a2, &b2)?))
                }),
            });
        }
    }
    ops
}

/// Modular composition operations for congruence checks, one per quotient
/// shape.
pub fn modular_value_ops(shapes: &[Structure]) -> Vec<ValueOp> {
    shapes
        .iter()
        .enumerate()
        .map(|(i, q)| {
            let quotient = q.clone();
            let arity = q.domain().len();
            ValueOp {
                name: format!("compose#{i}"),
                arity,
                apply: Box::new(move |args: &[&AlgValue]| {
                    let parts: Result<Vec<Structure>> =
                        args.iter().map(|v| v.structure().cloned()).collect();
                    Ok(AlgValue::St(crate::terms::modular_compose(
                        &quotient, &parts?,
                    )?))
                }),
            }
        })
        .collect()
}

/// A small pool of structure values of the graph sorts over subsets of the
/// labels.
pub fn structure_pool(labels: &BTreeSet<Label>, max_size: usize) -> Vec<AlgValue> {
    let items: Vec<Label> = labels.iter().cloned().collect();
    let mut out = Vec::new();
    for mask in 0..(1usize << items.len()) {
        let subset: Vec<Label> = items
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, l)| l.clone())
            .collect();
        let sort = Sort::graph(subset);
        for s in enumerate_structures(&sort, max_size, true) {
            out.push(AlgValue::St(s));
        }
    }
    out
}


