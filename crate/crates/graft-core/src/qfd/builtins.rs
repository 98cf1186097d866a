//! The standard unary operations as schemes: source renaming, forgetting
//! and fusion on structures with sources; edge addition, port relabeling
//! and marking on graphs with ports; and sort inclusion. All of them are
//! correct by construction and pass [`super::validate_scheme`] (covered by
//! tests), so they are built without re-running the semantic checks.

use super::{QfdScheme, RawScheme};
use crate::error::{Error, Result};
use crate::logic::{Formula, LogicTerm, VarId};
use crate::structures::{Label, Sort, EDGE};
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

fn cst(c: &str) -> LogicTerm {
    LogicTerm::Const(c.to_string())
}

fn var(i: u32) -> LogicTerm {
    LogicTerm::Var(VarId(i))
}

/// The identity relation formula `r(x1..xk)`.
fn rel_identity(rel: &str, arity: usize) -> Formula {
    Formula::Rel(
        rel.to_string(),
        (1..=arity as u32).map(var).collect(),
    )
}

fn identity_phi(sort: &Sort) -> BTreeMap<String, Formula> {
    sort.rels
        .iter()
        .map(|(r, ar)| (r.clone(), rel_identity(r, *ar)))
        .collect()
}

/// Kappa table mapping each output constant to the like-named input
/// constant.
fn identity_kappa(input: &Sort, output: &Sort) -> BTreeMap<(Label, Label), Formula> {
    let mut kappa = BTreeMap::new();
    for d in &output.consts {
        for c in &input.consts {
            let f = if c == d { Formula::True } else { Formula::False };
            kappa.insert((c.clone(), d.clone()), f);
        }
    }
    kappa
}

/// Rename the `a`-source to `b`: type `(R,C) -> (R, C\{a} u {b})`.
pub fn srcren(input: &Sort, a: &str, b: &str) -> Result<QfdScheme> {
    if !input.consts.contains(a) {
        return Err(Error::UnknownSymbol(format!("source label {a}")));
    }
    if input.consts.contains(b) {
        return Err(Error::Sort(format!("target label {b} already in the sort")));
    }
    let mut out_consts = input.consts.clone();
    out_consts.remove(a);
    out_consts.insert(b.to_string());
    let output = Sort {
        rels: input.rels.clone(),
        consts: out_consts,
    };
    let mut kappa = identity_kappa(input, &output);
    for c in &input.consts {
        let f = if c == a { Formula::True } else { Formula::False };
        kappa.insert((c.clone(), b.to_string()), f);
    }
    Ok(QfdScheme::assume_valid(RawScheme {
        input: input.clone(),
        output: output.clone(),
        delta: Formula::True,
        phi: identity_phi(&output),
        kappa,
    }))
}

/// Forget the `a`-source: type `(R,C) -> (R, C\{a})`.
pub fn srcfg(input: &Sort, a: &str) -> Result<QfdScheme> {
    if !input.consts.contains(a) {
        return Err(Error::UnknownSymbol(format!("source label {a}")));
    }
    let mut out_consts = input.consts.clone();
    out_consts.remove(a);
    let output = Sort {
        rels: input.rels.clone(),
        consts: out_consts,
    };
    Ok(QfdScheme::assume_valid(RawScheme {
        input: input.clone(),
        output: output.clone(),
        delta: Formula::True,
        phi: identity_phi(&output),
        kappa: identity_kappa(input, &output),
    }))
}

/// Identify the `a`-source and the `b`-source: type `(R,C) -> (R,C)`. The
/// element of the `b`-source is kept; when the two sources already
/// coincide the operation is the identity. Tuples are reorganized so that
/// positions holding the old `a`-element now hold the fused one.
pub fn fus(input: &Sort, a: &str, b: &str) -> Result<QfdScheme> {
    if a == b {
        return Err(Error::Sort("fusion needs two distinct labels".to_string()));
    }
    for l in [a, b] {
        if !input.consts.contains(l) {
            return Err(Error::UnknownSymbol(format!("source label {l}")));
        }
    }
    let same = Formula::eq(cst(a), cst(b));
    // keep everything when a and b already coincide, else drop the a-element
    let delta = Formula::or(
        same.clone(),
        Formula::and(
            Formula::not(same.clone()),
            Formula::not(Formula::eq(var(1), cst(a))),
        ),
    );
    let mut phi = BTreeMap::new();
    for (rel, ar) in &input.rels {
        // a tuple holds on new arguments when some pattern of replacing
        // b-valued positions by the old a-element held before
        let mut disjuncts = Vec::new();
        for mask in 0u32..(1 << *ar) {
            let mut guards = Vec::new();
            let mut args = Vec::new();
            for i in 0..*ar {
                if mask & (1 << i) != 0 {
                    guards.push(Formula::eq(var(i as u32 + 1), cst(b)));
                    args.push(cst(a));
                } else {
                    args.push(var(i as u32 + 1));
                }
            }
            disjuncts.push(Formula::and(
                Formula::all(guards),
                Formula::Rel(rel.clone(), args),
            ));
        }
        let domain_guard = Formula::all((1..=*ar).map(|i| {
            delta.subst_vars(&[(VarId(1), var(i as u32))].into_iter().collect())
        }));
        phi.insert(rel.clone(), Formula::and(domain_guard, Formula::any(disjuncts)));
    }
    let mut kappa = BTreeMap::new();
    for d in &input.consts {
        for c in &input.consts {
            let f = if d == a {
                // the fused element carries the a-source; it is b's element
                if c == b {
                    Formula::True
                } else {
                    Formula::False
                }
            } else if c == d {
                // d keeps its own element unless that element is the one
                // being dropped
                Formula::or(same.clone(), Formula::not(Formula::eq(cst(d), cst(a))))
            } else if c == b {
                // d sat on the dropped element: it moves to the fused one
                Formula::and(Formula::not(same.clone()), Formula::eq(cst(d), cst(a)))
            } else {
                Formula::False
            };
            kappa.insert((c.clone(), d.clone()), f);
        }
    }
    Ok(QfdScheme::assume_valid(RawScheme {
        input: input.clone(),
        output: input.clone(),
        delta,
        phi,
        kappa,
    }))
}

/// The natural inclusion of `(R,C)` into `(R',C)` for `R'` containing `R`:
/// new relations are identically false.
pub fn inclusion(input: &Sort, output: &Sort) -> Result<QfdScheme> {
    if input.consts != output.consts {
        return Err(Error::Sort("inclusion keeps the constant set".to_string()));
    }
    for (r, ar) in &input.rels {
        if output.rels.get(r) != Some(ar) {
            return Err(Error::Sort(format!(
                "output sort does not contain {r}/{ar}"
            )));
        }
    }
    let phi = output
        .rels
        .iter()
        .map(|(r, ar)| {
            let f = if input.rels.contains_key(r) {
                rel_identity(r, *ar)
            } else {
                Formula::False
            };
            (r.clone(), f)
        })
        .collect();
    Ok(QfdScheme::assume_valid(RawScheme {
        input: input.clone(),
        output: output.clone(),
        delta: Formula::True,
        phi,
        kappa: identity_kappa(input, output),
    }))
}

/// Add every edge from a `p`-port to a `q`-port (`p != q`), on a
/// port-graph sort containing both labels.
pub fn add_ports(input: &Sort, p: &str, q: &str) -> Result<QfdScheme> {
    if p == q {
        return Err(Error::Sort("edge addition needs two distinct labels".to_string()));
    }
    if !input.is_port_graph() {
        return Err(Error::Sort("edge addition works on port-graph sorts".to_string()));
    }
    for l in [p, q] {
        if !input.rels.contains_key(l) {
            return Err(Error::UnknownSymbol(format!("port label {l}")));
        }
    }
    let mut phi = identity_phi(input);
    phi.insert(
        EDGE.to_string(),
        Formula::or(
            rel_identity(EDGE, 2),
            Formula::and(
                Formula::Rel(p.to_string(), alloc::vec![var(1)]),
                Formula::Rel(q.to_string(), alloc::vec![var(2)]),
            ),
        ),
    );
    Ok(QfdScheme::assume_valid(RawScheme {
        input: input.clone(),
        output: input.clone(),
        delta: Formula::True,
        phi,
        kappa: BTreeMap::new(),
    }))
}

/// Port redefinition: each output `q`-port collects the vertices that are
/// `p`-ports for some `(p,q)` in the relation `D`. The output sort has
/// exactly the range of `D` as port labels.
pub fn mdf(input: &Sort, d: &[(Label, Label)]) -> Result<QfdScheme> {
    if !input.is_port_graph() {
        return Err(Error::Sort("port redefinition works on port-graph sorts".to_string()));
    }
    let in_ports = input.port_labels();
    if let Some((p, _)) = d.iter().find(|(p, _)| !in_ports.contains(p)) {
        return Err(Error::UnknownSymbol(format!("port label {p}")));
    }
    let out_ports: Vec<Label> = {
        let mut v: Vec<Label> = d.iter().map(|(_, q)| q.clone()).collect();
        v.sort();
        v.dedup();
        v
    };
    let output = Sort::ports(out_ports.iter().cloned());
    let mut phi = BTreeMap::new();
    phi.insert(EDGE.to_string(), rel_identity(EDGE, 2));
    for q in &out_ports {
        let sources = d
            .iter()
            .filter(|(_, q2)| q2 == q)
            .map(|(p, _)| Formula::Rel(p.clone(), alloc::vec![var(1)]));
        phi.insert(q.clone(), Formula::any(sources));
    }
    Ok(QfdScheme::assume_valid(RawScheme {
        input: input.clone(),
        output,
        delta: Formula::True,
        phi,
        kappa: BTreeMap::new(),
    }))
}

/// Rename every `p`-port to a `q`-port: the port redefinition keeping all
/// other labels.
pub fn ren_port(input: &Sort, p: &str, q: &str) -> Result<QfdScheme> {
    if p == q {
        return Err(Error::Sort("port renaming needs distinct labels".to_string()));
    }
    if !input.rels.contains_key(p) {
        return Err(Error::UnknownSymbol(format!("port label {p}")));
    }
    let mut d: Vec<(Label, Label)> = input
        .port_labels()
        .into_iter()
        .filter(|r| r != p)
        .map(|r| (r.clone(), r))
        .collect();
    d.push((p.to_string(), q.to_string()));
    mdf(input, &d)
}

/// Forget `p`-ports: the port redefinition dropping `p`.
pub fn fg_port(input: &Sort, p: &str) -> Result<QfdScheme> {
    if !input.rels.contains_key(p) {
        return Err(Error::UnknownSymbol(format!("port label {p}")));
    }
    let d: Vec<(Label, Label)> = input
        .port_labels()
        .into_iter()
        .filter(|r| r != p)
        .map(|r| (r.clone(), r))
        .collect();
    mdf(input, &d)
}

/// Mark every vertex of a port-free graph with the port label `i`.
pub fn mark(label: &str) -> Result<QfdScheme> {
    let input = Sort::graph([]);
    let output = Sort::ports([label.to_string()]);
    let mut phi = BTreeMap::new();
    phi.insert(EDGE.to_string(), rel_identity(EDGE, 2));
    phi.insert(label.to_string(), Formula::True);
    Ok(QfdScheme::assume_valid(RawScheme {
        input,
        output,
        delta: Formula::True,
        phi,
        kappa: BTreeMap::new(),
    }))
}
