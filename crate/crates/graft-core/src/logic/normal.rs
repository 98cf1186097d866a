//! Canonical reduced forms: Boolean formulas in a canonical disjunctive
//! normal form, quantifier-free formulas via atom abstraction, and
//! first-order formulas of bounded quantifier depth via recursive reduction
//! with canonical rebinding of quantified variables. Also the atom-count
//! function and the upper bounds on the number of reduced forms.

use super::{Formula, LogicTerm, VarId};
use crate::error::{Error, Result};
use crate::structures::Sort;
use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use num_bigint::BigUint;

/// Propositional formula over variables `p1..pn`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BoolExpr {
    True,
    False,
    Var(u32),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn vars(&self) -> BTreeSet<u32> {
        match self {
            BoolExpr::True | BoolExpr::False => BTreeSet::new(),
            BoolExpr::Var(v) => [*v].into_iter().collect(),
            BoolExpr::Not(f) => f.vars(),
            BoolExpr::And(a, b) | BoolExpr::Or(a, b) => {
                a.vars().union(&b.vars()).copied().collect()
            }
        }
    }

    fn eval(&self, assignment: u32, index: &BTreeMap<u32, u32>) -> bool {
        match self {
            BoolExpr::True => true,
            BoolExpr::False => false,
            BoolExpr::Var(v) => assignment & (1 << index[v]) != 0,
            BoolExpr::Not(f) => !f.eval(assignment, index),
            BoolExpr::And(a, b) => a.eval(assignment, index) && b.eval(assignment, index),
            BoolExpr::Or(a, b) => a.eval(assignment, index) || b.eval(assignment, index),
        }
    }
}

impl core::fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            BoolExpr::True => write!(f, "true"),
            BoolExpr::False => write!(f, "false"),
            BoolExpr::Var(v) => write!(f, "p{v}"),
            BoolExpr::Not(g) => write!(f, "(not {g})"),
            BoolExpr::And(a, b) => write!(f, "(and {a} {b})"),
            BoolExpr::Or(a, b) => write!(f, "(or {a} {b})"),
        }
    }
}

/// Parse the propositional s-expression syntax: `p1`, `true`, `false`,
/// `(not f)`, `(and f g)`, `(or f g)`.
pub fn parse_bool(input: &str) -> Result<BoolExpr> {
    use super::sexpr::{parse_sexpr, Sexpr};
    fn go(e: &Sexpr) -> Result<BoolExpr> {
        match e {
            Sexpr::Atom(a, pos) => match a.as_str() {
                "true" => Ok(BoolExpr::True),
                "false" => Ok(BoolExpr::False),
                _ => {
                    if let Some(n) = a.strip_prefix('p').and_then(|n| n.parse::<u32>().ok()) {
                        if n >= 1 {
                            return Ok(BoolExpr::Var(n));
                        }
                    }
                    Err(Error::Parse {
                        pos: *pos,
                        msg: format!("expected p1, p2, ... (got {a})"),
                    })
                }
            },
            Sexpr::List(items, pos) => {
                let Some(Sexpr::Atom(head, _)) = items.first() else {
                    return Err(Error::Parse {
                        pos: *pos,
                        msg: "expected not/and/or".to_string(),
                    });
                };
                match (head.as_str(), &items[1..]) {
                    ("not", [f]) => Ok(BoolExpr::Not(Box::new(go(f)?))),
                    ("and", [a, b]) => Ok(BoolExpr::And(Box::new(go(a)?), Box::new(go(b)?))),
                    ("or", [a, b]) => Ok(BoolExpr::Or(Box::new(go(a)?), Box::new(go(b)?))),
                    _ => Err(Error::Parse {
                        pos: *pos,
                        msg: format!("unknown boolean operator {head}"),
                    }),
                }
            }
        }
    }
    go(&parse_sexpr(input)?)
}

/// An implicant: the variables it fixes and, among those, the ones fixed
/// positively. Bit positions index the sorted variable list.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Implicant {
    mask: u32,
    bits: u32,
}

/// All prime implicants of the function given by its minterm set, by
/// iterated pairwise combination (uncombined implicants at each level are
/// prime).
fn prime_implicants(n: u32, minterms: &[u32]) -> BTreeSet<Implicant> {
    let full = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut current: BTreeSet<Implicant> = minterms
        .iter()
        .map(|m| Implicant {
            mask: full,
            bits: *m,
        })
        .collect();
    let mut primes = BTreeSet::new();
    while !current.is_empty() {
        let mut combined: BTreeSet<Implicant> = BTreeSet::new();
        let mut next: BTreeSet<Implicant> = BTreeSet::new();
        for imp in &current {
            for i in 0..n {
                let bit = 1u32 << i;
                if imp.mask & bit == 0 {
                    continue;
                }
                let partner = Implicant {
                    mask: imp.mask,
                    bits: imp.bits ^ bit,
                };
                if current.contains(&partner) {
                    combined.insert(*imp);
                    combined.insert(partner);
                    next.insert(Implicant {
                        mask: imp.mask & !bit,
                        bits: imp.bits & !bit,
                    });
                }
            }
        }
        for imp in &current {
            if !combined.contains(imp) {
                primes.insert(*imp);
            }
        }
        current = next;
    }
    primes
}

/// Canonical disjunctive normal form: the disjunction of all prime
/// implicants of the formula's truth table, with literals inside each
/// disjunct in increasing variable order and disjuncts sorted. The output
/// depends only on the truth table, so logically equivalent inputs
/// normalize identically; tautologies come out as `true` and
/// contradictions as `false`.
pub fn normalize_bool(f: &BoolExpr) -> Result<BoolExpr> {
    let vars: Vec<u32> = f.vars().into_iter().collect();
    let n = vars.len() as u32;
    if n > 20 {
        return Err(Error::Capacity(format!(
            "boolean normalization over {n} variables"
        )));
    }
    let index: BTreeMap<u32, u32> = vars.iter().enumerate().map(|(i, v)| (*v, i as u32)).collect();
    let minterms: Vec<u32> = (0..(1u32 << n)).filter(|m| f.eval(*m, &index)).collect();
    let primes = prime_implicants(n, &minterms);

    // each implicant becomes a sorted literal sequence
    let mut disjuncts: Vec<Vec<(u32, bool)>> = primes
        .iter()
        .map(|imp| {
            (0..n)
                .filter(|i| imp.mask & (1 << i) != 0)
                .map(|i| (vars[i as usize], imp.bits & (1 << i) != 0))
                .collect()
        })
        .collect();
    disjuncts.sort();
    disjuncts.dedup();

    let lit = |(v, pos): (u32, bool)| {
        if pos {
            BoolExpr::Var(v)
        } else {
            BoolExpr::Not(Box::new(BoolExpr::Var(v)))
        }
    };
    let conj = |d: &[(u32, bool)]| -> BoolExpr {
        let mut it = d.iter().rev().copied().map(lit);
        match it.next() {
            None => BoolExpr::True,
            Some(last) => it.fold(last, |acc, l| BoolExpr::And(Box::new(l), Box::new(acc))),
        }
    };
    let mut it = disjuncts.iter().rev().map(|d| conj(d));
    Ok(match it.next() {
        None => BoolExpr::False,
        Some(last) => it.fold(last, |acc, d| BoolExpr::Or(Box::new(d), Box::new(acc))),
    })
}

/// Atom after simplification: oriented equality or relation application.
/// The derived order puts equalities before relation atoms, then sorts
/// lexicographically by symbol and argument tuple.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    Eq(LogicTerm, LogicTerm),
    Rel(String, Vec<LogicTerm>),
}

impl Atom {
    fn to_formula(&self) -> Formula {
        match self {
            Atom::Eq(a, b) => Formula::Eq(a.clone(), b.clone()),
            Atom::Rel(r, args) => Formula::Rel(r.clone(), args.clone()),
        }
    }
}

/// Simplify one atom: `t = t` collapses to `true`, equalities are oriented
/// with the smaller term first.
fn simplify_atom(f: &Formula) -> core::result::Result<Atom, bool> {
    match f {
        Formula::Eq(a, b) => {
            if a == b {
                Err(true)
            } else if a <= b {
                Ok(Atom::Eq(a.clone(), b.clone()))
            } else {
                Ok(Atom::Eq(b.clone(), a.clone()))
            }
        }
        Formula::Rel(r, args) => Ok(Atom::Rel(r.clone(), args.clone())),
        _ => unreachable!("simplify_atom applied to a non-atom"),
    }
}

/// Abstract the formula to a propositional skeleton over its distinct
/// simplified atoms (or arbitrary opaque component formulas).
fn to_bool_skeleton(
    f: &Formula,
    components: &mut BTreeMap<Formula, u32>,
    rewrite_atom: &dyn Fn(&Formula) -> core::result::Result<Formula, bool>,
) -> Result<BoolExpr> {
    match f {
        Formula::True => Ok(BoolExpr::True),
        Formula::False => Ok(BoolExpr::False),
        Formula::Eq(..) | Formula::Rel(..) | Formula::Exists(..) | Formula::Forall(..) => {
            match rewrite_atom(f) {
                Err(true) => Ok(BoolExpr::True),
                Err(false) => Ok(BoolExpr::False),
                Ok(component) => {
                    let next = components.len() as u32 + 1;
                    let id = *components.entry(component).or_insert(next);
                    Ok(BoolExpr::Var(id))
                }
            }
        }
        Formula::Not(g) => Ok(BoolExpr::Not(Box::new(to_bool_skeleton(
            g, components, rewrite_atom,
        )?))),
        Formula::And(a, b) => Ok(BoolExpr::And(
            Box::new(to_bool_skeleton(a, components, rewrite_atom)?),
            Box::new(to_bool_skeleton(b, components, rewrite_atom)?),
        )),
        Formula::Or(a, b) => Ok(BoolExpr::Or(
            Box::new(to_bool_skeleton(a, components, rewrite_atom)?),
            Box::new(to_bool_skeleton(b, components, rewrite_atom)?),
        )),
    }
}

/// Renumber skeleton variables so that component ids follow the canonical
/// component order, then normalize and substitute the components back.
fn reassemble(skeleton: &BoolExpr, components: &BTreeMap<Formula, u32>) -> Result<Formula> {
    // components sorted by their own (formula) order get the final indices
    let sorted: Vec<&Formula> = components.keys().collect();
    let renumber: BTreeMap<u32, u32> = components
        .iter()
        .map(|(f, old)| {
            let new = sorted.iter().position(|g| *g == f).unwrap() as u32 + 1;
            (*old, new)
        })
        .collect();
    fn rename(e: &BoolExpr, map: &BTreeMap<u32, u32>) -> BoolExpr {
        match e {
            BoolExpr::True => BoolExpr::True,
            BoolExpr::False => BoolExpr::False,
            BoolExpr::Var(v) => BoolExpr::Var(map[v]),
            BoolExpr::Not(f) => BoolExpr::Not(Box::new(rename(f, map))),
            BoolExpr::And(a, b) => {
                BoolExpr::And(Box::new(rename(a, map)), Box::new(rename(b, map)))
            }
            BoolExpr::Or(a, b) => {
                BoolExpr::Or(Box::new(rename(a, map)), Box::new(rename(b, map)))
            }
        }
    }
    let canonical = normalize_bool(&rename(skeleton, &renumber))?;
    // substitute components back
    fn subst(e: &BoolExpr, comps: &[&Formula]) -> Formula {
        match e {
            BoolExpr::True => Formula::True,
            BoolExpr::False => Formula::False,
            BoolExpr::Var(v) => comps[(*v - 1) as usize].clone(),
            BoolExpr::Not(f) => Formula::not(subst(f, comps)),
            BoolExpr::And(a, b) => Formula::and(subst(a, comps), subst(b, comps)),
            BoolExpr::Or(a, b) => Formula::or(subst(a, comps), subst(b, comps)),
        }
    }
    Ok(subst(&canonical, &sorted))
}

/// Canonical form of a quantifier-free formula: atoms are simplified
/// (`t = t` to `true`, equalities oriented) and enumerated in the fixed
/// atom order, then the Boolean skeleton over the distinct atoms is put in
/// canonical disjunctive normal form. Syntactically equivalent formulas
/// (equal up to Boolean laws and atom orientation) get identical outputs.
pub fn normalize_qf(f: &Formula, sort: &Sort, vars: &BTreeSet<VarId>) -> Result<Formula> {
    if !f.is_quantifier_free() {
        return Err(Error::Formula(
            "quantifier found in quantifier-free normalization".to_string(),
        ));
    }
    f.check_sort(sort)?;
    if let Some(v) = f.free_vars().iter().find(|v| !vars.contains(v)) {
        return Err(Error::Formula(format!(
            "free variable {v} outside the declared set"
        )));
    }
    let mut components = BTreeMap::new();
    let skeleton = to_bool_skeleton(f, &mut components, &|atom| {
        simplify_atom(atom).map(|a| a.to_formula())
    })?;
    reassemble(&skeleton, &components)
}

/// Canonical form of a first-order formula of quantifier depth at most
/// `k`: quantifier-free parts via [`normalize_qf`]'s atom treatment, each
/// quantified subformula rebound to the least variable not free at its
/// position, and every Boolean layer put in canonical form over its
/// distinct reduced components.
pub fn normalize_fo(f: &Formula, sort: &Sort, k: usize) -> Result<Formula> {
    if f.qdepth() > k {
        return Err(Error::Formula(format!(
            "quantifier depth {} exceeds the bound {k}",
            f.qdepth()
        )));
    }
    f.check_sort(sort)?;
    let free: BTreeSet<VarId> = f.free_vars();
    normalize_fo_rec(f, &BTreeMap::new(), &free)
}

fn min_var_not_in(used: &BTreeSet<VarId>) -> VarId {
    let mut i = 1;
    while used.contains(&VarId(i)) {
        i += 1;
    }
    VarId(i)
}

fn normalize_fo_rec(
    f: &Formula,
    subst: &BTreeMap<VarId, VarId>,
    allowed: &BTreeSet<VarId>,
) -> Result<Formula> {
    let mut components: BTreeMap<Formula, u32> = BTreeMap::new();
    // collect components by walking the boolean layer manually so the
    // quantified ones can recurse with the right variable context
    fn skeleton(
        f: &Formula,
        subst: &BTreeMap<VarId, VarId>,
        allowed: &BTreeSet<VarId>,
        components: &mut BTreeMap<Formula, u32>,
    ) -> Result<BoolExpr> {
        match f {
            Formula::True => Ok(BoolExpr::True),
            Formula::False => Ok(BoolExpr::False),
            Formula::Eq(..) | Formula::Rel(..) => {
                let renamed = f.subst_vars(
                    &subst
                        .iter()
                        .map(|(a, b)| (*a, LogicTerm::Var(*b)))
                        .collect(),
                );
                match simplify_atom(&renamed) {
                    Err(b) => Ok(if b { BoolExpr::True } else { BoolExpr::False }),
                    Ok(atom) => {
                        let next = components.len() as u32 + 1;
                        let id = *components.entry(atom.to_formula()).or_insert(next);
                        Ok(BoolExpr::Var(id))
                    }
                }
            }
            Formula::Exists(v, g) | Formula::Forall(v, g) => {
                let target = min_var_not_in(allowed);
                let mut inner_subst = subst.clone();
                inner_subst.insert(*v, target);
                let mut inner_allowed = allowed.clone();
                inner_allowed.insert(target);
                let body = normalize_fo_rec(g, &inner_subst, &inner_allowed)?;
                let component = match f {
                    Formula::Exists(..) => Formula::Exists(target, Box::new(body)),
                    _ => Formula::Forall(target, Box::new(body)),
                };
                let next = components.len() as u32 + 1;
                let id = *components.entry(component).or_insert(next);
                Ok(BoolExpr::Var(id))
            }
            Formula::Not(g) => Ok(BoolExpr::Not(Box::new(skeleton(
                g, subst, allowed, components,
            )?))),
            Formula::And(a, b) => Ok(BoolExpr::And(
                Box::new(skeleton(a, subst, allowed, components)?),
                Box::new(skeleton(b, subst, allowed, components)?),
            )),
            Formula::Or(a, b) => Ok(BoolExpr::Or(
                Box::new(skeleton(a, subst, allowed, components)?),
                Box::new(skeleton(b, subst, allowed, components)?),
            )),
        }
    }
    let sk = skeleton(f, subst, allowed, &mut components)?;
    reassemble(&sk, &components)
}

/// The number of atomic formulas over the sort with `n` variables:
/// `(n+c)^2` equalities plus `(n+c)^rank` applications per relation.
pub fn count_atoms(sort: &Sort, n: usize) -> BigUint {
    let base = BigUint::from(n + sort.consts.len());
    let mut total = base.pow(2);
    for ar in sort.rels.values() {
        total += base.pow(*ar as u32);
    }
    total
}

/// The atom count after identifying `x = x` with `true` and `x = y` with
/// `y = x`: `1 + (n+c)(n+c-1)/2` equalities plus the relation atoms.
pub fn count_atoms_reduced(sort: &Sort, n: usize) -> BigUint {
    let m = n + sort.consts.len();
    let base = BigUint::from(m);
    let mut total = BigUint::from(1u32) + BigUint::from(m * m.saturating_sub(1) / 2);
    for ar in sort.rels.values() {
        total += base.pow(*ar as u32);
    }
    total
}

/// A possibly astronomically large count: either an exact big integer, a
/// power of two of another magnitude, or a small multiple of one. The
/// reduced-form bounds grow as towers of exponentials, so they cannot
/// always be materialized.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Magnitude {
    Exact(BigUint),
    Pow2(Box<Magnitude>),
    Mul(BigUint, Box<Magnitude>),
}

impl Magnitude {
    fn pow2(m: Magnitude) -> Magnitude {
        if let Magnitude::Exact(e) = &m {
            if e.bits() <= 20 {
                let shift: u64 = e.try_into().expect("fits by the bit check");
                return Magnitude::Exact(BigUint::from(1u32) << shift);
            }
        }
        Magnitude::Pow2(Box::new(m))
    }

    fn mul(k: u32, m: Magnitude) -> Magnitude {
        match m {
            Magnitude::Exact(e) => Magnitude::Exact(e * k),
            other => Magnitude::Mul(BigUint::from(k), Box::new(other)),
        }
    }

    pub fn to_exact(&self) -> Option<&BigUint> {
        match self {
            Magnitude::Exact(e) => Some(e),
            _ => None,
        }
    }

    /// Conservative comparison: `true` guarantees `self >= x`.
    pub fn is_at_least(&self, x: &BigUint) -> bool {
        match self {
            Magnitude::Exact(e) => e >= x,
            Magnitude::Pow2(m) => {
                // 2^m >= x whenever m >= bits(x)
                m.is_at_least(&BigUint::from(x.bits()))
            }
            Magnitude::Mul(_, m) => m.is_at_least(x),
        }
    }
}

impl core::fmt::Display for Magnitude {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            Magnitude::Exact(e) => write!(f, "{e}"),
            Magnitude::Pow2(m) => write!(f, "2^({m})"),
            Magnitude::Mul(k, m) => write!(f, "{k}*({m})"),
        }
    }
}

/// Upper bounds on the number of reduced first-order forms: `g(k)` bounds
/// the reduced formulas of depth `k` over `n` variables, `h(k)` the
/// component set they are built from, via
/// `g(0) <= 2^f`, `h(k) <= 3 g(k-1, n+1)`, `g(k) <= 2^(2^h(k))`.
pub fn reduced_count_bounds(sort: &Sort, n: usize, k: usize) -> (Magnitude, Magnitude) {
    if k == 0 {
        let f = count_atoms(sort, n);
        return (
            Magnitude::pow2(Magnitude::Exact(f.clone())),
            Magnitude::Exact(f),
        );
    }
    let (g_prev, _) = reduced_count_bounds(sort, n + 1, k - 1);
    let h = Magnitude::mul(3, g_prev);
    let g = Magnitude::pow2(Magnitude::pow2(h.clone()));
    (g, h)
}
