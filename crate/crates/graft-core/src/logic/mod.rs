//! First-order formulas over relational sorts: evaluation, canonical
//! reduced forms, small-model equivalence, and bounded-depth theories with
//! compositional computation over disjoint union and scheme application.

mod normal;
mod sexpr;
mod theory;

#[doc(hidden)]
pub mod sexpr_support {
    pub(crate) use super::sexpr::{parse_sexpr, Sexpr};
}

pub use normal::{
    count_atoms, count_atoms_reduced, normalize_bool, normalize_fo, normalize_qf,
    parse_bool, reduced_count_bounds, BoolExpr, Magnitude,
};
pub use sexpr::{parse_formula, print_formula};
pub use theory::{
    backward_translate, fo_theory, fo_theory_with_params, qf_disagreement_witness,
    qf_equivalent, theory_oplus, theory_qfd, type_satisfies, HintikkaType,
};

use crate::error::{Error, Result};
use crate::structures::{ElemId, Label, Sort, Structure};
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// A first-order variable, one of the fixed enumeration `x1, x2, ...`.
/// Indices start at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub u32);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// A term in an atom: a variable or a source-label constant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LogicTerm {
    Var(VarId),
    Const(Label),
}

impl fmt::Display for LogicTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogicTerm::Var(v) => write!(f, "{v}"),
            LogicTerm::Const(c) => write!(f, "(const {c})"),
        }
    }
}

/// First-order formula AST. Quantifier-free iff it has no `Exists`/`Forall`
/// node.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Formula {
    True,
    False,
    Eq(LogicTerm, LogicTerm),
    Rel(String, Vec<LogicTerm>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(VarId, Box<Formula>),
    Forall(VarId, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::or(Formula::not(a), b)
    }

    /// Conjunction of a list; `true` when empty.
    pub fn all<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::True,
            Some(first) => it.fold(first, Formula::and),
        }
    }

    /// Disjunction of a list; `false` when empty.
    pub fn any<I: IntoIterator<Item = Formula>>(fs: I) -> Formula {
        let mut it = fs.into_iter();
        match it.next() {
            None => Formula::False,
            Some(first) => it.fold(first, Formula::or),
        }
    }

    pub fn var(i: u32) -> LogicTerm {
        LogicTerm::Var(VarId(i))
    }

    pub fn cst(c: &str) -> LogicTerm {
        LogicTerm::Const(c.into())
    }

    pub fn eq(a: LogicTerm, b: LogicTerm) -> Formula {
        Formula::Eq(a, b)
    }

    pub fn rel<I: IntoIterator<Item = LogicTerm>>(name: &str, args: I) -> Formula {
        Formula::Rel(name.into(), args.into_iter().collect())
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Rel(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Maximum nesting of quantifiers; both kinds count uniformly.
    pub fn qdepth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Eq(..) | Formula::Rel(..) => 0,
            Formula::Not(f) => f.qdepth(),
            Formula::And(a, b) | Formula::Or(a, b) => a.qdepth().max(b.qdepth()),
            Formula::Exists(_, f) | Formula::Forall(_, f) => 1 + f.qdepth(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<VarId> {
        fn go(f: &Formula, bound: &mut Vec<VarId>, out: &mut BTreeSet<VarId>) {
            match f {
                Formula::True | Formula::False => {}
                Formula::Eq(a, b) => {
                    for t in [a, b] {
                        if let LogicTerm::Var(v) = t {
                            if !bound.contains(v) {
                                out.insert(*v);
                            }
                        }
                    }
                }
                Formula::Rel(_, args) => {
                    for t in args {
                        if let LogicTerm::Var(v) = t {
                            if !bound.contains(v) {
                                out.insert(*v);
                            }
                        }
                    }
                }
                Formula::Not(g) => go(g, bound, out),
                Formula::And(a, b) | Formula::Or(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Exists(v, g) | Formula::Forall(v, g) => {
                    bound.push(*v);
                    go(g, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    /// Check that relation symbols and arities match the sort and constants
    /// belong to it.
    pub fn check_sort(&self, sort: &Sort) -> Result<()> {
        match self {
            Formula::True | Formula::False => Ok(()),
            Formula::Eq(a, b) => {
                for t in [a, b] {
                    if let LogicTerm::Const(c) = t {
                        if !sort.consts.contains(c) {
                            return Err(Error::UnknownSymbol(format!("constant {c}")));
                        }
                    }
                }
                Ok(())
            }
            Formula::Rel(name, args) => {
                let ar = *sort
                    .rels
                    .get(name)
                    .ok_or_else(|| Error::UnknownSymbol(format!("relation {name}")))?;
                if args.len() != ar {
                    return Err(Error::Arity(format!(
                        "relation {name}/{ar} applied to {} arguments",
                        args.len()
                    )));
                }
                for t in args {
                    if let LogicTerm::Const(c) = t {
                        if !sort.consts.contains(c) {
                            return Err(Error::UnknownSymbol(format!("constant {c}")));
                        }
                    }
                }
                Ok(())
            }
            Formula::Not(f) => f.check_sort(sort),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.check_sort(sort)?;
                b.check_sort(sort)
            }
            Formula::Exists(_, f) | Formula::Forall(_, f) => f.check_sort(sort),
        }
    }

    /// Substitute constants by constants (used by scheme composition).
    pub fn subst_consts(&self, map: &BTreeMap<Label, Label>) -> Formula {
        let term = |t: &LogicTerm| match t {
            LogicTerm::Const(c) => LogicTerm::Const(map.get(c).cloned().unwrap_or(c.clone())),
            v => v.clone(),
        };
        match self {
            Formula::True => Formula::True,
            Formula::False => Formula::False,
            Formula::Eq(a, b) => Formula::Eq(term(a), term(b)),
            Formula::Rel(r, args) => Formula::Rel(r.clone(), args.iter().map(term).collect()),
            Formula::Not(f) => Formula::not(f.subst_consts(map)),
            Formula::And(a, b) => Formula::and(a.subst_consts(map), b.subst_consts(map)),
            Formula::Or(a, b) => Formula::or(a.subst_consts(map), b.subst_consts(map)),
            Formula::Exists(v, f) => Formula::Exists(*v, Box::new(f.subst_consts(map))),
            Formula::Forall(v, f) => Formula::Forall(*v, Box::new(f.subst_consts(map))),
        }
    }

    /// Substitute free variables by terms, leaving bound occurrences alone.
    /// Callers must ensure no capture (our uses substitute constants or
    /// fresh variables only).
    pub fn subst_vars(&self, map: &BTreeMap<VarId, LogicTerm>) -> Formula {
        fn go(f: &Formula, map: &BTreeMap<VarId, LogicTerm>) -> Formula {
            let term = |t: &LogicTerm| match t {
                LogicTerm::Var(v) => map.get(v).cloned().unwrap_or(LogicTerm::Var(*v)),
                c => c.clone(),
            };
            match f {
                Formula::True => Formula::True,
                Formula::False => Formula::False,
                Formula::Eq(a, b) => Formula::Eq(term(a), term(b)),
                Formula::Rel(r, args) => {
                    Formula::Rel(r.clone(), args.iter().map(term).collect())
                }
                Formula::Not(g) => Formula::not(go(g, map)),
                Formula::And(a, b) => Formula::and(go(a, map), go(b, map)),
                Formula::Or(a, b) => Formula::or(go(a, map), go(b, map)),
                Formula::Exists(v, g) => {
                    let mut inner = map.clone();
                    inner.remove(v);
                    Formula::Exists(*v, Box::new(go(g, &inner)))
                }
                Formula::Forall(v, g) => {
                    let mut inner = map.clone();
                    inner.remove(v);
                    Formula::Forall(*v, Box::new(go(g, &inner)))
                }
            }
        }
        go(self, map)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", print_formula(self))
    }
}

/// Partial mapping from variables to element ids, covering the free
/// variables of the formula under evaluation.
pub type Assignment = BTreeMap<VarId, ElemId>;

/// Standard Tarskian evaluation of `f` in `s` under `a`.
pub fn eval(s: &Structure, f: &Formula, a: &Assignment) -> Result<bool> {
    let term = |t: &LogicTerm, a: &Assignment| -> Result<ElemId> {
        match t {
            LogicTerm::Var(v) => a
                .get(v)
                .copied()
                .ok_or_else(|| Error::Formula(format!("unassigned free variable {v}"))),
            LogicTerm::Const(c) => s.source(c),
        }
    };
    match f {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Eq(x, y) => Ok(term(x, a)? == term(y, a)?),
        Formula::Rel(r, args) => {
            if !s.sort().rels.contains_key(r) {
                return Err(Error::UnknownSymbol(format!("relation {r}")));
            }
            let vals: Result<Vec<ElemId>> = args.iter().map(|t| term(t, a)).collect();
            Ok(s.has_tuple(r, &vals?))
        }
        Formula::Not(g) => Ok(!eval(s, g, a)?),
        Formula::And(x, y) => Ok(eval(s, x, a)? && eval(s, y, a)?),
        Formula::Or(x, y) => Ok(eval(s, x, a)? || eval(s, y, a)?),
        Formula::Exists(v, g) => {
            for x in s.domain() {
                let mut a2 = a.clone();
                a2.insert(*v, *x);
                if eval(s, g, &a2)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Forall(v, g) => {
            for x in s.domain() {
                let mut a2 = a.clone();
                a2.insert(*v, *x);
                if !eval(s, g, &a2)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}
