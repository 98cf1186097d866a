//! Quantifier-free definable operation schemes as validated first-class
//! data: construction, application, composition, source-separation
//! analysis, and the splitting of a unary operation over a disjoint union.

mod builtins;
mod split;

pub use builtins::{
    add_ports, fg_port, fus, inclusion, mark, mdf, ren_port, srcfg, srcren,
};
pub use split::{split_over_union, UnionSplit};

use crate::error::{Error, Result};
use crate::logic::{eval, qf_disagreement_witness, Assignment, Formula, LogicTerm, VarId};
use crate::structures::{ElemId, Label, Sort, Structure};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Unvalidated scheme data: a domain formula over `x1`, one defining
/// formula per output relation over `x1..x_arity`, and one closed source
/// resolution formula per (input constant, output constant) pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawScheme {
    pub input: Sort,
    pub output: Sort,
    pub delta: Formula,
    pub phi: BTreeMap<String, Formula>,
    pub kappa: BTreeMap<(Label, Label), Formula>,
}

/// A validated scheme defining a unary operation between sorts. Obtained
/// through [`validate_scheme`] (or from the builtin constructors, which
/// are correct by construction); application assumes validity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QfdScheme {
    raw: RawScheme,
}

/// Why a raw scheme was rejected: a shape error (arities, sorts, missing
/// formulas) or the first semantic condition falsified, with its witness.
#[derive(Clone, Debug)]
pub enum ViolationReport {
    Shape(Error),
    Condition {
        condition: String,
        witness: Structure,
        assignment: Assignment,
    },
    Capacity(Error),
}

impl core::fmt::Display for ViolationReport {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ViolationReport::Shape(e) => write!(f, "shape: {e}"),
            ViolationReport::Condition {
                condition,
                witness,
                assignment,
            } => write!(
                f,
                "condition {condition} fails in {witness:?} under {assignment:?}"
            ),
            ViolationReport::Capacity(e) => write!(f, "{e}"),
        }
    }
}

impl From<ViolationReport> for Error {
    fn from(v: ViolationReport) -> Error {
        match v {
            ViolationReport::Shape(e) | ViolationReport::Capacity(e) => e,
            c => Error::Invalid(format!("{c}")),
        }
    }
}

impl QfdScheme {
    /// Wrap scheme data without running the semantic checks. For schemes
    /// correct by construction; everything user-supplied goes through
    /// [`validate_scheme`].
    pub(crate) fn assume_valid(raw: RawScheme) -> QfdScheme {
        QfdScheme { raw }
    }

    pub fn input(&self) -> &Sort {
        &self.raw.input
    }

    pub fn output(&self) -> &Sort {
        &self.raw.output
    }

    pub fn delta(&self) -> &Formula {
        &self.raw.delta
    }

    pub fn phi(&self, rel: &str) -> Result<&Formula> {
        self.raw
            .phi
            .get(rel)
            .ok_or_else(|| Error::UnknownSymbol(format!("no defining formula for {rel}")))
    }

    pub fn kappa(&self, c: &Label, d: &Label) -> Result<&Formula> {
        self.raw
            .kappa
            .get(&(c.clone(), d.clone()))
            .ok_or_else(|| Error::UnknownSymbol(format!("no kappa for ({c},{d})")))
    }

    pub fn raw(&self) -> &RawScheme {
        &self.raw
    }
}

fn shape_check(raw: &RawScheme) -> Result<()> {
    raw.delta.check_sort(&raw.input)?;
    if !raw.delta.is_quantifier_free() {
        return Err(Error::Formula("delta must be quantifier-free".to_string()));
    }
    if raw
        .delta
        .free_vars()
        .iter()
        .any(|v| *v != VarId(1))
    {
        return Err(Error::Formula("delta may use only x1".to_string()));
    }
    for (rel, ar) in &raw.output.rels {
        let phi = raw
            .phi
            .get(rel)
            .ok_or_else(|| Error::UnknownSymbol(format!("no defining formula for {rel}")))?;
        phi.check_sort(&raw.input)?;
        if !phi.is_quantifier_free() {
            return Err(Error::Formula(format!("phi for {rel} must be quantifier-free")));
        }
        if phi
            .free_vars()
            .iter()
            .any(|v| v.0 == 0 || v.0 as usize > *ar)
        {
            return Err(Error::Formula(format!(
                "phi for {rel}/{ar} may use only x1..x{ar}"
            )));
        }
    }
    if let Some(extra) = raw.phi.keys().find(|r| !raw.output.rels.contains_key(*r)) {
        return Err(Error::UnknownSymbol(format!(
            "phi given for {extra}, not an output relation"
        )));
    }
    for d in &raw.output.consts {
        for c in &raw.input.consts {
            let kappa = raw
                .kappa
                .get(&(c.clone(), d.clone()))
                .ok_or_else(|| Error::UnknownSymbol(format!("no kappa for ({c},{d})")))?;
            kappa.check_sort(&raw.input)?;
            if !kappa.is_quantifier_free() || !kappa.free_vars().is_empty() {
                return Err(Error::Formula(format!(
                    "kappa for ({c},{d}) must be closed and quantifier-free"
                )));
            }
        }
        if raw.input.consts.is_empty() {
            return Err(Error::Sort(format!(
                "output constant {d} cannot be resolved from a constant-free input sort"
            )));
        }
    }
    if let Some(((c, d), _)) = raw
        .kappa
        .iter()
        .find(|((c, d), _)| !raw.input.consts.contains(c) || !raw.output.consts.contains(d))
    {
        return Err(Error::UnknownSymbol(format!(
            "kappa for ({c},{d}) outside the declared sorts"
        )));
    }
    Ok(())
}

fn cst(c: &Label) -> LogicTerm {
    LogicTerm::Const(c.clone())
}

/// Check the four validity conditions of a raw scheme, each as a
/// small-model validity question; the first falsifying structure is
/// reported. Shape errors (arities, sorts, missing formulas) are reported
/// before any semantic check runs.
pub fn validate_scheme(raw: RawScheme) -> core::result::Result<QfdScheme, ViolationReport> {
    shape_check(&raw).map_err(ViolationReport::Shape)?;
    let no_vars = BTreeSet::new();
    let mut conditions: Vec<(String, Formula, BTreeSet<VarId>)> = Vec::new();
    for d in &raw.output.consts {
        // uniqueness: two resolvers for d must have equal values
        for c1 in &raw.input.consts {
            for c2 in &raw.input.consts {
                if c1 >= c2 {
                    continue;
                }
                let k1 = raw.kappa[&(c1.clone(), d.clone())].clone();
                let k2 = raw.kappa[&(c2.clone(), d.clone())].clone();
                conditions.push((
                    format!("uniqueness of the resolver for {d} ({c1} vs {c2})"),
                    Formula::implies(Formula::and(k1, k2), Formula::eq(cst(c1), cst(c2))),
                    no_vars.clone(),
                ));
            }
        }
        // existence: some resolver fires
        conditions.push((
            format!("existence of a resolver for {d}"),
            Formula::any(
                raw.input
                    .consts
                    .iter()
                    .map(|c| raw.kappa[&(c.clone(), d.clone())].clone()),
            ),
            no_vars.clone(),
        ));
        // membership: the resolver lies in the new domain
        for c in &raw.input.consts {
            let k = raw.kappa[&(c.clone(), d.clone())].clone();
            let delta_c = raw
                .delta
                .subst_vars(&[(VarId(1), cst(c))].into_iter().collect());
            conditions.push((
                format!("resolver {c} for {d} satisfies delta"),
                Formula::implies(k, delta_c),
                no_vars.clone(),
            ));
        }
    }
    for (rel, ar) in &raw.output.rels {
        let phi = raw.phi[rel].clone();
        let guard = Formula::all((1..=*ar).map(|i| {
            raw.delta
                .subst_vars(&[(VarId(1), Formula::var(i as u32))].into_iter().collect())
        }));
        conditions.push((
            format!("arguments of {rel} satisfy delta"),
            Formula::implies(phi, guard),
            (1..=*ar).map(|i| VarId(i as u32)).collect(),
        ));
    }
    for (name, cond, vars) in conditions {
        match qf_disagreement_witness(&cond, &Formula::True, &raw.input, &vars) {
            Ok(None) => {}
            Ok(Some((witness, assignment))) => {
                return Err(ViolationReport::Condition {
                    condition: name,
                    witness,
                    assignment,
                })
            }
            Err(e @ Error::Capacity(_)) => return Err(ViolationReport::Capacity(e)),
            Err(e) => return Err(ViolationReport::Shape(e)),
        }
    }
    Ok(QfdScheme { raw })
}

/// Apply the scheme: the new domain is the set of delta-satisfiers (ids
/// retained), relations are the phi-satisfiers, and each output source is
/// the value of the unique resolving input constant.
pub fn apply_scheme(scheme: &QfdScheme, s: &Structure) -> Result<Structure> {
    if *s.sort() != scheme.raw.input {
        return Err(Error::Sort(format!(
            "structure of sort {} fed to a scheme expecting {}",
            s.sort(),
            scheme.raw.input
        )));
    }
    let mut domain = BTreeSet::new();
    for x in s.domain() {
        let a: Assignment = [(VarId(1), *x)].into_iter().collect();
        if eval(s, &scheme.raw.delta, &a)? {
            domain.insert(*x);
        }
    }
    let mut tuples: BTreeMap<String, BTreeSet<Vec<ElemId>>> = BTreeMap::new();
    for (rel, ar) in &scheme.raw.output.rels {
        let phi = &scheme.raw.phi[rel];
        let mut set = BTreeSet::new();
        let mut stack: Vec<Vec<ElemId>> = alloc::vec![Vec::new()];
        for _ in 0..*ar {
            let mut next = Vec::new();
            for t in &stack {
                for x in &domain {
                    let mut t2 = t.clone();
                    t2.push(*x);
                    next.push(t2);
                }
            }
            stack = next;
        }
        for t in stack {
            let a: Assignment = t
                .iter()
                .enumerate()
                .map(|(i, x)| (VarId(i as u32 + 1), *x))
                .collect();
            if eval(s, phi, &a)? {
                set.insert(t);
            }
        }
        tuples.insert(rel.clone(), set);
    }
    let mut sources = BTreeMap::new();
    for d in &scheme.raw.output.consts {
        let mut resolved = None;
        for c in &scheme.raw.input.consts {
            if eval(s, &scheme.raw.kappa[&(c.clone(), d.clone())], &Assignment::new())? {
                resolved = Some(s.source(c)?);
                break;
            }
        }
        let x = resolved.ok_or_else(|| {
            Error::Invalid(format!(
                "validated scheme failed to resolve output constant {d}"
            ))
        })?;
        sources.insert(d.clone(), x);
    }
    Structure::new(scheme.raw.output.clone(), domain, tuples, sources)
}

/// Compose two schemes (output sort of `first` must equal the input sort
/// of `second`): relation atoms of the second scheme's formulas are
/// replaced by the first scheme's defining formulas, middle-sort constants
/// are resolved by a guarded disjunction over all mappings into the input
/// constants, and source resolution chains through the middle sort.
pub fn compose_schemes(second: &QfdScheme, first: &QfdScheme) -> Result<QfdScheme> {
    if first.raw.output != second.raw.input {
        return Err(Error::Sort(format!(
            "cannot compose: middle sorts {} vs {}",
            first.raw.output, second.raw.input
        )));
    }
    let mid_consts: Vec<Label> = first.raw.output.consts.iter().cloned().collect();
    let in_consts: Vec<Label> = first.raw.input.consts.iter().cloned().collect();
    // middle-sort constants may share names with input constants inside
    // the substituted relation definitions; set them apart first
    let marked: BTreeMap<Label, Label> = mid_consts
        .iter()
        .map(|d| (d.clone(), format!("\u{1}{d}")))
        .collect();

    // substitute the first scheme's relation definitions into a formula of
    // the middle sort, then resolve middle constants over all mappings
    let translate = |f: &Formula| -> Result<Formula> {
        let substituted = subst_rel_atoms(&f.subst_consts(&marked), first)?;
        if mid_consts.is_empty() {
            return Ok(substituted);
        }
        let mut maps: Vec<BTreeMap<Label, Label>> = alloc::vec![BTreeMap::new()];
        for d in &mid_consts {
            let mut next = Vec::new();
            for m in &maps {
                for c in &in_consts {
                    let mut m2 = m.clone();
                    m2.insert(d.clone(), c.clone());
                    next.push(m2);
                }
            }
            maps = next;
        }
        let mut branches = Vec::new();
        for h in &maps {
            let guards = Formula::all(
                mid_consts
                    .iter()
                    .map(|d| first.raw.kappa[&(h[d].clone(), d.clone())].clone()),
            );
            let resolve: BTreeMap<Label, Label> = h
                .iter()
                .map(|(d, c)| (marked[d].clone(), c.clone()))
                .collect();
            branches.push(Formula::and(guards, substituted.subst_consts(&resolve)));
        }
        Ok(Formula::any(branches))
    };

    let delta_second = translate(&second.raw.delta)?;
    let delta = Formula::and(first.raw.delta.clone(), delta_second);

    let mut phi = BTreeMap::new();
    for (rel, ar) in &second.raw.output.rels {
        let core = translate(&second.raw.phi[rel])?;
        let guard = Formula::all((1..=*ar).map(|i| {
            delta.subst_vars(&[(VarId(1), Formula::var(i as u32))].into_iter().collect())
        }));
        phi.insert(rel.clone(), Formula::and(guard, core));
    }

    let mut kappa = BTreeMap::new();
    for d in &second.raw.output.consts {
        for b in &first.raw.input.consts {
            let branches = mid_consts.iter().map(|c| {
                let k1 = first.raw.kappa[&(b.clone(), c.clone())].clone();
                let k2 = translate(&second.raw.kappa[&(c.clone(), d.clone())])
                    .expect("kappa translation cannot fail after delta translation");
                Formula::and(k1, k2)
            });
            kappa.insert((b.clone(), d.clone()), Formula::any(branches));
        }
    }

    Ok(QfdScheme::assume_valid(RawScheme {
        input: first.raw.input.clone(),
        output: second.raw.output.clone(),
        delta,
        phi,
        kappa,
    }))
}

fn subst_rel_atoms(f: &Formula, scheme: &QfdScheme) -> Result<Formula> {
    match f {
        Formula::True | Formula::False | Formula::Eq(..) => Ok(f.clone()),
        Formula::Rel(r, args) => {
            let phi = scheme.phi(r)?;
            let map: BTreeMap<VarId, LogicTerm> = args
                .iter()
                .enumerate()
                .map(|(i, a)| (VarId(i as u32 + 1), a.clone()))
                .collect();
            Ok(phi.subst_vars(&map))
        }
        Formula::Not(g) => Ok(Formula::not(subst_rel_atoms(g, scheme)?)),
        Formula::And(a, b) => Ok(Formula::and(
            subst_rel_atoms(a, scheme)?,
            subst_rel_atoms(b, scheme)?,
        )),
        Formula::Or(a, b) => Ok(Formula::or(
            subst_rel_atoms(a, scheme)?,
            subst_rel_atoms(b, scheme)?,
        )),
        Formula::Exists(..) | Formula::Forall(..) => Err(Error::Formula(
            "scheme formulas are quantifier-free".to_string(),
        )),
    }
}

/// Decide whether the scheme preserves source separation, by applying it
/// to every source-separated type of the input sort and checking the
/// images. The type of the image depends only on the type of the argument,
/// so this is complete.
pub fn preserves_source_separation(scheme: &QfdScheme) -> Result<bool> {
    let consts: Vec<Label> = scheme.raw.input.consts.iter().cloned().collect();
    let n = consts.len();
    if scheme.raw.output.consts.len() <= 1 {
        return Ok(true);
    }
    if n == 0 {
        // no constants: shape check already rejected output constants
        return Ok(true);
    }
    // a source-separated type has exactly one element per label; relations
    // range over all subsets of tuples on those elements
    let domain: BTreeSet<ElemId> = (0..n as ElemId).collect();
    let sources: BTreeMap<Label, ElemId> = consts
        .iter()
        .enumerate()
        .map(|(i, c)| (c.clone(), i as ElemId))
        .collect();
    let mut rel_choices: Vec<BTreeMap<String, BTreeSet<Vec<ElemId>>>> =
        alloc::vec![BTreeMap::new()];
    for (r, ar) in &scheme.raw.input.rels {
        let mut tuples: Vec<Vec<ElemId>> = alloc::vec![Vec::new()];
        for _ in 0..*ar {
            let mut next = Vec::new();
            for t in &tuples {
                for x in &domain {
                    let mut t2 = t.clone();
                    t2.push(*x);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        if tuples.len() > 24 {
            return Err(Error::Capacity(format!(
                "separation check over {} tuples for {r}",
                tuples.len()
            )));
        }
        let mut next = Vec::new();
        for choice in &rel_choices {
            for mask in 0u64..(1u64 << tuples.len()) {
                let set: BTreeSet<Vec<ElemId>> = tuples
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, t)| t.clone())
                    .collect();
                let mut c2 = choice.clone();
                c2.insert(r.clone(), set);
                next.push(c2);
            }
        }
        rel_choices = next;
    }
    for tuples in rel_choices {
        let s = Structure::new(
            scheme.raw.input.clone(),
            domain.clone(),
            tuples,
            sources.clone(),
        )
        .expect("separated type is well formed");
        if !apply_scheme(scheme, &s)?.is_source_separated() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The syntactic sufficient condition for separation preservation: no
/// input constant may resolve two distinct output constants at once.
pub fn separation_syntactic_check(scheme: &QfdScheme) -> Result<bool> {
    let vars = BTreeSet::new();
    for c in &scheme.raw.input.consts {
        for d1 in &scheme.raw.output.consts {
            for d2 in &scheme.raw.output.consts {
                if d1 >= d2 {
                    continue;
                }
                let k1 = scheme.raw.kappa[&(c.clone(), d1.clone())].clone();
                let k2 = scheme.raw.kappa[&(c.clone(), d2.clone())].clone();
                let cond = Formula::implies(k1, Formula::not(k2));
                if qf_disagreement_witness(&cond, &Formula::True, &scheme.raw.input, &vars)?
                    .is_some()
                {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests;
