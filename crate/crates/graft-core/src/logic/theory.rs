//! Bounded-depth first-order theories as Hintikka types, computed directly
//! from structures or compositionally: the theory of a disjoint union from
//! the theories of the parts, and the theory of a scheme image from the
//! theory of the argument. Two structures get equal depth-`d` types exactly
//! when they satisfy the same sentences of quantifier depth at most `d`.

use super::{Formula, LogicTerm, VarId};
use crate::error::{Error, Result};
use crate::qfd::QfdScheme;
use crate::structures::{ElemId, Label, Sort, Structure};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// Reference to a named constant or to one of the current parameters.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TermRef {
    Param(u32),
    Const(Label),
}

/// An atomic fact over constants and parameters: an oriented equality
/// between distinct references, or a relation application.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AtomFact {
    Eq(TermRef, TermRef),
    Rel(String, Vec<TermRef>),
}

fn eq_fact(a: TermRef, b: TermRef) -> Option<AtomFact> {
    match a.cmp(&b) {
        core::cmp::Ordering::Equal => None,
        core::cmp::Ordering::Less => Some(AtomFact::Eq(a, b)),
        core::cmp::Ordering::Greater => Some(AtomFact::Eq(b, a)),
    }
}

/// The depth-`d` theory of a structure with a list of parameters, in the
/// canonical recursive representation: the set of atomic facts that hold,
/// and at positive depth the set of depth-`d-1` types reachable by
/// appending one element to the parameter list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct HintikkaType {
    sort: Sort,
    depth: u32,
    params: u32,
    atoms: BTreeSet<AtomFact>,
    extensions: BTreeSet<HintikkaType>,
}

impl HintikkaType {
    pub fn sort(&self) -> &Sort {
        &self.sort
    }

    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn params(&self) -> u32 {
        self.params
    }

    /// Forget extension detail beyond depth `d`.
    pub fn project(&self, d: u32) -> Result<HintikkaType> {
        if d > self.depth {
            return Err(Error::Formula(format!(
                "cannot project a depth-{} type to depth {d}",
                self.depth
            )));
        }
        Ok(self.project_unchecked(d))
    }

    fn project_unchecked(&self, d: u32) -> HintikkaType {
        HintikkaType {
            sort: self.sort.clone(),
            depth: d,
            params: self.params,
            atoms: self.atoms.clone(),
            extensions: if d == 0 {
                BTreeSet::new()
            } else {
                self.extensions
                    .iter()
                    .map(|e| e.project_unchecked(d - 1))
                    .collect()
            },
        }
    }
}

impl fmt::Display for HintikkaType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "d{}p{}{{", self.depth, self.params)?;
        let mut first = true;
        for a in &self.atoms {
            if !first {
                write!(f, " ")?;
            }
            match a {
                AtomFact::Eq(x, y) => write!(f, "{x:?}={y:?}")?,
                AtomFact::Rel(r, args) => write!(f, "{r}{args:?}")?,
            }
            first = false;
        }
        write!(f, "|")?;
        let mut first = true;
        for e in &self.extensions {
            if !first {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
            first = false;
        }
        write!(f, "}}")
    }
}

fn atom_facts(s: &Structure, params: &[ElemId]) -> BTreeSet<AtomFact> {
    let mut refs: Vec<(TermRef, ElemId)> = Vec::new();
    for (i, x) in params.iter().enumerate() {
        refs.push((TermRef::Param(i as u32), *x));
    }
    for (c, x) in s.sources() {
        refs.push((TermRef::Const(c.clone()), *x));
    }
    let mut out = BTreeSet::new();
    for (r1, v1) in &refs {
        for (r2, v2) in &refs {
            if v1 == v2 {
                if let Some(fact) = eq_fact(r1.clone(), r2.clone()) {
                    out.insert(fact);
                }
            }
        }
    }
    for (rel, ar) in &s.sort().rels {
        let mut stack: Vec<(Vec<TermRef>, Vec<ElemId>)> = alloc::vec![(Vec::new(), Vec::new())];
        for _ in 0..*ar {
            let mut next = Vec::new();
            for (tr, tv) in &stack {
                for (r, v) in &refs {
                    let mut tr2 = tr.clone();
                    let mut tv2 = tv.clone();
                    tr2.push(r.clone());
                    tv2.push(*v);
                    next.push((tr2, tv2));
                }
            }
            stack = next;
        }
        for (tr, tv) in stack {
            if s.has_tuple(rel, &tv) {
                out.insert(AtomFact::Rel(rel.clone(), tr));
            }
        }
    }
    out
}

fn theory_rec(s: &Structure, params: &mut Vec<ElemId>, depth: u32) -> HintikkaType {
    let atoms = atom_facts(s, params);
    let extensions = if depth == 0 {
        BTreeSet::new()
    } else {
        let domain: Vec<ElemId> = s.domain().iter().copied().collect();
        domain
            .into_iter()
            .map(|x| {
                params.push(x);
                let t = theory_rec(s, params, depth - 1);
                params.pop();
                t
            })
            .collect()
    };
    HintikkaType {
        sort: s.sort().clone(),
        depth,
        params: params.len() as u32,
        atoms,
        extensions,
    }
}

/// The depth-`d` type of `s` with no parameters.
pub fn fo_theory(s: &Structure, d: u32) -> HintikkaType {
    theory_rec(s, &mut Vec::new(), d)
}

/// The depth-`d` type of `s` with the given parameter list.
pub fn fo_theory_with_params(s: &Structure, d: u32, params: &[ElemId]) -> HintikkaType {
    theory_rec(s, &mut params.to_vec(), d)
}

/// Does the type satisfy a sentence? The sentence's quantifier depth must
/// not exceed the type's depth.
pub fn type_satisfies(t: &HintikkaType, sentence: &Formula) -> Result<bool> {
    if sentence.qdepth() > t.depth as usize {
        return Err(Error::Formula(format!(
            "sentence depth {} exceeds type depth {}",
            sentence.qdepth(),
            t.depth
        )));
    }
    if !sentence.free_vars().is_empty() {
        return Err(Error::Formula("sentence has free variables".to_string()));
    }
    satisfies_rec(t, sentence, &BTreeMap::new())
}

fn term_ref(t: &LogicTerm, env: &BTreeMap<VarId, u32>) -> Result<TermRef> {
    match t {
        LogicTerm::Const(c) => Ok(TermRef::Const(c.clone())),
        LogicTerm::Var(v) => env
            .get(v)
            .map(|i| TermRef::Param(*i))
            .ok_or_else(|| Error::Formula(format!("unassigned variable {v}"))),
    }
}

fn satisfies_rec(
    t: &HintikkaType,
    f: &Formula,
    env: &BTreeMap<VarId, u32>,
) -> Result<bool> {
    match f {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Eq(a, b) => {
            let ra = term_ref(a, env)?;
            let rb = term_ref(b, env)?;
            Ok(match eq_fact(ra, rb) {
                None => true,
                Some(fact) => t.atoms.contains(&fact),
            })
        }
        Formula::Rel(r, args) => {
            let refs: Result<Vec<TermRef>> = args.iter().map(|a| term_ref(a, env)).collect();
            Ok(t.atoms.contains(&AtomFact::Rel(r.clone(), refs?)))
        }
        Formula::Not(g) => Ok(!satisfies_rec(t, g, env)?),
        Formula::And(a, b) => Ok(satisfies_rec(t, a, env)? && satisfies_rec(t, b, env)?),
        Formula::Or(a, b) => Ok(satisfies_rec(t, a, env)? || satisfies_rec(t, b, env)?),
        Formula::Exists(v, g) => {
            for ext in &t.extensions {
                let mut env2 = env.clone();
                env2.insert(*v, ext.params - 1);
                if satisfies_rec(ext, g, &env2)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Forall(v, g) => {
            for ext in &t.extensions {
                let mut env2 = env.clone();
                env2.insert(*v, ext.params - 1);
                if !satisfies_rec(ext, g, &env2)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Left,
    Right,
}

/// The type of `S ⊕ S'` from the types of `S` and `S'`: cross-side
/// equalities and cross-side relation atoms are false, same-side atoms are
/// read off the corresponding type, and extensions come from extending
/// either side's parameter list.
pub fn theory_oplus(t1: &HintikkaType, t2: &HintikkaType) -> Result<HintikkaType> {
    if t1.depth != t2.depth {
        return Err(Error::Formula(format!(
            "depth mismatch {} vs {}",
            t1.depth, t2.depth
        )));
    }
    if t1.params != 0 || t2.params != 0 {
        return Err(Error::Formula(
            "composed types must have no parameters".to_string(),
        ));
    }
    let sort = t1.sort.union_disjoint_consts(&t2.sort)?;
    Ok(compose_rec(t1, t2, &sort, &[]))
}

/// Translate a union-side reference to the side-local one, or `None` if
/// the reference belongs to the other side.
fn localize(
    r: &TermRef,
    side: Side,
    word: &[Side],
    own_sort: &Sort,
) -> Option<TermRef> {
    match r {
        TermRef::Const(c) => own_sort.consts.contains(c).then(|| TermRef::Const(c.clone())),
        TermRef::Param(i) => {
            if word[*i as usize] != side {
                return None;
            }
            let local = word[..*i as usize].iter().filter(|s| **s == side).count();
            Some(TermRef::Param(local as u32))
        }
    }
}

fn compose_rec(
    t1: &HintikkaType,
    t2: &HintikkaType,
    union_sort: &Sort,
    word: &[Side],
) -> HintikkaType {
    // all references available at this level
    let mut refs: Vec<TermRef> = (0..word.len() as u32).map(TermRef::Param).collect();
    refs.extend(union_sort.consts.iter().cloned().map(TermRef::Const));

    let mut atoms = BTreeSet::new();
    let on_side = |r: &TermRef, side: Side| -> Option<TermRef> {
        let own = if side == Side::Left { &t1.sort } else { &t2.sort };
        localize(r, side, word, own)
    };
    for a in &refs {
        for b in &refs {
            if a >= b {
                continue;
            }
            for side in [Side::Left, Side::Right] {
                let t = if side == Side::Left { t1 } else { t2 };
                if let (Some(la), Some(lb)) = (on_side(a, side), on_side(b, side)) {
                    let holds = match eq_fact(la, lb) {
                        None => true,
                        Some(fact) => t.atoms.contains(&fact),
                    };
                    if holds {
                        atoms.insert(AtomFact::Eq(a.clone(), b.clone()));
                    }
                }
            }
        }
    }
    for (rel, ar) in &union_sort.rels {
        let mut tuples: Vec<Vec<TermRef>> = alloc::vec![Vec::new()];
        for _ in 0..*ar {
            let mut next = Vec::new();
            for t in &tuples {
                for r in &refs {
                    let mut t2v = t.clone();
                    t2v.push(r.clone());
                    next.push(t2v);
                }
            }
            tuples = next;
        }
        for tuple in tuples {
            for side in [Side::Left, Side::Right] {
                let t = if side == Side::Left { t1 } else { t2 };
                if !t.sort.rels.contains_key(rel) {
                    continue;
                }
                let locals: Option<Vec<TermRef>> =
                    tuple.iter().map(|r| on_side(r, side)).collect();
                if let Some(locals) = locals {
                    if t.atoms.contains(&AtomFact::Rel(rel.clone(), locals)) {
                        atoms.insert(AtomFact::Rel(rel.clone(), tuple.clone()));
                    }
                }
            }
        }
    }

    let mut extensions = BTreeSet::new();
    if t1.depth > 0 {
        let t2_down = t2.project_unchecked(t1.depth - 1);
        for e1 in &t1.extensions {
            let mut w = word.to_vec();
            w.push(Side::Left);
            extensions.insert(compose_rec(e1, &t2_down, union_sort, &w));
        }
        let t1_down = t1.project_unchecked(t1.depth - 1);
        for e2 in &t2.extensions {
            let mut w = word.to_vec();
            w.push(Side::Right);
            extensions.insert(compose_rec(&t1_down, e2, union_sort, &w));
        }
    }

    HintikkaType {
        sort: union_sort.clone(),
        depth: t1.depth,
        params: word.len() as u32,
        atoms,
        extensions,
    }
}

/// Evaluate a quantifier-free formula against an atomic-fact layer, with
/// free variables bound to references.
fn eval_layer(
    f: &Formula,
    atoms: &BTreeSet<AtomFact>,
    env: &BTreeMap<VarId, TermRef>,
) -> Result<bool> {
    let resolve = |t: &LogicTerm| -> Result<TermRef> {
        match t {
            LogicTerm::Const(c) => Ok(TermRef::Const(c.clone())),
            LogicTerm::Var(v) => env
                .get(v)
                .cloned()
                .ok_or_else(|| Error::Formula(format!("unassigned variable {v}"))),
        }
    };
    match f {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Eq(a, b) => {
            let ra = resolve(a)?;
            let rb = resolve(b)?;
            Ok(match eq_fact(ra, rb) {
                None => true,
                Some(fact) => atoms.contains(&fact),
            })
        }
        Formula::Rel(r, args) => {
            let refs: Result<Vec<TermRef>> = args.iter().map(resolve).collect();
            Ok(atoms.contains(&AtomFact::Rel(r.clone(), refs?)))
        }
        Formula::Not(g) => Ok(!eval_layer(g, atoms, env)?),
        Formula::And(a, b) => Ok(eval_layer(a, atoms, env)? && eval_layer(b, atoms, env)?),
        Formula::Or(a, b) => Ok(eval_layer(a, atoms, env)? || eval_layer(b, atoms, env)?),
        Formula::Exists(..) | Formula::Forall(..) => Err(Error::Formula(
            "quantifier in a quantifier-free context".to_string(),
        )),
    }
}

/// The depth-`d` type of `g(S)` computed from the depth-`d` type of `S`:
/// each depth-bounded question about the image is a quantifier-free
/// translated question about the argument, decided on the type's atomic
/// layers; extensions survive when the new parameter satisfies the
/// scheme's domain formula.
pub fn theory_qfd(scheme: &QfdScheme, t: &HintikkaType, d: u32) -> Result<HintikkaType> {
    if t.sort != *scheme.input() {
        return Err(Error::Sort(format!(
            "type over {} fed to a scheme over {}",
            t.sort,
            scheme.input()
        )));
    }
    let t = t.project(d)?;
    transform_rec(scheme, &t)
}

fn transform_rec(scheme: &QfdScheme, t: &HintikkaType) -> Result<HintikkaType> {
    let out_sort = scheme.output().clone();
    // resolve each output constant to an input constant via the kappa
    // formulas; validity of the scheme guarantees existence
    let mut resolved: BTreeMap<Label, TermRef> = BTreeMap::new();
    for d_label in &out_sort.consts {
        let mut found = None;
        for c in &scheme.input().consts {
            let kappa = scheme.kappa(c, d_label)?;
            if eval_layer(kappa, &t.atoms, &BTreeMap::new())? {
                found = Some(TermRef::Const(c.clone()));
                break;
            }
        }
        let c = found.ok_or_else(|| {
            Error::Invalid(format!("no source resolves output constant {d_label}"))
        })?;
        resolved.insert(d_label.clone(), c);
    }
    let translate = |r: &TermRef| -> TermRef {
        match r {
            TermRef::Const(d_label) => resolved[d_label].clone(),
            TermRef::Param(i) => TermRef::Param(*i),
        }
    };

    let mut refs: Vec<TermRef> = (0..t.params).map(TermRef::Param).collect();
    refs.extend(out_sort.consts.iter().cloned().map(TermRef::Const));

    let mut atoms = BTreeSet::new();
    for a in &refs {
        for b in &refs {
            if a >= b {
                continue;
            }
            let holds = match eq_fact(translate(a), translate(b)) {
                None => true,
                Some(fact) => t.atoms.contains(&fact),
            };
            if holds {
                atoms.insert(AtomFact::Eq(a.clone(), b.clone()));
            }
        }
    }
    for (rel, ar) in &out_sort.rels {
        let phi = scheme.phi(rel)?;
        let mut tuples: Vec<Vec<TermRef>> = alloc::vec![Vec::new()];
        for _ in 0..*ar {
            let mut next = Vec::new();
            for tup in &tuples {
                for r in &refs {
                    let mut t2v = tup.clone();
                    t2v.push(r.clone());
                    next.push(t2v);
                }
            }
            tuples = next;
        }
        for tuple in tuples {
            let env: BTreeMap<VarId, TermRef> = tuple
                .iter()
                .enumerate()
                .map(|(i, r)| (VarId(i as u32 + 1), translate(r)))
                .collect();
            if eval_layer(phi, &t.atoms, &env)? {
                atoms.insert(AtomFact::Rel(rel.clone(), tuple));
            }
        }
    }

    let mut extensions = BTreeSet::new();
    for ext in &t.extensions {
        let env: BTreeMap<VarId, TermRef> =
            [(VarId(1), TermRef::Param(ext.params - 1))].into_iter().collect();
        if eval_layer(scheme.delta(), &ext.atoms, &env)? {
            extensions.insert(transform_rec(scheme, ext)?);
        }
    }

    Ok(HintikkaType {
        sort: out_sort,
        depth: t.depth,
        params: t.params,
        atoms,
        extensions,
    })
}

/// Translate a formula over the scheme's output sort to one over its input
/// sort with the same quantifier depth, such that `S` satisfies the
/// translation exactly when `g(S)` satisfies the original. Relation atoms
/// are replaced by their defining formulas, quantifiers are relativized to
/// the domain formula, and output constants are resolved by a disjunction
/// over all mappings into the input constants, guarded by the
/// corresponding kappa conjunctions.
pub fn backward_translate(scheme: &QfdScheme, f: &Formula) -> Result<Formula> {
    f.check_sort(scheme.output())?;
    let in_consts: Vec<Label> = scheme.input().consts.iter().cloned().collect();
    let out_consts: Vec<Label> = scheme.output().consts.iter().cloned().collect();
    // the input and output sorts may share constant names; set the output
    // occurrences apart before pulling in the scheme's formulas, so the
    // per-mapping resolution cannot touch input constants
    let marked: BTreeMap<Label, Label> = out_consts
        .iter()
        .map(|d_label| (d_label.clone(), format!("\u{1}{d_label}")))
        .collect();
    let core = rewrite_atoms(scheme, &f.subst_consts(&marked))?;
    if out_consts.is_empty() {
        return Ok(core);
    }
    if in_consts.is_empty() {
        // no mapping can resolve the output constants
        return Ok(Formula::False);
    }
    // all mappings h from output constants to input constants
    let mut maps: Vec<BTreeMap<Label, Label>> = alloc::vec![BTreeMap::new()];
    for d_label in &out_consts {
        let mut next = Vec::new();
        for m in &maps {
            for c in &in_consts {
                let mut m2 = m.clone();
                m2.insert(d_label.clone(), c.clone());
                next.push(m2);
            }
        }
        maps = next;
    }
    let mut branches = Vec::new();
    for h in &maps {
        let guards = Formula::all(
            out_consts
                .iter()
                .map(|d_label| scheme.kappa(&h[d_label], d_label).cloned().unwrap()),
        );
        let resolve: BTreeMap<Label, Label> = h
            .iter()
            .map(|(d_label, c)| (marked[d_label].clone(), c.clone()))
            .collect();
        branches.push(Formula::and(guards, core.subst_consts(&resolve)));
    }
    Ok(Formula::any(branches))
}

fn rewrite_atoms(scheme: &QfdScheme, f: &Formula) -> Result<Formula> {
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
        Formula::Not(g) => Ok(Formula::not(rewrite_atoms(scheme, g)?)),
        Formula::And(a, b) => Ok(Formula::and(
            rewrite_atoms(scheme, a)?,
            rewrite_atoms(scheme, b)?,
        )),
        Formula::Or(a, b) => Ok(Formula::or(
            rewrite_atoms(scheme, a)?,
            rewrite_atoms(scheme, b)?,
        )),
        Formula::Exists(v, g) => {
            let guard = scheme
                .delta()
                .subst_vars(&[(VarId(1), LogicTerm::Var(*v))].into_iter().collect());
            Ok(Formula::Exists(
                *v,
                alloc::boxed::Box::new(Formula::and(guard, rewrite_atoms(scheme, g)?)),
            ))
        }
        Formula::Forall(v, g) => {
            let guard = scheme
                .delta()
                .subst_vars(&[(VarId(1), LogicTerm::Var(*v))].into_iter().collect());
            Ok(Formula::Forall(
                *v,
                alloc::boxed::Box::new(Formula::implies(guard, rewrite_atoms(scheme, g)?)),
            ))
        }
    }
}

/// Decide whether two quantifier-free formulas agree in every structure of
/// the sort. A disagreement has a model of at most `|vars| + |constants|`
/// elements (the substructure on the named points preserves quantifier-free
/// truth), so it suffices to sweep the diagrams on the named points: every
/// partition of the names into value classes, with every valuation of the
/// relation atoms the formulas mention.
pub fn qf_equivalent(
    f: &Formula,
    g: &Formula,
    sort: &Sort,
    vars: &BTreeSet<VarId>,
) -> Result<bool> {
    Ok(qf_disagreement_witness(f, g, sort, vars)?.is_none())
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Name {
    Var(VarId),
    Const(Label),
}

fn eval_diagram(
    f: &Formula,
    classes: &BTreeMap<Name, usize>,
    rel_truth: &BTreeMap<(String, Vec<usize>), bool>,
) -> bool {
    let class_of = |t: &LogicTerm| -> usize {
        match t {
            LogicTerm::Var(v) => classes[&Name::Var(*v)],
            LogicTerm::Const(c) => classes[&Name::Const(c.clone())],
        }
    };
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Eq(a, b) => class_of(a) == class_of(b),
        Formula::Rel(r, args) => {
            let tuple: Vec<usize> = args.iter().map(class_of).collect();
            rel_truth[&(r.clone(), tuple)]
        }
        Formula::Not(g) => !eval_diagram(g, classes, rel_truth),
        Formula::And(a, b) => {
            eval_diagram(a, classes, rel_truth) && eval_diagram(b, classes, rel_truth)
        }
        Formula::Or(a, b) => {
            eval_diagram(a, classes, rel_truth) || eval_diagram(b, classes, rel_truth)
        }
        Formula::Exists(..) | Formula::Forall(..) => {
            unreachable!("diagram evaluation is quantifier-free")
        }
    }
}

fn collect_rel_atoms(f: &Formula, out: &mut BTreeSet<(String, Vec<LogicTerm>)>) {
    match f {
        Formula::True | Formula::False | Formula::Eq(..) => {}
        Formula::Rel(r, args) => {
            out.insert((r.clone(), args.clone()));
        }
        Formula::Not(g) => collect_rel_atoms(g, out),
        Formula::And(a, b) | Formula::Or(a, b) => {
            collect_rel_atoms(a, out);
            collect_rel_atoms(b, out);
        }
        Formula::Exists(_, g) | Formula::Forall(_, g) => collect_rel_atoms(g, out),
    }
}

/// All partitions of `0..k` as restricted-growth strings.
fn partitions(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = alloc::vec![0usize; k];
    fn rec(i: usize, k: usize, maxc: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if i == k {
            out.push(current.clone());
            return;
        }
        for c in 0..=maxc + 1 {
            current[i] = c;
            rec(i + 1, k, maxc.max(c), current, out);
        }
    }
    if k == 0 {
        out.push(Vec::new());
    } else {
        current[0] = 0;
        rec(1, k, 0, &mut current, &mut out);
    }
    out
}

/// Like [`qf_equivalent`] but returning the first falsifying structure and
/// assignment, if any.
pub fn qf_disagreement_witness(
    f: &Formula,
    g: &Formula,
    sort: &Sort,
    vars: &BTreeSet<VarId>,
) -> Result<Option<(Structure, super::Assignment)>> {
    for h in [f, g] {
        if !h.is_quantifier_free() {
            return Err(Error::Formula(
                "small-model equivalence needs quantifier-free input".to_string(),
            ));
        }
        h.check_sort(sort)?;
        if let Some(v) = h.free_vars().iter().find(|v| !vars.contains(v)) {
            return Err(Error::Formula(format!(
                "free variable {v} outside the declared set"
            )));
        }
    }
    let names: Vec<Name> = vars
        .iter()
        .map(|v| Name::Var(*v))
        .chain(sort.consts.iter().map(|c| Name::Const(c.clone())))
        .collect();
    let mut atoms = BTreeSet::new();
    collect_rel_atoms(f, &mut atoms);
    collect_rel_atoms(g, &mut atoms);
    let atoms: Vec<(String, Vec<LogicTerm>)> = atoms.into_iter().collect();

    for p in partitions(names.len()) {
        let classes: BTreeMap<Name, usize> = names
            .iter()
            .cloned()
            .zip(p.iter().copied())
            .collect();
        // distinct relation atoms after instantiation share truth values
        let mut distinct: BTreeSet<(String, Vec<usize>)> = BTreeSet::new();
        for (r, args) in &atoms {
            let tuple: Vec<usize> = args
                .iter()
                .map(|t| match t {
                    LogicTerm::Var(v) => classes[&Name::Var(*v)],
                    LogicTerm::Const(c) => classes[&Name::Const(c.clone())],
                })
                .collect();
            distinct.insert((r.clone(), tuple));
        }
        let distinct: Vec<(String, Vec<usize>)> = distinct.into_iter().collect();
        if distinct.len() > 20 {
            return Err(Error::Capacity(format!(
                "{} distinct relation atoms in an equivalence check",
                distinct.len()
            )));
        }
        for mask in 0u64..(1u64 << distinct.len()) {
            let rel_truth: BTreeMap<(String, Vec<usize>), bool> = distinct
                .iter()
                .enumerate()
                .map(|(i, a)| (a.clone(), mask & (1 << i) != 0))
                .collect();
            if eval_diagram(f, &classes, &rel_truth) != eval_diagram(g, &classes, &rel_truth) {
                // materialize the witness structure
                let m = p.iter().copied().max().map_or(0, |x| x + 1);
                let domain: BTreeSet<ElemId> = (0..m as ElemId).collect();
                let mut tuples: BTreeMap<String, BTreeSet<Vec<ElemId>>> = BTreeMap::new();
                for ((r, tuple), truth) in &rel_truth {
                    if *truth {
                        tuples
                            .entry(r.clone())
                            .or_default()
                            .insert(tuple.iter().map(|x| *x as ElemId).collect());
                    }
                }
                let sources: BTreeMap<Label, ElemId> = sort
                    .consts
                    .iter()
                    .map(|c| (c.clone(), classes[&Name::Const(c.clone())] as ElemId))
                    .collect();
                let witness = Structure::new(sort.clone(), domain, tuples, sources)?;
                let assignment: super::Assignment = vars
                    .iter()
                    .map(|v| (*v, classes[&Name::Var(*v)] as ElemId))
                    .collect();
                return Ok(Some((witness, assignment)));
            }
        }
    }
    Ok(None)
}
