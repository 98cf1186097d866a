//! Splitting a unary operation over a disjoint union: given a scheme `h`
//! into a port-graph sort and the types of the two union parts, construct
//! per-part schemes `g1`, `g2` with auxiliary ports indexed by atom-set
//! valuations, and an edge-addition/port-forgetting sequence `f_seq`, such
//! that `h(x1 + x2) = f_seq(g1(x1) + g2(x2))` whenever the parts have the
//! given types.
//!
//! Auxiliary ports are indexed by subsets of the single-variable atoms
//! actually occurring in `h`'s formulas (not of the full quantifier-free
//! language, which is astronomically larger); the cross-edge formulas are
//! Boolean combinations of exactly those atoms after specialization, so
//! the valuation of that atom set determines every cross edge.

use super::{add_ports, apply_scheme, mdf, QfdScheme, RawScheme};
use crate::error::{Error, Result};
use crate::logic::{eval, Assignment, Formula, LogicTerm, VarId};
use crate::structures::{oplus, Label, Sort, StructType, Structure, EDGE};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

/// The split of a unary operation over a disjoint union: the two per-part
/// schemes and the finishing sequence of edge additions between auxiliary
/// ports, followed by forgetting them.
#[derive(Clone, Debug)]
pub struct UnionSplit {
    pub g1: QfdScheme,
    pub g2: QfdScheme,
    /// Edge additions between auxiliary port labels, in application order.
    pub adds: Vec<(Label, Label)>,
    /// The original output port labels, kept by the final redefinition.
    pub keep: BTreeSet<Label>,
}

impl UnionSplit {
    /// Evaluate the right-hand side of the splitting identity on concrete
    /// parts.
    pub fn apply(&self, x1: &Structure, x2: &Structure) -> Result<Structure> {
        let r1 = apply_scheme(&self.g1, x1)?;
        let r2 = apply_scheme(&self.g2, x2)?;
        let mut u = oplus(&r1, &r2)?;
        for (p, q) in &self.adds {
            u = apply_scheme(&add_ports(u.sort(), p, q)?, &u)?;
        }
        let d: Vec<(Label, Label)> = self.keep.iter().map(|q| (q.clone(), q.clone())).collect();
        apply_scheme(&mdf(u.sort(), &d)?, &u)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Side {
    One,
    Two,
}

struct SplitCtx<'a> {
    sort1: &'a Sort,
    sort2: &'a Sort,
    z1: &'a Structure,
    z2: &'a Structure,
}

impl SplitCtx<'_> {
    fn const_side(&self, c: &Label) -> Result<Side> {
        if self.sort1.consts.contains(c) {
            Ok(Side::One)
        } else if self.sort2.consts.contains(c) {
            Ok(Side::Two)
        } else {
            Err(Error::UnknownSymbol(format!("constant {c}")))
        }
    }

    fn z(&self, side: Side) -> &Structure {
        match side {
            Side::One => self.z1,
            Side::Two => self.z2,
        }
    }

    fn rels(&self, side: Side) -> &Sort {
        match side {
            Side::One => self.sort1,
            Side::Two => self.sort2,
        }
    }

    /// Rewrite an atom under a side assignment for the variables: atoms
    /// whose arguments span both sides are false in a disjoint union;
    /// same-side atoms survive, with closed ones of a replaced side
    /// evaluated on that side's type.
    fn rewrite_atom(
        &self,
        f: &Formula,
        var_sides: &BTreeMap<VarId, Side>,
        replace_closed: &[Side],
    ) -> Result<Formula> {
        let term_side = |t: &LogicTerm| -> Result<Option<Side>> {
            match t {
                LogicTerm::Var(v) => Ok(Some(*var_sides.get(v).ok_or_else(|| {
                    Error::Formula(format!("unexpected free variable {v}"))
                })?)),
                LogicTerm::Const(c) => self.const_side(c).map(Some),
            }
        };
        let (terms, rel): (Vec<&LogicTerm>, Option<&str>) = match f {
            Formula::Eq(a, b) => {
                if a == b {
                    return Ok(Formula::True);
                }
                (alloc::vec![a, b], None)
            }
            Formula::Rel(r, args) => (args.iter().collect(), Some(r)),
            _ => unreachable!("rewrite_atom gets atoms only"),
        };
        let mut side: Option<Side> = None;
        for t in &terms {
            let s = term_side(t)?.expect("terms always have a side");
            match side {
                None => side = Some(s),
                Some(prev) if prev != s => return Ok(Formula::False),
                _ => {}
            }
        }
        let side = side.expect("atoms have at least one argument");
        if let Some(r) = rel {
            if !self.rels(side).rels.contains_key(r) {
                return Ok(Formula::False);
            }
        }
        let closed = terms
            .iter()
            .all(|t| matches!(t, LogicTerm::Const(_)));
        if closed && replace_closed.contains(&side) {
            let holds = eval(self.z(side), f, &Assignment::new())?;
            return Ok(if holds { Formula::True } else { Formula::False });
        }
        Ok(f.clone())
    }

    fn specialize(
        &self,
        f: &Formula,
        var_sides: &BTreeMap<VarId, Side>,
        replace_closed: &[Side],
    ) -> Result<Formula> {
        match f {
            Formula::True | Formula::False => Ok(f.clone()),
            Formula::Eq(..) | Formula::Rel(..) => {
                self.rewrite_atom(f, var_sides, replace_closed)
            }
            Formula::Not(g) => Ok(Formula::not(self.specialize(g, var_sides, replace_closed)?)),
            Formula::And(a, b) => Ok(Formula::and(
                self.specialize(a, var_sides, replace_closed)?,
                self.specialize(b, var_sides, replace_closed)?,
            )),
            Formula::Or(a, b) => Ok(Formula::or(
                self.specialize(a, var_sides, replace_closed)?,
                self.specialize(b, var_sides, replace_closed)?,
            )),
            Formula::Exists(..) | Formula::Forall(..) => Err(Error::Formula(
                "scheme formulas are quantifier-free".to_string(),
            )),
        }
    }
}

/// Collect the atoms of a specialized formula that mention the given
/// variable, normalized to use `x1`.
fn open_atoms_of(f: &Formula, v: VarId) -> BTreeSet<Formula> {
    fn go(f: &Formula, v: VarId, out: &mut BTreeSet<Formula>) {
        match f {
            Formula::True | Formula::False => {}
            Formula::Eq(..) | Formula::Rel(..) => {
                if f.free_vars().contains(&v) {
                    out.insert(f.subst_vars(
                        &[(v, LogicTerm::Var(VarId(1)))].into_iter().collect(),
                    ));
                }
            }
            Formula::Not(g) => go(g, v, out),
            Formula::And(a, b) | Formula::Or(a, b) => {
                go(a, v, out);
                go(b, v, out);
            }
            _ => unreachable!("specialized formulas are quantifier-free"),
        }
    }
    let mut out = BTreeSet::new();
    go(f, v, &mut out);
    out
}

/// Evaluate a specialized cross formula under a fixed valuation of its
/// atoms: atoms mentioning `x1` are looked up (normalized) in the first
/// set, atoms mentioning `x2` in the second.
fn eval_cross(
    f: &Formula,
    first_true: &BTreeSet<Formula>,
    second_true: &BTreeSet<Formula>,
) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Eq(..) | Formula::Rel(..) => {
            let vars = f.free_vars();
            if vars.contains(&VarId(1)) {
                first_true.contains(f)
            } else {
                let renamed =
                    f.subst_vars(&[(VarId(2), LogicTerm::Var(VarId(1)))].into_iter().collect());
                second_true.contains(&renamed)
            }
        }
        Formula::Not(g) => !eval_cross(g, first_true, second_true),
        Formula::And(a, b) => {
            eval_cross(a, first_true, second_true) && eval_cross(b, first_true, second_true)
        }
        Formula::Or(a, b) => {
            eval_cross(a, first_true, second_true) || eval_cross(b, first_true, second_true)
        }
        _ => unreachable!("specialized formulas are quantifier-free"),
    }
}

fn subsets(atoms: &[Formula]) -> Vec<BTreeSet<Formula>> {
    (0u32..(1 << atoms.len()))
        .map(|mask| {
            atoms
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, a)| a.clone())
                .collect()
        })
        .collect()
}

/// Deterministic auxiliary port label for the subset with the given
/// bitmask, on the given side.
fn aux_label(side: Side, mask: usize) -> Label {
    match side {
        Side::One => format!("z1p{mask}"),
        Side::Two => format!("z2p{mask}"),
    }
}

pub fn split_over_union(
    h: &QfdScheme,
    sort1: &Sort,
    sort2: &Sort,
    z1: &StructType,
    z2: &StructType,
) -> Result<UnionSplit> {
    if !h.output().consts.is_empty() {
        return Err(Error::Sort(
            "the split target must be a port-graph sort without constants".to_string(),
        ));
    }
    if !h.output().is_port_graph() {
        return Err(Error::Sort(
            "the split target must be a port-graph sort".to_string(),
        ));
    }
    let expected = sort1.union_disjoint_consts(sort2)?;
    if expected != *h.input() {
        return Err(Error::Sort(format!(
            "part sorts combine to {expected}, but the scheme expects {}",
            h.input()
        )));
    }
    if *z1.as_structure().sort() != *sort1 || *z2.as_structure().sort() != *sort2 {
        return Err(Error::Sort("part types must match the part sorts".to_string()));
    }
    let ctx = SplitCtx {
        sort1,
        sort2,
        z1: z1.as_structure(),
        z2: z2.as_structure(),
    };

    let q_ports: BTreeSet<Label> = h.output().port_labels();
    let one = |s: Side| -> BTreeMap<VarId, Side> { [(VarId(1), s)].into_iter().collect() };
    let two = |a: Side, b: Side| -> BTreeMap<VarId, Side> {
        [(VarId(1), a), (VarId(2), b)].into_iter().collect()
    };

    let delta1 = ctx.specialize(h.delta(), &one(Side::One), &[Side::Two])?;
    let delta2 = ctx.specialize(h.delta(), &one(Side::Two), &[Side::One])?;
    let phi_edge = h.phi(EDGE)?;
    let psi11 = ctx.specialize(phi_edge, &two(Side::One, Side::One), &[Side::Two])?;
    let psi22 = ctx.specialize(phi_edge, &two(Side::Two, Side::Two), &[Side::One])?;
    let psi12 = ctx.specialize(phi_edge, &two(Side::One, Side::Two), &[Side::One, Side::Two])?;
    let psi21 = ctx.specialize(phi_edge, &two(Side::Two, Side::One), &[Side::One, Side::Two])?;

    // the one-variable atom sets that determine cross edges
    let mut a1: BTreeSet<Formula> = open_atoms_of(&psi12, VarId(1));
    a1.extend(open_atoms_of(&psi21, VarId(2)));
    let mut a2: BTreeSet<Formula> = open_atoms_of(&psi21, VarId(1));
    a2.extend(open_atoms_of(&psi12, VarId(2)));
    let a1: Vec<Formula> = a1.into_iter().collect();
    let a2: Vec<Formula> = a2.into_iter().collect();
    if a1.len() > 10 || a2.len() > 10 {
        return Err(Error::Capacity(format!(
            "{} + {} cross atoms make too many auxiliary ports",
            a1.len(),
            a2.len()
        )));
    }

    let build_part = |side: Side,
                      delta: &Formula,
                      psi_same: &Formula,
                      atoms: &[Formula]|
     -> Result<QfdScheme> {
        let in_sort = ctx.rels(side).clone();
        let mut out_ports: Vec<Label> = q_ports.iter().cloned().collect();
        for mask in 0..(1usize << atoms.len()) {
            out_ports.push(aux_label(side, mask));
        }
        let output = Sort::ports(out_ports);
        let guard = |i: u32| delta.subst_vars(&[(VarId(1), Formula::var(i))].into_iter().collect());
        let mut phi = BTreeMap::new();
        phi.insert(
            EDGE.to_string(),
            Formula::and(Formula::and(guard(1), guard(2)), psi_same.clone()),
        );
        for q in &q_ports {
            let spec = ctx.specialize(h.phi(q)?, &one(side), &[other(side)])?;
            phi.insert(q.clone(), Formula::and(guard(1), spec));
        }
        for mask in 0..(1usize << atoms.len()) {
            let pattern = Formula::all(atoms.iter().enumerate().map(|(i, alpha)| {
                if mask & (1 << i) != 0 {
                    alpha.clone()
                } else {
                    Formula::not(alpha.clone())
                }
            }));
            phi.insert(aux_label(side, mask), Formula::and(guard(1), pattern));
        }
        Ok(QfdScheme::assume_valid(RawScheme {
            input: in_sort,
            output,
            delta: delta.clone(),
            phi,
            kappa: BTreeMap::new(),
        }))
    };
    let g1 = build_part(Side::One, &delta1, &psi11, &a1)?;
    let g2 = build_part(Side::Two, &delta2, &psi22, &a2)?;

    // cross edges: for each pair of valuations, read the specialized
    // formulas
    let mut adds = Vec::new();
    let subsets1 = subsets(&a1);
    let subsets2 = subsets(&a2);
    for (m1, x) in subsets1.iter().enumerate() {
        for (m2, y) in subsets2.iter().enumerate() {
            if eval_cross(&psi12, x, y) {
                adds.push((aux_label(Side::One, m1), aux_label(Side::Two, m2)));
            }
            if eval_cross(&psi21, y, x) {
                adds.push((aux_label(Side::Two, m2), aux_label(Side::One, m1)));
            }
        }
    }

    Ok(UnionSplit {
        g1,
        g2,
        adds,
        keep: q_ports,
    })
}

fn other(side: Side) -> Side {
    match side {
        Side::One => Side::Two,
        Side::Two => Side::One,
    }
}
