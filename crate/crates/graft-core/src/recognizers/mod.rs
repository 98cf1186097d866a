//! Deterministic bottom-up tree automata over finite subsignatures, their
//! closure algebra, and congruence evaluators on concrete structures.

mod compile;
mod congruence;

pub use compile::{compile_fo_recognizer, FoOps, FoUnary};
pub use congruence::{
    check_congruence, enumerate_multigraphs, hr_value_ops, hrm_value_ops, modular_value_ops,
    prime_evaluator, simplicity_evaluator, simplicity_recognizer, structure_pool,
    zeta_evaluator, CongruenceCheck, CongruenceEvaluator, ValueOp,
};

use crate::error::{Error, Result};
use crate::terms::{AlgTerm, SchemeRegistry, SignatureDef, TermSort};
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// The payload-carrying name of an operation node, without sorts.
pub(crate) fn op_descriptor(t: &AlgTerm) -> String {
    use AlgTerm::*;
    let pairs = |ps: &[(String, String)]| -> String {
        let mut s = String::new();
        for (a, b) in ps {
            s.push_str(&format!("({a},{b})"));
        }
        s
    };
    match t {
        Src(a) => format!("src:{a}"),
        EdgeConst(a, b) => format!("edge:{a}:{b}"),
        LoopConst(a) => format!("loop:{a}"),
        Port(p) => format!("port:{p}"),
        PortLoop(p) => format!("port-loop:{p}"),
        Vertex => "v".to_string(),
        VertexLoop => "v-loop".to_string(),
        EconEmpty => "econ-empty".to_string(),
        Oplus(..) => "oplus".to_string(),
        Parallel(..) => "parallel".to_string(),
        BoxC(..) => "box".to_string(),
        Otimes(j, ..) => format!("otimes:{}", pairs(j)),
        SrcRen(a, b, _) => format!("srcren:{a}:{b}"),
        SrcFg(a, _) => format!("srcfg:{a}"),
        SrcFgAll(_) => "srcfg-all".to_string(),
        Fus(a, b, _) => format!("fus:{a}:{b}"),
        FusTo(a, b, _) => format!("fus-to:{a}:{b}"),
        MFus(a, b, _) => format!("mfus:{a}:{b}"),
        Del(ps, _) => format!("del:{}", pairs(ps)),
        FusRel(ps, _) => format!("fusrel:{}", pairs(ps)),
        Add(p, q, _) => format!("add:{p}:{q}"),
        Ren(p, q, _) => format!("ren:{p}:{q}"),
        Fg(p, _) => format!("fg:{p}"),
        Mdf(ps, _) => format!("mdf:{}", pairs(ps)),
        Mark(i, _) => format!("mark:{i}"),
        ApplyScheme(n, _) => format!("apply-scheme:{n}"),
        EconForget(_) => "econ-forget".to_string(),
        EconAddVertex(_) => "econ-add-vertex".to_string(),
        EconAddEdge(_) => "econ-add-edge".to_string(),
        EconShift(_) => "econ-shift".to_string(),
        EconSwap(_) => "econ-swap".to_string(),
    }
}

pub(crate) fn sort_key(s: &TermSort) -> String {
    format!("{s}")
}

fn full_op_key(descriptor: &str, child_sorts: &[String]) -> String {
    let mut k = descriptor.to_string();
    for s in child_sorts {
        k.push('|');
        k.push_str(s);
    }
    k
}

/// A deterministic bottom-up tree automaton over a finite set of concrete
/// operation instances. States carry a sort and a label; transitions are
/// total on the declared signature (every operation instance is defined on
/// all state tuples of its argument sorts).
#[derive(Clone, Debug)]
pub struct TreeAutomaton {
    /// state index -> (sort key, label)
    states: Vec<(String, String)>,
    /// full op key -> (argument sort keys, result sort key)
    ops: BTreeMap<String, (Vec<String>, String)>,
    /// (full op key, argument states) -> result state
    trans: BTreeMap<(String, Vec<usize>), usize>,
    accepting: BTreeSet<usize>,
}

impl TreeAutomaton {
    pub fn new(
        states: Vec<(String, String)>,
        ops: BTreeMap<String, (Vec<String>, String)>,
        trans: BTreeMap<(String, Vec<usize>), usize>,
        accepting: BTreeSet<usize>,
    ) -> TreeAutomaton {
        TreeAutomaton {
            states,
            ops,
            trans,
            accepting,
        }
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn state_label(&self, i: usize) -> &str {
        &self.states[i].1
    }

    pub fn states(&self) -> &[(String, String)] {
        &self.states
    }

    pub fn ops(&self) -> &BTreeMap<String, (Vec<String>, String)> {
        &self.ops
    }

    pub fn transitions(&self) -> &BTreeMap<(String, Vec<usize>), usize> {
        &self.trans
    }

    pub fn accepting(&self) -> &BTreeSet<usize> {
        &self.accepting
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting.contains(&state)
    }

    /// Run bottom-up; the term must be built from the declared operation
    /// instances.
    pub fn run(&self, t: &AlgTerm) -> Result<usize> {
        Ok(self.run_sorted(t)?.1)
    }

    fn run_sorted(&self, t: &AlgTerm) -> Result<(String, usize)> {
        let kids = t.children();
        let mut child_sorts = Vec::new();
        let mut child_states = Vec::new();
        for k in kids {
            let (s, st) = self.run_sorted(k)?;
            child_sorts.push(s);
            child_states.push(st);
        }
        let key = full_op_key(&op_descriptor(t), &child_sorts);
        let (_, result_sort) = self
            .ops
            .get(&key)
            .ok_or_else(|| Error::UnknownSymbol(format!("operation {key} outside the signature")))?;
        let state = *self
            .trans
            .get(&(key.clone(), child_states.clone()))
            .ok_or_else(|| Error::Invalid(format!("missing transition for {key}")))?;
        Ok((result_sort.clone(), state))
    }

    pub fn accepts(&self, t: &AlgTerm) -> Result<bool> {
        Ok(self.accepting.contains(&self.run(t)?))
    }

    fn same_signature(&self, other: &TreeAutomaton) -> Result<()> {
        if self.ops != other.ops {
            return Err(Error::Sort(
                "automata over different signatures".to_string(),
            ));
        }
        Ok(())
    }

    fn pairing(&self, other: &TreeAutomaton) -> (TreeAutomaton, BTreeMap<(usize, usize), usize>) {
        let mut states = Vec::new();
        let mut index: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (i, (s1, l1)) in self.states.iter().enumerate() {
            for (j, (s2, l2)) in other.states.iter().enumerate() {
                if s1 == s2 {
                    index.insert((i, j), states.len());
                    states.push((s1.clone(), format!("({l1},{l2})")));
                }
            }
        }
        let mut trans = BTreeMap::new();
        for ((key, args1), r1) in &self.trans {
            // pair with every arg tuple of the other automaton
            let (arg_sorts, _) = &self.ops[key];
            let mut tuples: Vec<Vec<usize>> = alloc::vec![Vec::new()];
            for (pos, _) in arg_sorts.iter().enumerate() {
                let mut next = Vec::new();
                for t in &tuples {
                    for (j, (s2, _)) in other.states.iter().enumerate() {
                        if *s2 == arg_sorts[pos] {
                            let mut t2 = t.clone();
                            t2.push(j);
                            next.push(t2);
                        }
                    }
                }
                tuples = next;
            }
            for args2 in tuples {
                if let Some(r2) = other.trans.get(&(key.clone(), args2.clone())) {
                    let paired_args: Vec<usize> = args1
                        .iter()
                        .zip(args2.iter())
                        .map(|(a, b)| index[&(*a, *b)])
                        .collect();
                    trans.insert((key.clone(), paired_args), index[&(*r1, *r2)]);
                }
            }
        }
        (
            TreeAutomaton {
                states,
                ops: self.ops.clone(),
                trans,
                accepting: BTreeSet::new(),
            },
            index,
        )
    }

    /// Pair construction accepting when both do.
    pub fn intersection(&self, other: &TreeAutomaton) -> Result<TreeAutomaton> {
        self.same_signature(other)?;
        let (mut out, index) = self.pairing(other);
        out.accepting = index
            .iter()
            .filter(|((i, j), _)| self.accepting.contains(i) && other.accepting.contains(j))
            .map(|(_, k)| *k)
            .collect();
        Ok(out)
    }

    /// Pair construction accepting when either does.
    pub fn union(&self, other: &TreeAutomaton) -> Result<TreeAutomaton> {
        self.same_signature(other)?;
        let (mut out, index) = self.pairing(other);
        out.accepting = index
            .iter()
            .filter(|((i, j), _)| self.accepting.contains(i) || other.accepting.contains(j))
            .map(|(_, k)| *k)
            .collect();
        Ok(out)
    }

    /// Flip acceptance; sound because the automaton is deterministic and
    /// total on its signature.
    pub fn complement(&self) -> TreeAutomaton {
        let accepting = (0..self.states.len())
            .filter(|i| !self.accepting.contains(i))
            .collect();
        TreeAutomaton {
            states: self.states.clone(),
            ops: self.ops.clone(),
            trans: self.trans.clone(),
            accepting,
        }
    }

    /// Accept `t` exactly when the original accepts `ctx[t]`: the hole is
    /// identified by a nullary marker term; acceptance is recomputed by
    /// folding the context from each candidate state.
    pub fn preimage(&self, ctx: &AlgTerm, hole_sort: &str) -> Result<TreeAutomaton> {
        let mut accepting = BTreeSet::new();
        for (i, (sort, _)) in self.states.iter().enumerate() {
            if sort != hole_sort {
                continue;
            }
            if let Ok(Some(final_state)) = self.fold_context(ctx, i) {
                if self.accepting.contains(&final_state) {
                    accepting.insert(i);
                }
            }
        }
        Ok(TreeAutomaton {
            states: self.states.clone(),
            ops: self.ops.clone(),
            trans: self.trans.clone(),
            accepting,
        })
    }

    /// Fold a context containing exactly one hole marker, starting the
    /// hole at the given state. Returns the resulting state, or `None`
    /// when a transition is missing.
    fn fold_context(&self, ctx: &AlgTerm, hole_state: usize) -> Result<Option<usize>> {
        if is_hole(ctx) {
            return Ok(Some(hole_state));
        }
        let kids = ctx.children();
        let mut child_sorts = Vec::new();
        let mut child_states = Vec::new();
        for k in kids {
            let (s, st) = if is_hole(k) {
                (
                    self.states[hole_state].0.clone(),
                    hole_state,
                )
            } else {
                match self.fold_context_sorted(k, hole_state)? {
                    Some(pair) => pair,
                    None => return Ok(None),
                }
            };
            child_sorts.push(s);
            child_states.push(st);
        }
        let key = full_op_key(&op_descriptor(ctx), &child_sorts);
        match self.trans.get(&(key, child_states)) {
            Some(r) => Ok(Some(*r)),
            None => Ok(None),
        }
    }

    fn fold_context_sorted(
        &self,
        ctx: &AlgTerm,
        hole_state: usize,
    ) -> Result<Option<(String, usize)>> {
        let state = match self.fold_context(ctx, hole_state)? {
            Some(s) => s,
            None => return Ok(None),
        };
        Ok(Some((self.states[state].0.clone(), state)))
    }

    /// Keep only the listed operation instances (by full key); verdicts on
    /// terms of the remaining signature are unchanged.
    pub fn restrict(&self, keep: &BTreeSet<String>) -> Result<TreeAutomaton> {
        if let Some(k) = keep.iter().find(|k| !self.ops.contains_key(*k)) {
            return Err(Error::Sort(format!("{k} is not in the signature")));
        }
        Ok(TreeAutomaton {
            states: self.states.clone(),
            ops: self
                .ops
                .iter()
                .filter(|(k, _)| keep.contains(*k))
                .map(|(k, v)| (k.clone(), v.clone()))
                .collect(),
            trans: self
                .trans
                .iter()
                .filter(|((k, _), _)| keep.contains(k))
                .map(|(k, v)| (k.clone(), *v))
                .collect(),
            accepting: self.accepting.clone(),
        })
    }

    /// An automaton over the given term signature accepting everything,
    /// with one state per reachable sort. The signature is explored from
    /// the provided generator terms.
    pub fn all_accepting(
        generators: &[AlgTerm],
        sig: &SignatureDef,
        reg: &SchemeRegistry,
    ) -> Result<TreeAutomaton> {
        let mut ops: BTreeMap<String, (Vec<String>, String)> = BTreeMap::new();
        let mut sorts: BTreeSet<String> = BTreeSet::new();
        fn visit(
            t: &AlgTerm,
            sig: &SignatureDef,
            reg: &SchemeRegistry,
            ops: &mut BTreeMap<String, (Vec<String>, String)>,
            sorts: &mut BTreeSet<String>,
        ) -> Result<String> {
            let mut child_sorts = Vec::new();
            for k in t.children() {
                child_sorts.push(visit(k, sig, reg, ops, sorts)?);
            }
            let sort = sort_key(&crate::terms::typecheck_term(t, sig, reg)?);
            ops.insert(
                full_op_key(&op_descriptor(t), &child_sorts),
                (child_sorts, sort.clone()),
            );
            sorts.insert(sort.clone());
            Ok(sort)
        }
        for g in generators {
            visit(g, sig, reg, &mut ops, &mut sorts)?;
        }
        let states: Vec<(String, String)> = sorts
            .iter()
            .map(|s| (s.clone(), format!("any[{s}]")))
            .collect();
        let state_of: BTreeMap<String, usize> = sorts
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        let mut trans = BTreeMap::new();
        for (key, (args, result)) in &ops {
            let tuple: Vec<usize> = args.iter().map(|s| state_of[s]).collect();
            trans.insert((key.clone(), tuple), state_of[result]);
        }
        Ok(TreeAutomaton {
            states,
            ops,
            trans,
            accepting: (0..sorts.len()).collect(),
        })
    }
}

/// The hole marker used by contexts: a scheme application with the
/// reserved name `_`.
pub fn hole() -> AlgTerm {
    AlgTerm::ApplyScheme("_".to_string(), alloc::boxed::Box::new(AlgTerm::Vertex))
}

fn is_hole(t: &AlgTerm) -> bool {
    matches!(t, AlgTerm::ApplyScheme(n, _) if n == "_")
}

#[cfg(test)]
mod tests;
