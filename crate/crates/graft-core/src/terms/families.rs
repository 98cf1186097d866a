//! Term family builders: cliques and directed paths by their standard
//! recursions, and the port-graph pipeline realizing modular composition.

use super::{AlgTerm, Label};
use crate::error::{Error, Result};
use crate::structures::{Structure, EDGE};
use alloc::boxed::Box;
use alloc::string::ToString;
use alloc::vec::Vec;

/// The clique term over two port labels `p`, `q`:
/// the single `p`-port for `n = 1`, and for larger `n` a fresh `q`-vertex
/// joined in both directions to everything and renamed into `p`.
pub fn clique_term(n: usize) -> Result<AlgTerm> {
    if n == 0 {
        return Err(Error::Invalid("cliques start at one vertex".to_string()));
    }
    let mut term = AlgTerm::Port("p".to_string());
    for _ in 1..n {
        let joined = AlgTerm::Oplus(Box::new(term), Box::new(AlgTerm::Port("q".to_string())));
        let both = AlgTerm::Add(
            "p".to_string(),
            "q".to_string(),
            Box::new(AlgTerm::Add("q".to_string(), "p".to_string(), Box::new(joined))),
        );
        term = AlgTerm::Ren("q".to_string(), "p".to_string(), Box::new(both));
    }
    Ok(term)
}

/// The directed path term: `add_{a,b}(a + b)` grown one vertex at a time
/// with label rotation, then all ports forgotten; the value is the
/// directed path on `n + 2` vertices.
pub fn path_term(n: usize) -> AlgTerm {
    let a = || "a".to_string();
    let b = || "b".to_string();
    let c = || "c".to_string();
    let mut term = AlgTerm::Add(
        a(),
        b(),
        Box::new(AlgTerm::Oplus(
            Box::new(AlgTerm::Port(a())),
            Box::new(AlgTerm::Port(b())),
        )),
    );
    for _ in 0..n {
        let grown = AlgTerm::Add(
            b(),
            c(),
            Box::new(AlgTerm::Oplus(Box::new(term), Box::new(AlgTerm::Port(c())))),
        );
        let shifted = AlgTerm::Ren(b(), a(), Box::new(grown));
        term = AlgTerm::Ren(c(), b(), Box::new(shifted));
    }
    AlgTerm::Mdf(Vec::new(), Box::new(term))
}

/// The port-graph pipeline computing a modular composition: mark each part
/// with its index, take the disjoint union, add the quotient's edges
/// between the marked blocks, and forget all ports.
pub fn vr_term_for_modular(quotient: &Structure, parts: Vec<AlgTerm>) -> Result<AlgTerm> {
    if !quotient.sort().is_graph() || !quotient.sort().consts.is_empty() {
        return Err(Error::Sort("the quotient must be a plain graph".to_string()));
    }
    let n = parts.len();
    if quotient.domain().len() != n || n < 2 {
        return Err(Error::Invalid(
            "one part per quotient vertex, at least two".to_string(),
        ));
    }
    let label = |i: usize| -> Label { alloc::format!("{i}") };
    let mut marked = parts
        .into_iter()
        .enumerate()
        .map(|(i, t)| AlgTerm::Mark(label(i), Box::new(t)));
    let mut term = marked.next().expect("at least two parts");
    for m in marked {
        term = AlgTerm::Oplus(Box::new(term), Box::new(m));
    }
    for t in quotient.tuples(EDGE) {
        let (i, j) = (t[0] as usize, t[1] as usize);
        if i == j {
            continue;
        }
        term = AlgTerm::Add(label(i), label(j), Box::new(term));
    }
    Ok(AlgTerm::Mdf(Vec::new(), Box::new(term)))
}
