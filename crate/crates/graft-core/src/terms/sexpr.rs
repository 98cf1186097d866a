//! S-expression syntax for terms, one grammar across all signatures.

use super::AlgTerm;
use crate::error::{Error, Result};
use crate::logic::sexpr_support::{parse_sexpr, Sexpr};
use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

fn label_of(e: &Sexpr) -> Result<String> {
    match e {
        Sexpr::Atom(a, _) => Ok(a.clone()),
        Sexpr::List(_, pos) => Err(Error::Parse {
            pos: *pos,
            msg: "expected a label".to_string(),
        }),
    }
}

fn pair_list(e: &Sexpr) -> Result<Vec<(String, String)>> {
    let Sexpr::List(items, _) = e else {
        return Err(Error::Parse {
            pos: e.pos(),
            msg: "expected a list of label pairs".to_string(),
        });
    };
    items
        .iter()
        .map(|p| match p {
            Sexpr::List(pair, pos) => match pair.as_slice() {
                [a, b] => Ok((label_of(a)?, label_of(b)?)),
                _ => Err(Error::Parse {
                    pos: *pos,
                    msg: "expected a pair (a b)".to_string(),
                }),
            },
            Sexpr::Atom(_, pos) => Err(Error::Parse {
                pos: *pos,
                msg: "expected a pair (a b)".to_string(),
            }),
        })
        .collect()
}

fn term_of(e: &Sexpr) -> Result<AlgTerm> {
    match e {
        Sexpr::Atom(a, pos) => match a.as_str() {
            "v" => Ok(AlgTerm::Vertex),
            "v-loop" => Ok(AlgTerm::VertexLoop),
            "econ-empty" => Ok(AlgTerm::EconEmpty),
            _ => Err(Error::Parse {
                pos: *pos,
                msg: format!("unknown constant {a}"),
            }),
        },
        Sexpr::List(items, pos) => {
            let Some(Sexpr::Atom(head, _)) = items.first() else {
                return Err(Error::Parse {
                    pos: *pos,
                    msg: "expected an operation head".to_string(),
                });
            };
            let t = |e: &Sexpr| term_of(e).map(Box::new);
            match (head.as_str(), &items[1..]) {
                ("src", [a]) => Ok(AlgTerm::Src(label_of(a)?)),
                ("edge", [a, b]) => Ok(AlgTerm::EdgeConst(label_of(a)?, label_of(b)?)),
                ("loop", [a]) => Ok(AlgTerm::LoopConst(label_of(a)?)),
                ("port", [p]) => Ok(AlgTerm::Port(label_of(p)?)),
                ("port-loop", [p]) => Ok(AlgTerm::PortLoop(label_of(p)?)),
                ("v", []) => Ok(AlgTerm::Vertex),
                ("v-loop", []) => Ok(AlgTerm::VertexLoop),
                ("econ-empty", []) => Ok(AlgTerm::EconEmpty),
                ("oplus", [a, b]) => Ok(AlgTerm::Oplus(t(a)?, t(b)?)),
                ("parallel", [a, b]) => Ok(AlgTerm::Parallel(t(a)?, t(b)?)),
                ("box", [a, b]) => Ok(AlgTerm::BoxC(t(a)?, t(b)?)),
                ("otimes", [j, a, b]) => Ok(AlgTerm::Otimes(pair_list(j)?, t(a)?, t(b)?)),
                ("srcren", [a, b, x]) => {
                    Ok(AlgTerm::SrcRen(label_of(a)?, label_of(b)?, t(x)?))
                }
                ("srcfg", [a, x]) => Ok(AlgTerm::SrcFg(label_of(a)?, t(x)?)),
                ("srcfg-all", [x]) => Ok(AlgTerm::SrcFgAll(t(x)?)),
                ("fus", [a, b, x]) => Ok(AlgTerm::Fus(label_of(a)?, label_of(b)?, t(x)?)),
                ("fus-to", [a, b, x]) => {
                    Ok(AlgTerm::FusTo(label_of(a)?, label_of(b)?, t(x)?))
                }
                ("mfus", [a, b, x]) => Ok(AlgTerm::MFus(label_of(a)?, label_of(b)?, t(x)?)),
                ("del", [pairs, x]) => Ok(AlgTerm::Del(pair_list(pairs)?, t(x)?)),
                ("fusrel", [pairs, x]) => Ok(AlgTerm::FusRel(pair_list(pairs)?, t(x)?)),
                ("add", [p, q, x]) => Ok(AlgTerm::Add(label_of(p)?, label_of(q)?, t(x)?)),
                ("ren", [p, q, x]) => Ok(AlgTerm::Ren(label_of(p)?, label_of(q)?, t(x)?)),
                ("fg", [p, x]) => Ok(AlgTerm::Fg(label_of(p)?, t(x)?)),
                ("mdf", [pairs, x]) => Ok(AlgTerm::Mdf(pair_list(pairs)?, t(x)?)),
                ("mark", [i, x]) => Ok(AlgTerm::Mark(label_of(i)?, t(x)?)),
                ("apply-scheme", [name, x]) => {
                    Ok(AlgTerm::ApplyScheme(label_of(name)?, t(x)?))
                }
                ("econ-forget", [x]) => Ok(AlgTerm::EconForget(t(x)?)),
                ("econ-add-vertex", [x]) => Ok(AlgTerm::EconAddVertex(t(x)?)),
                ("econ-add-edge", [x]) => Ok(AlgTerm::EconAddEdge(t(x)?)),
                ("econ-shift", [x]) => Ok(AlgTerm::EconShift(t(x)?)),
                ("econ-swap", [x]) => Ok(AlgTerm::EconSwap(t(x)?)),
                _ => Err(Error::Parse {
                    pos: *pos,
                    msg: format!("unknown or malformed operation {head}"),
                }),
            }
        }
    }
}

pub fn parse_term(input: &str) -> Result<AlgTerm> {
    term_of(&parse_sexpr(input)?)
}

fn pairs_to_text(pairs: &[(String, String)]) -> String {
    let mut s = String::from("(");
    for (i, (a, b)) in pairs.iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        s.push_str(&format!("({a} {b})"));
    }
    s.push(')');
    s
}

pub fn print_term(t: &AlgTerm) -> String {
    use AlgTerm::*;
    match t {
        Src(a) => format!("(src {a})"),
        EdgeConst(a, b) => format!("(edge {a} {b})"),
        LoopConst(a) => format!("(loop {a})"),
        Port(p) => format!("(port {p})"),
        PortLoop(p) => format!("(port-loop {p})"),
        Vertex => "(v)".to_string(),
        VertexLoop => "(v-loop)".to_string(),
        EconEmpty => "(econ-empty)".to_string(),
        Oplus(a, b) => format!("(oplus {} {})", print_term(a), print_term(b)),
        Parallel(a, b) => format!("(parallel {} {})", print_term(a), print_term(b)),
        BoxC(a, b) => format!("(box {} {})", print_term(a), print_term(b)),
        Otimes(j, a, b) => format!(
            "(otimes {} {} {})",
            pairs_to_text(j),
            print_term(a),
            print_term(b)
        ),
        SrcRen(a, b, x) => format!("(srcren {a} {b} {})", print_term(x)),
        SrcFg(a, x) => format!("(srcfg {a} {})", print_term(x)),
        SrcFgAll(x) => format!("(srcfg-all {})", print_term(x)),
        Fus(a, b, x) => format!("(fus {a} {b} {})", print_term(x)),
        FusTo(a, b, x) => format!("(fus-to {a} {b} {})", print_term(x)),
        MFus(a, b, x) => format!("(mfus {a} {b} {})", print_term(x)),
        Del(pairs, x) => format!("(del {} {})", pairs_to_text(pairs), print_term(x)),
        FusRel(pairs, x) => format!("(fusrel {} {})", pairs_to_text(pairs), print_term(x)),
        Add(p, q, x) => format!("(add {p} {q} {})", print_term(x)),
        Ren(p, q, x) => format!("(ren {p} {q} {})", print_term(x)),
        Fg(p, x) => format!("(fg {p} {})", print_term(x)),
        Mdf(pairs, x) => format!("(mdf {} {})", pairs_to_text(pairs), print_term(x)),
        Mark(i, x) => format!("(mark {i} {})", print_term(x)),
        ApplyScheme(name, x) => format!("(apply-scheme {name} {})", print_term(x)),
        EconForget(x) => format!("(econ-forget {})", print_term(x)),
        EconAddVertex(x) => format!("(econ-add-vertex {})", print_term(x)),
        EconAddEdge(x) => format!("(econ-add-edge {})", print_term(x)),
        EconShift(x) => format!("(econ-shift {})", print_term(x)),
        EconSwap(x) => format!("(econ-swap {})", print_term(x)),
    }
}
