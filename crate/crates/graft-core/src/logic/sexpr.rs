//! S-expression syntax for formulas:
//! `(eq x1 (const a))`, `(rel edge x1 x2)`, `(not f)`, `(and f g)`,
//! `(or f g)`, `(exists x1 f)`, `(forall x1 f)`, `true`, `false`.
//!
//! Variables are written `x<n>`; the short names `x`, `y`, `z`, `w` are
//! accepted as aliases for `x1..x4`.

use super::{Formula, LogicTerm, VarId};
use crate::error::{Error, Result};
use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Generic s-expression tree shared with the term parser.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Sexpr {
    Atom(String, usize),
    List(Vec<Sexpr>, usize),
}

impl Sexpr {
    pub(crate) fn pos(&self) -> usize {
        match self {
            Sexpr::Atom(_, p) | Sexpr::List(_, p) => *p,
        }
    }
}

pub(crate) fn tokenize(input: &str) -> Result<Vec<(String, usize)>> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut start = 0;
    for (i, ch) in input.char_indices() {
        match ch {
            '(' | ')' => {
                if !cur.is_empty() {
                    out.push((core::mem::take(&mut cur), start));
                }
                out.push((ch.to_string(), i));
            }
            c if c.is_whitespace() => {
                if !cur.is_empty() {
                    out.push((core::mem::take(&mut cur), start));
                }
            }
            c => {
                if cur.is_empty() {
                    start = i;
                }
                cur.push(c);
            }
        }
    }
    if !cur.is_empty() {
        out.push((cur, start));
    }
    Ok(out)
}

pub(crate) fn parse_sexpr(input: &str) -> Result<Sexpr> {
    let tokens = tokenize(input)?;
    let (expr, rest) = parse_one(&tokens, 0)?;
    if rest != tokens.len() {
        return Err(Error::Parse {
            pos: tokens[rest].1,
            msg: "trailing input after expression".to_string(),
        });
    }
    Ok(expr)
}

fn parse_one(tokens: &[(String, usize)], mut i: usize) -> Result<(Sexpr, usize)> {
    let Some((tok, pos)) = tokens.get(i) else {
        return Err(Error::Parse {
            pos: 0,
            msg: "unexpected end of input".to_string(),
        });
    };
    match tok.as_str() {
        "(" => {
            let open = *pos;
            i += 1;
            let mut items = Vec::new();
            loop {
                match tokens.get(i) {
                    Some((t, _)) if t == ")" => return Ok((Sexpr::List(items, open), i + 1)),
                    Some(_) => {
                        let (item, next) = parse_one(tokens, i)?;
                        items.push(item);
                        i = next;
                    }
                    None => {
                        return Err(Error::Parse {
                            pos: open,
                            msg: "unclosed parenthesis".to_string(),
                        })
                    }
                }
            }
        }
        ")" => Err(Error::Parse {
            pos: *pos,
            msg: "unexpected ')'".to_string(),
        }),
        _ => Ok((Sexpr::Atom(tok.clone(), *pos), i + 1)),
    }
}

pub(crate) fn parse_var(name: &str, pos: usize) -> Result<VarId> {
    match name {
        "x" => return Ok(VarId(1)),
        "y" => return Ok(VarId(2)),
        "z" => return Ok(VarId(3)),
        "w" => return Ok(VarId(4)),
        _ => {}
    }
    if let Some(num) = name.strip_prefix('x') {
        if let Ok(n) = num.parse::<u32>() {
            if n >= 1 {
                return Ok(VarId(n));
            }
        }
    }
    Err(Error::Parse {
        pos,
        msg: format!("expected a variable x1, x2, ... (got {name})"),
    })
}

fn parse_term(e: &Sexpr) -> Result<LogicTerm> {
    match e {
        Sexpr::Atom(a, pos) => Ok(LogicTerm::Var(parse_var(a, *pos)?)),
        Sexpr::List(items, pos) => match items.as_slice() {
            [Sexpr::Atom(k, _), Sexpr::Atom(c, _)] if k == "const" => {
                Ok(LogicTerm::Const(c.clone()))
            }
            _ => Err(Error::Parse {
                pos: *pos,
                msg: "expected (const <label>) or a variable".to_string(),
            }),
        },
    }
}

fn formula_of(e: &Sexpr) -> Result<Formula> {
    match e {
        Sexpr::Atom(a, pos) => match a.as_str() {
            "true" => Ok(Formula::True),
            "false" => Ok(Formula::False),
            _ => Err(Error::Parse {
                pos: *pos,
                msg: format!("unknown formula atom {a}"),
            }),
        },
        Sexpr::List(items, pos) => {
            let Some(Sexpr::Atom(head, _)) = items.first() else {
                return Err(Error::Parse {
                    pos: *pos,
                    msg: "expected an operator head".to_string(),
                });
            };
            match (head.as_str(), &items[1..]) {
                ("eq", [a, b]) => Ok(Formula::Eq(parse_term(a)?, parse_term(b)?)),
                ("rel", rest) if !rest.is_empty() => {
                    let Sexpr::Atom(name, _) = &rest[0] else {
                        return Err(Error::Parse {
                            pos: rest[0].pos(),
                            msg: "expected a relation name".to_string(),
                        });
                    };
                    let args: Result<Vec<LogicTerm>> = rest[1..].iter().map(parse_term).collect();
                    Ok(Formula::Rel(name.clone(), args?))
                }
                ("not", [f]) => Ok(Formula::not(formula_of(f)?)),
                ("and", [a, b]) => Ok(Formula::and(formula_of(a)?, formula_of(b)?)),
                ("or", [a, b]) => Ok(Formula::or(formula_of(a)?, formula_of(b)?)),
                ("exists", [v, f]) => {
                    let Sexpr::Atom(name, vpos) = v else {
                        return Err(Error::Parse {
                            pos: v.pos(),
                            msg: "expected a variable".to_string(),
                        });
                    };
                    Ok(Formula::Exists(
                        parse_var(name, *vpos)?,
                        Box::new(formula_of(f)?),
                    ))
                }
                ("forall", [v, f]) => {
                    let Sexpr::Atom(name, vpos) = v else {
                        return Err(Error::Parse {
                            pos: v.pos(),
                            msg: "expected a variable".to_string(),
                        });
                    };
                    Ok(Formula::Forall(
                        parse_var(name, *vpos)?,
                        Box::new(formula_of(f)?),
                    ))
                }
                _ => Err(Error::Parse {
                    pos: *pos,
                    msg: format!("unknown or malformed formula operator {head}"),
                }),
            }
        }
    }
}

pub fn parse_formula(input: &str) -> Result<Formula> {
    formula_of(&parse_sexpr(input)?)
}

pub fn print_formula(f: &Formula) -> String {
    let term = |t: &LogicTerm| match t {
        LogicTerm::Var(v) => format!("{v}"),
        LogicTerm::Const(c) => format!("(const {c})"),
    };
    match f {
        Formula::True => "true".to_string(),
        Formula::False => "false".to_string(),
        Formula::Eq(a, b) => format!("(eq {} {})", term(a), term(b)),
        Formula::Rel(r, args) => {
            let mut s = format!("(rel {r}");
            for a in args {
                s.push(' ');
                s.push_str(&term(a));
            }
            s.push(')');
            s
        }
        Formula::Not(g) => format!("(not {})", print_formula(g)),
        Formula::And(a, b) => format!("(and {} {})", print_formula(a), print_formula(b)),
        Formula::Or(a, b) => format!("(or {} {})", print_formula(a), print_formula(b)),
        Formula::Exists(v, g) => format!("(exists {v} {})", print_formula(g)),
        Formula::Forall(v, g) => format!("(forall {v} {})", print_formula(g)),
    }
}
