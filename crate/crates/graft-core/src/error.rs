use alloc::string::String;
use core::fmt;

/// Errors produced by construction, type checking and evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Sort-level mismatch: overlapping constants in a disjoint union,
    /// composing schemes whose sorts do not fit, and the like.
    Sort(String),
    /// A label (source, port or relation symbol) is not part of the sort
    /// it was used with.
    UnknownSymbol(String),
    /// Arity violation in a tuple or an atom.
    Arity(String),
    /// A structure or multigraph failing its own invariants.
    Invalid(String),
    /// Formula evaluation with an unassigned free variable, or a quantified
    /// formula where a quantifier-free one is required.
    Formula(String),
    /// Syntax error in a term or formula s-expression, with byte position.
    Parse { pos: usize, msg: String },
    /// Ill-typed term node, with the path from the root (child indices).
    IllTyped { path: alloc::vec::Vec<usize>, msg: String },
    /// An exhaustive procedure refused an input beyond its configured size.
    Capacity(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Sort(m) => write!(f, "sort error: {m}"),
            Error::UnknownSymbol(m) => write!(f, "unknown symbol: {m}"),
            Error::Arity(m) => write!(f, "arity error: {m}"),
            Error::Invalid(m) => write!(f, "invalid value: {m}"),
            Error::Formula(m) => write!(f, "formula error: {m}"),
            Error::Parse { pos, msg } => write!(f, "parse error at byte {pos}: {msg}"),
            Error::IllTyped { path, msg } => {
                write!(f, "ill-typed term at path {path:?}: {msg}")
            }
            Error::Capacity(m) => write!(f, "capacity exceeded: {m}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;
