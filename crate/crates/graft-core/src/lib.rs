//! Algebras of finite relational structures and graphs.
//!
//! The carrier everywhere is the finite relational structure with named
//! sources ([`structures::Structure`]); graphs are the edge-only instances
//! and multigraphs get a two-sorted incidence representation. On top of that
//! this crate provides:
//!
//! - quantifier-free definable operation schemes as validated first-class
//!   data ([`qfd`]),
//! - first-order formulas, canonical reduced forms and bounded-depth
//!   theories with compositional evaluation over disjoint union and scheme
//!   application ([`logic`]),
//! - many-sorted signatures of graph operations and term evaluation
//!   ([`terms`]),
//! - bottom-up deterministic tree automata and congruence evaluators
//!   ([`recognizers`]),
//! - port expansions and the pointwise similarity decision ([`expansions`]),
//! - modular decomposition ([`modular`]).
//!
//! All values are immutable after construction and all operations are pure
//! and deterministic, so everything can be shared across threads freely.
//! The crate is `no_std` (with `alloc`); IO and file formats live in the
//! companion CLI crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod expansions;
pub mod logic;
pub mod modular;
pub mod qfd;
pub mod recognizers;
pub mod structures;
pub mod terms;

pub use error::{Error, Result};
