//! Contranominal scales in formal contexts.
//!
//! The crate enumerates every contranominal scale of a binary object/attribute
//! relation with a lexicographic backtracking search over characterizing
//! tuples, measures how strongly each attribute participates in maximal
//! scales (its *contranominal influence*), and selects attribute subsets that
//! shrink the concept lattice and its canonical implication base.
//!
//! Module map:
//!
//! - [`context`]: formal contexts, derivations, subcontexts and `(p,q)`-cores.
//! - [`format`]: Burmeister `.cxt` and CSV encodings.
//! - [`preprocess`]: clarification and reduction with reconstruction data.
//! - [`scales`]: scale enumeration, the conflict-graph clique oracle,
//!   induced matchings and reconstruction of scales of unreduced contexts.
//! - [`lattice`]: concepts, sub-meet-semilattices, implications and the
//!   canonical base.
//! - [`adjust`]: cubic attribute sets, influence and delta-adjusting.
//! - [`experiment`]: structure and knowledge experiments, timing reports.

pub mod adjust;
mod bits;
pub mod context;
mod error;
pub mod experiment;
pub mod format;
pub mod lattice;
mod par;
pub mod preprocess;
pub mod scales;

pub use fixedbitset::FixedBitSet;
pub use context::{FormalContext, SubcontextSelection};
pub use error::{Error, Result};
pub use par::Execution;
