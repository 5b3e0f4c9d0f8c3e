//! Finite combinatorics behind generic cofinitary permutations.
//!
//! The crate covers words over a catalog ground group with one extra
//! generator `X`, their evaluation on finite partial injections, forcing
//! conditions with fixed-point freezing and the constructive domain
//! extension, parity coding of bit strings along word paths, a certified
//! builder for finite approximations of the generic permutation, symbolic
//! iterated Fubini ideals on well-founded trees, and discrete-set predicates
//! for a few decidable hypergraphs.

pub mod ground;
pub mod streams;
pub mod zhang;
pub mod injection;
pub mod words;
pub mod coding;
pub mod builder;
pub mod trees;
pub mod discrete;

pub use ground::{Embedding, GroundGroup};
pub use injection::{FixSet, PartialInjection};
pub use words::{Letter, Word};
