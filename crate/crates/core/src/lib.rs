//! Nonunital ring classes made executable.
//!
//! Finite rings are given by structure constants and decided by exhaustive
//! search; infinite example rings (countable direct sums, finite-rank
//! matrices, compactly supported piecewise polynomials) are handled through
//! the [`ComputableRing`] capability interface. The [`witnesses`] module turns
//! the standard constructions of local units into algorithms.

pub mod classify;
pub mod cli;
pub mod computable;
pub mod constructions;
pub mod funring;
pub mod ring;
pub mod witnesses;

pub use computable::{ComputableRing, Sides};
pub use ring::{make_finite_ring, Element, FiniteAbelianGroup, FiniteRing, RingError, Side, Subgroup};
