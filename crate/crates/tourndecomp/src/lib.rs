//! Path decompositions of tournaments and digraphs.
//!
//! The crate computes the path number `pn(D)` exactly by branch and bound, evaluates the
//! excess quantities that bound it from below, classifies the exceptional tournaments,
//! checks robust outexpansion by brute force, and runs a small-scale version of the
//! absorbing/layout construction that decomposes a tournament into `texc(T)` paths.

pub mod digraph;
pub mod error;
pub mod exceptional;
pub mod excess;
pub mod expander;
pub mod matching;
pub mod pipeline;
pub mod solver;
pub mod verify;

pub use digraph::{Digraph, Path, PathDecomposition};
pub use error::{Error, Result};
