//! Triangulations, tree decompositions and balanced separations for convex
//! drawings of outer k-planar and outer min-k-planar graphs, with exact
//! brute-force oracles for small instances.

pub mod decomposition;
pub mod drawing;
pub mod error;
pub mod generators;
pub(crate) mod index;
pub mod oracles;
pub mod par;
pub mod render;
pub mod report;
pub mod separation;
pub mod triangulation;

pub use error::{Error, Result};
