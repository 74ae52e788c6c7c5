//! Counting arcs on hyperbolic surfaces through their associated curves.
//!
//! Surfaces are modelled as free discrete groups of unit-determinant 2×2
//! matrices with marked boundary and cusp words. On top of that the crate
//! enumerates closed geodesics and orthogeodesic arcs by length, maps each
//! arc to the closed curve of the pair of pants it spans, and measures how
//! well lengths and orbit counts track each other.

pub mod assoc;
pub mod census;
pub mod error;
pub mod hypalg;
pub mod orbits;
pub mod pantsform;
pub mod report;
pub mod surface;
pub mod words;

pub use error::{Error, Result};
