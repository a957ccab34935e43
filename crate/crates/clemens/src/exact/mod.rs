//! Exact scalar arithmetic, matrices, subspaces, truncated polynomial
//! arithmetic, and verified interval enclosures — the substrate every other
//! module computes on.

pub mod gaussian;
pub mod interval;
pub mod matrix;
pub mod poly;
pub mod rational;
pub mod subspace;

pub use gaussian::GaussRat;
pub use interval::{ComplexBox, RatInterval};
pub use matrix::ExactMatrix;
pub use poly::TruncatedPoly;
pub use rational::Rat;
pub use subspace::{Subspace, SubspaceError};
