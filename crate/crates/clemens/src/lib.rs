//! Exact verification of limiting mixed Hodge structures for Clemens-manifold
//! degenerations.
//!
//! A conifold transition contracts a Calabi-Yau threefold along (−1,−1)-curves
//! and smooths the result to a (generally non-Kähler) complex manifold. The
//! degeneration equips the middle cohomology of the nearby fiber with a
//! limiting mixed Hodge structure: a weight filtration W₂ ⊆ W₃ ⊆ W₄, a Hodge
//! filtration F•, a nilpotent operator N with N² = 0, and the alternating
//! intersection pairing. This crate represents those structures over ℚ(i) with
//! exact arithmetic and mechanically verifies the two statements that make the
//! smoothing behave like a Kähler manifold:
//!
//! * the ∂∂̄-condition F²ₛ ∩ conj(F²ₛ) = 0 near the degenerate fiber, via a
//!   wedge-determinant criterion whose leading term is 2i·Im(z)·|D|²;
//! * the Hodge–Riemann positivity −i⟨η, conj η⟩ > 0 on H^{2,1}, via a Schur
//!   complement elimination in which the y² = Im(z)² terms cancel exactly.
//!
//! Everything verdict-bearing is either exact Gaussian-rational arithmetic or
//! interval arithmetic with rational endpoints; there is no floating point.
//!
//! Module map:
//!
//! * [`exact`] — rational and Gaussian-rational scalars, matrices, canonical
//!   subspaces, truncated multivariate polynomials, verified intervals;
//! * [`mhs`] — mixed Hodge structures, validation, and the explicit Deligne
//!   splitting I^{p,q};
//! * [`lmhs`] — the limiting-structure package: intersection form, nilpotent
//!   operator, adapted symplectic bases, the F² and H^{2,1} limit bases, and a
//!   seeded instance generator;
//! * [`orbit`] — deformation families, pull-back through e^{zN}, the wedge
//!   determinant, the Q-matrix/Schur pipeline, the y²-cancellation identity,
//!   certified smallness thresholds, and rank scans.

pub mod exact;
pub mod files;
pub mod lmhs;
pub mod mhs;
pub mod orbit;

pub use exact::{ComplexBox, ExactMatrix, GaussRat, Rat, RatInterval, Subspace, TruncatedPoly};

#[cfg(doctest)]
mod book;
