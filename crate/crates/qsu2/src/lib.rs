//! Numerical kernel for the quantum SU(2) group and basic hypergeometric
//! orthogonal polynomials.
//!
//! The crate builds, at a fixed base `0 < q < 1`:
//!
//! * scalar q-calculus — q-shifted factorials, q-binomials, basic
//!   hypergeometric series ([`qseries`]);
//! * the classical q-polynomial families (Askey-Wilson, continuous
//!   q-ultraspherical/q-Hermite, little q-Jacobi, q-Hahn, (dual)
//!   q-Krawtchouk, Chebyshev U) together with their orthogonality measures
//!   and quadrature ([`families`], [`measure`]);
//! * the coordinate Hopf *-algebra of quantum SU(2) with exact
//!   normal-ordered arithmetic, its structure maps, Haar functional, and
//!   *-representations ([`aqsu2`]);
//! * the quantized enveloping algebra acting on it: spin-l representation
//!   matrices, Casimir, twisted-primitive elements, duality pairing, and
//!   the left/right actions ([`uqsu2`]);
//! * eigenvector bases of the twisted-primitive elements, generalized
//!   matrix elements, spherical elements, and their expansion in
//!   Askey-Wilson polynomials ([`matelt`]);
//! * a catalog of identity checks connecting all of the above, with a
//!   report-writing runner used by the `qsu2` command-line tool
//!   ([`checks`]).
//!
//! Everything is verified numerically at the configured base; there is no
//! symbolic arithmetic anywhere in the crate.

pub mod aqsu2;
pub mod checks;
pub mod families;
pub mod matelt;
pub mod measure;
pub mod qseries;
pub mod uqsu2;

pub use qseries::{QBase, QError};
