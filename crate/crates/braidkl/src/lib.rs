//! Exact computation of Kazhdan-Lusztig and Z-polynomials of braid matroids,
//! cross-verified by three independent routes: the palindromicity recursion
//! on the lattice of flats, exhaustive enumeration of labelled (simple/quasi)
//! series-parallel matroids, and bivariate generating functions built by
//! compositional inversion. Includes the equivariant refinement as
//! permutation characters of the symmetric group.
//!
//! All arithmetic is exact; no floating point anywhere.

pub mod equivariant;
pub mod exactmath;
pub mod gfseries;
pub mod klcalc;
pub mod matroid;
pub mod report;
pub mod spenum;

pub use exactmath::IntPolynomial;
pub use klcalc::{braid_kl, KLResult};
pub use matroid::{Matroid, Multigraph};
