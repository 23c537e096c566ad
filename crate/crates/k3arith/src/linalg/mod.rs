//! Exact dense linear algebra over the integers and the rationals.
//!
//! Integer matrices support fraction-free (Bareiss) determinants and Smith
//! normal form with transform tracking; rational matrices support reduced row
//! echelon form and everything derived from it (rank, solving, null space,
//! column space, subspace comparisons) plus symmetric congruence
//! diagonalization for Sylvester signatures.

pub mod intmat;
pub mod ratmat;

pub use intmat::IntMat;
pub use ratmat::RatMat;
