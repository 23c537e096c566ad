//! Exact arithmetic for integral quadratic lattices, Clifford algebras,
//! F-crystals over truncated Witt rings, and one-dimensional formal group laws.
//!
//! Everything is computed over exact coefficient rings: arbitrary-precision
//! integers and rationals, or truncated p-adic rings with explicit precision
//! tracking. No floating point anywhere.
//!
//! The batch entry points (`*_sweep`, `*_suite`) run their independent trials
//! through [`exec`], which is backed by rayon when the `parallel` feature
//! (default) is enabled and falls back to a plain sequential loop otherwise.

pub mod clifford;
pub mod error;
pub mod exec;
pub mod fcrystal;
pub mod formalgroup;
pub mod lattice;
pub mod linalg;
pub mod padic;

pub use error::ErrorClass;
