//! Error classification shared by all modules.
//!
//! Callers (the CLI in particular) distinguish two failure classes: a caller
//! violated a precondition, or the requested result cannot be certified at
//! the working precision. Every module error type reports its class.

/// Broad class of a failure, used to pick process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Input violates a documented precondition.
    Precondition,
    /// The result is not determined at the stored precision.
    Precision,
}

/// Implemented by every module error enum.
pub trait Classify {
    fn class(&self) -> ErrorClass;
}
