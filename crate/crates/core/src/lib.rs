//! Finite-dimensional verification toolkit for Pompeiu-Cebysev type operator
//! inequalities under positive unital linear maps.
//!
//! The library builds selfadjoint operators as complex Hermitian matrices,
//! applies continuous functional calculus through their spectral
//! decompositions, realizes positive unital maps in Kraus form, and evaluates
//! the weighted Cebysev-type functionals and inequality gaps that arise for
//! h-synchronous function pairs. A randomized harness generates instances,
//! checks every inequality against a scalar brute-force oracle on diagonal
//! instances, and searches for violations when hypotheses are deliberately
//! broken.

pub mod error;
pub mod functionals;
pub mod linalg;
pub mod posmaps;
pub mod rng;
pub mod scalarfun;
pub mod verify;

pub use error::Error;

/// The complex scalar type used for all matrix entries.
pub use num_complex::Complex64;

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
