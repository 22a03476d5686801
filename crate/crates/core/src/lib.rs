//! Exact computer algebra for Massey products parameterized by coalgebras.
//!
//! The crate covers the Chevalley–Eilenberg complex of a finite-dimensional
//! Lie algebra as a DGLA, Massey `F`-products in DGLA cohomology for a
//! filtered cocommutative coalgebra `F`, deformations of Lie algebras over
//! finite local bases, and the dual Lie-coalgebra Massey products in the
//! cohomology of a differential graded commutative algebra. All arithmetic
//! is over the rationals and exact.

pub mod algebra;
pub mod ce;
pub mod deform;
pub mod dg;
pub mod dgca;
pub mod error;
pub mod exact;
pub mod graded;
pub mod massey;

pub use error::{Error, Result};
pub use exact::Scalar;
