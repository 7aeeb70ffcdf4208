//! Exact-arithmetic homological algebra workbench.
//!
//! Everything runs over arbitrary-precision rationals. The crate provides
//! Schur functors of chain complexes with the Koszul sign conventions made
//! fully explicit, differential graded Lie algebras and their Jacobi
//! complexes, an executable comparison between truncated invariant
//! functions of a linear group action and Jacobi cohomology, and the
//! resolution calculus for sheaves of differential operators on projective
//! space.

pub mod complex;
pub mod dgla;
pub mod error;
pub mod group_algebra;
pub mod json;
pub mod matrix;
pub mod partition;
pub mod perm;
pub mod projective;
pub mod quotient;
pub mod rational;
pub mod tensor;
pub mod testgen;

pub use complex::{Complex, ComplexMap};
pub use error::{Error, Result};
pub use group_algebra::{young_symmetrizer, GroupAlgebraElement, DEFAULT_PARTITION_BOUND};
pub use matrix::{Matrix, Subspace};
pub use partition::Partition;
pub use perm::Permutation;
pub use rational::Rational;
pub use tensor::{alt_power, koszul_sign, schur_complex, tensor_power, SchurComplex};
