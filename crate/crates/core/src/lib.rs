//! Classification of degree-one generated minimal algebras (dually, nilpotent
//! Lie algebras) of dimension at most six over fields of characteristic ≠ 2.
//!
//! All arithmetic is exact. The main entry points are [`classify()`],
//! [`MinimalAlgebra::betti`], [`decide_symplectic`] and
//! [`classify::enumerate_classes`].

pub mod error;
pub mod field;
pub mod multilinear;
pub mod algebra;
pub mod bivector;
pub mod classify;
pub mod symplectic;
pub mod oracle;

pub use algebra::{BettiVector, LieAlgebra, MinimalAlgebra};
pub use classify::{classify, ClassLabel, Classification};
pub use error::{Error, Result};
pub use field::{ClassCount, Field, FieldMode, Scalar, SquareClass};
pub use multilinear::{ExteriorElement, LinearMap, Matrix, Subspace};
pub use symplectic::{decide_symplectic, SymplecticVerdict};
