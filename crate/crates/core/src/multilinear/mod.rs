//! Exterior algebra and exact linear algebra.

pub mod exterior;
pub mod matrix;
pub mod subspace;

pub use exterior::{binom, monomial_index, monomials, ExteriorElement, Monomial};
pub use matrix::{Matrix, Vector};
pub use subspace::{LinearMap, Subspace};
