//! Finite-field arithmetic and the linear algebra built on it.

mod field;
mod matrix;
mod subspace;

pub use field::{Elem, Field};
pub use matrix::{in_span, mat_rank, Echelon, Matrix};
pub use subspace::{enumerate_subspaces, gaussian_binomial};
