//! Exact scalar, polynomial and matrix arithmetic over the rationals.

pub mod gcd;
pub mod laurent;
pub mod linsolve;
pub mod matrix;
pub mod rational;
pub mod unipoly;

pub use gcd::{gcd_all, poly_ext_gcd, PolyMatrix};
pub use laurent::LaurentPoly;
pub use linsolve::{rank, solve_rational_kernel, RatMatrix};
pub use matrix::LaurentMatrix;
pub use rational::Rational;
pub use unipoly::UniPoly;

/// Determinant of a Laurent matrix.
pub fn mat_det(m: &LaurentMatrix) -> crate::Result<LaurentPoly> {
    m.det()
}

/// Adjugate of a Laurent matrix.
pub fn mat_adjugate(m: &LaurentMatrix) -> crate::Result<LaurentMatrix> {
    m.adjugate()
}
