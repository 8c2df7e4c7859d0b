//! Exact splitting of torus-equivariant vector bundles on the projective line.
//!
//! A rank `m` bundle is given by an invertible Laurent-polynomial transition
//! matrix `A(z)` between the chart at `0` (coordinate `z`) and the chart at
//! `∞` (coordinate `w = 1/z`), together with integer torus weights of the two
//! local frames. The engine computes global sections and cohomology with
//! their weight grading, and decomposes the bundle into equivariant line
//! bundles `O(n_i)` with a certificate that can be checked by matrix
//! multiplication alone.

pub mod acceptance;
pub mod algebra;
pub mod bundle;
pub mod cohomology;
pub mod equivariant;
pub mod error;
pub mod format;
pub mod splitting;

pub use bundle::{EquivariantBundle, LineSummand, TorusAction, Weight};
pub use error::{Error, Result};
