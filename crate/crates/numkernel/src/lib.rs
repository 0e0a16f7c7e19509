//! Dense complex linear algebra for the Gaussian-operator crates.
//!
//! Everything here is `no_std` with `alloc`: matrix exponential (Pade 13 with scaling and
//! squaring), principal logarithm through the complex Schur form, LU based determinants
//! and inverses with a 1-norm condition estimate, the Parlett-Reid Pfaffian and block
//! LDU factors of 2x2 block matrices.
#![no_std]

extern crate alloc;

mod expm;
mod ldu;
mod logm;
mod lu;
mod matrix;
mod pfaffian;
mod schur;

pub use expm::expm;
pub use ldu::{schur_factor, BlockLdu, Pivot};
pub use logm::logm;
pub use lu::{det, inverse, inverse_conditioned, rcond, solve, Lu};
pub use matrix::{ComplexMatrix, C64};
pub use pfaffian::{pfaffian, pfaffian_checked, skew_deviation, SkewMatrix};
pub use schur::{schur, Schur};

/// Relative antisymmetry tolerance for [`SkewMatrix`].
pub const SKEW_TOL: f64 = 1e-10;
/// Reciprocal condition threshold below which a block counts as singular.
pub const RCOND_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LinalgError {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch { expected: (usize, usize), found: (usize, usize) },
    #[error("non-finite entry")]
    NonFinite,
    #[error("singular matrix (rcond = {rcond:e})")]
    Singular { rcond: f64 },
    #[error("eigenvalue on the closed negative real axis; principal logarithm undefined")]
    BranchCut,
    #[error("matrix is not antisymmetric (max |A + A^T| = {deviation:e})")]
    NotSkew { deviation: f64 },
    #[error("iteration did not converge")]
    NoConvergence,
}
