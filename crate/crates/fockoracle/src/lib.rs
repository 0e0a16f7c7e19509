//! Brute-force Fock-space oracle.
//!
//! Mode operators come from the Jordan-Wigner construction and every Gaussian operator is
//! exponentiated as a full `2^L x 2^L` matrix. Nothing here knows about Balian-Brezin
//! factors, Pfaffians or Wick contractions; the crate depends on the linear algebra
//! kernel only.
//!
//! Basis ordering: bit-strings `(i_1 ... i_L)` with `i_1` as the most significant bit, and
//! `|I> = c_{i_1}^dag c_{i_2}^dag ... |0>` for occupied sites `i_1 < i_2 < ...`.
#![no_std]

extern crate alloc;

mod dense;
mod modes;

pub use dense::{
    dense_conjugate, dense_element, dense_expectation, dense_exponential, dense_gaussian, exponent_operator, gaussian_exponent, mode_string, DenseOperator,
    Exponent,
};
pub use modes::{basis_bits, basis_index, build_modes, fock_state, spin_basis_sign, spin_mode, JwMode, ModePair};

use fermigauss_numkernel::LinalgError;

/// Largest site count for which mode operators are built.
pub const MAX_MODE_SITES: usize = 12;
/// Largest site count for dense exponentials.
pub const MAX_GAUSSIAN_SITES: usize = 10;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OracleError {
    #[error("{sites} sites exceeds the oracle cap of {max}")]
    TooManySites { sites: usize, max: usize },
    #[error("operator dimensions do not match")]
    DimensionMismatch,
    #[error("operator is singular")]
    Singular,
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
