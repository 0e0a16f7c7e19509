//! Fermionic Gaussian operators with linear parts.
//!
//! Operators are `exp(1/2 (c^dag, c) M (c, c^dag)^T + u^dag c^dag + v^T c)` on `L` modes.
//! The crate factorizes them (Balian-Brezin forms, and the five-factor form once linear
//! terms are folded into one extra ancilla mode), evaluates matrix elements between Fock
//! configurations as Pfaffians, and evaluates correlators through Wick's theorem.
//!
//! Sites are 0-based in the API; configuration strings and operator tokens are 1-based.
#![no_std]

extern crate alloc;

pub mod amplitudes;
pub mod colpa;
mod config;
pub mod correlators;
mod error;
pub mod gaussianops;

#[cfg(test)]
mod fixtures;

pub use config::FockConfig;
pub use error::{Error, Result};
pub use fermigauss_numkernel as numkernel;
pub use fermigauss_numkernel::{ComplexMatrix, C64};
