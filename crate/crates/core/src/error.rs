use fermigauss_numkernel::{LinalgError, C64};

use crate::gaussianops::Block;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("J*M is not antisymmetric (max deviation {deviation:e})")]
    InvalidGenerator { deviation: f64 },
    #[error("transfer matrix violates T J T^T = J (max deviation {deviation:e})")]
    NotJOrthogonal { deviation: f64 },
    #[error("site count mismatch: expected {expected}, found {found}")]
    SiteMismatch { expected: usize, found: usize },
    #[error("site {site} out of range 1..={sites}")]
    SiteOutOfRange { site: usize, sites: usize },
    #[error("duplicate site {site} in subset")]
    DuplicateSite { site: usize },
    #[error("block {block:?} is singular (rcond = {rcond:e})")]
    SingularBlock { block: Block, rcond: f64 },
    #[error("invalid configuration string {0:?}")]
    InvalidConfig(alloc::string::String),
    #[error("invalid operator token {0:?}")]
    InvalidOperator(alloc::string::String),
    #[error("Richardson estimates disagree (relative {relative:e}); try the cp-magnitude method")]
    ExtrapolationDisagreement { relative: f64 },
    #[error("no canonical permutation restores an invertible block")]
    UnsupportedInstance,
    #[error("overlap vanishes; unnormalized contraction sum is {unnormalized}")]
    ZeroOverlap { unnormalized: C64 },
    #[error("operation needs a purely quadratic context (u = v = 0)")]
    NotQuadratic,
    #[error("embedded transfer lacks the ancilla block pattern (deviation {deviation:e})")]
    EmbeddingStructure { deviation: f64 },
    #[error("numerical failure: {0}")]
    NumericalFailure(&'static str),
}
