//! Matrix elements between Fock configurations: the Pfaffian overlap formula, its
//! fallbacks for singular blocks, overlaps with linear parts and pair states.

mod kernel;
mod overlap;
mod pair;


pub use crate::config::FockConfig;
pub use kernel::OverlapKernel;
pub use overlap::{
    generalized_overlap, generalized_overlap_with, magnitude_with_subset, overlap, overlap_between, overlap_epsilon, overlap_epsilon_path,
    overlap_magnitude_cp, overlap_magnitude_cp_path, overlap_path, richardson, Diagnostics, EpsilonReport, EpsilonSchedule, Method, OverlapOptions,
    OverlapResult,
};
pub use pair::{pair_state_amplitude, pair_state_norm, pair_state_norm_squared};
