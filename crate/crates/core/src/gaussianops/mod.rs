//! Quadratic Gaussian operators: generators, transfer matrices, both Balian-Brezin
//! factorizations and canonical permutations.

mod bbd;
mod cp;
mod generator;
mod prefactor;
mod transfer;


pub(crate) use bbd::{antisym, invert_block};
pub use bbd::{bbd_antinormal, bbd_antinormal_along, bbd_normal, bbd_normal_along, FactoredGaussian, Ordering};
pub use cp::{cp_scan, cp_transform, cp_transform_transfer, CpRecord, CpScan, CpScanEntry, ScanMode, SiteSubset, EXHAUSTIVE_SCAN_MAX_SITES};
pub use generator::{j_matrix, QuadraticGenerator};
pub(crate) use prefactor::{root_det_continued, root_det_principal};
pub use prefactor::{Prefactor, PrefactorRule};
pub use transfer::{compose_generators, compose_transfers, transfer_of, Block, Composition, GeneratorPath, TransferMatrix, J_ORTHOGONALITY_TOL};
