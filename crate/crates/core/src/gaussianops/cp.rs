use alloc::vec::Vec;
use core::fmt;

use fermigauss_numkernel::{rcond, ComplexMatrix, RCOND_TOL};

use super::generator::QuadraticGenerator;
use super::transfer::TransferMatrix;
use crate::error::{Error, Result};

/// Subset of sites on which `c_j <-> c_j^dag` is exchanged. Stored 0-based, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SiteSubset {
    sites: usize,
    members: Vec<usize>,
}

impl SiteSubset {
    pub fn new(sites: usize, members: &[usize]) -> Result<Self> {
        let mut m = members.to_vec();
        m.sort_unstable();
        for w in m.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateSite { site: w[0] + 1 });
            }
        }
        if let Some(&k) = m.iter().find(|&&k| k >= sites) {
            return Err(Error::SiteOutOfRange { site: k + 1, sites });
        }
        Ok(Self { sites, members: m })
    }

    /// From 1-based site labels.
    pub fn from_labels(sites: usize, labels: &[usize]) -> Result<Self> {
        if let Some(&k) = labels.iter().find(|&&k| k == 0 || k > sites) {
            return Err(Error::SiteOutOfRange { site: k, sites });
        }
        let m: Vec<usize> = labels.iter().map(|k| k - 1).collect();
        Self::new(sites, &m)
    }

    pub fn empty(sites: usize) -> Self {
        Self { sites, members: Vec::new() }
    }

    pub fn full(sites: usize) -> Self {
        Self { sites, members: (0..sites).collect() }
    }

    pub(crate) fn from_mask(sites: usize, mask: u64) -> Self {
        Self { sites, members: (0..sites).filter(|k| (mask >> k) & 1 == 1).collect() }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, site: usize) -> bool {
        self.members.binary_search(&site).is_ok()
    }

    /// Index map of `Pi_S`: position `i` of `(c; c^dag)` goes to `perm[i]`.
    pub fn permutation(&self) -> Vec<usize> {
        let l = self.sites;
        let mut p: Vec<usize> = (0..2 * l).collect();
        for &j in &self.members {
            p.swap(j, j + l);
        }
        p
    }

    /// `Pi_S A Pi_S`.
    pub fn conjugate(&self, a: &ComplexMatrix) -> ComplexMatrix {
        let p = self.permutation();
        a.select(&p, &p)
    }
}

impl fmt::Display for SiteSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, k) in self.members.iter().enumerate() {
            if n > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", k + 1)?;
        }
        f.write_str("}")
    }
}

/// Record of a canonical permutation; applying it twice is the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CpRecord {
    pub subset: SiteSubset,
    pub permutation: Vec<usize>,
}

/// `M~ = Pi_S M Pi_S`.
pub fn cp_transform(g: &QuadraticGenerator, s: &SiteSubset) -> Result<(QuadraticGenerator, CpRecord)> {
    if s.sites() != g.sites() {
        return Err(Error::SiteMismatch { expected: g.sites(), found: s.sites() });
    }
    let record = CpRecord { subset: s.clone(), permutation: s.permutation() };
    Ok((QuadraticGenerator::from_trusted(s.conjugate(g.matrix())), record))
}

pub fn cp_transform_transfer(t: &TransferMatrix, s: &SiteSubset) -> Result<TransferMatrix> {
    if s.sites() != t.sites() {
        return Err(Error::SiteMismatch { expected: t.sites(), found: s.sites() });
    }
    TransferMatrix::new(s.conjugate(t.matrix()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct CpScanEntry {
    pub subset: SiteSubset,
    pub rcond_t22: f64,
    pub rcond_t11: f64,
}

impl CpScanEntry {
    pub fn t22_invertible(&self) -> bool {
        self.rcond_t22 >= RCOND_TOL
    }

    pub fn t11_invertible(&self) -> bool {
        self.rcond_t11 >= RCOND_TOL
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    Exhaustive,
    /// Single-site flips from the empty set, following the best `T~22` condition.
    Greedy,
}

/// Largest site count scanned exhaustively.
pub const EXHAUSTIVE_SCAN_MAX_SITES: usize = 20;

#[derive(Clone, Debug, PartialEq)]
pub struct CpScan {
    pub mode: ScanMode,
    /// Ordered by subset size, then lexicographically.
    pub entries: Vec<CpScanEntry>,
}

impl CpScan {
    /// First subset (in scan order) with an invertible `T~22`.
    pub fn first_t22_invertible(&self) -> Option<&CpScanEntry> {
        self.entries.iter().find(|e| e.t22_invertible())
    }
}

fn entry(t: &TransferMatrix, s: SiteSubset) -> CpScanEntry {
    let l = t.sites();
    let tt = s.conjugate(t.matrix());
    let rc = |b: ComplexMatrix| rcond(&b).unwrap_or(0.0);
    CpScanEntry { rcond_t22: rc(tt.submatrix(l, l, l, l)), rcond_t11: rc(tt.submatrix(0, 0, l, l)), subset: s }
}

pub fn cp_scan(t: &TransferMatrix) -> CpScan {
    let l = t.sites();
    if l <= EXHAUSTIVE_SCAN_MAX_SITES {
        let mut subsets: Vec<SiteSubset> = (0..1u64 << l).map(|m| SiteSubset::from_mask(l, m)).collect();
        subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.members.cmp(&b.members)));
        return CpScan { mode: ScanMode::Exhaustive, entries: subsets.into_iter().map(|s| entry(t, s)).collect() };
    }
    let mut visited: Vec<CpScanEntry> = alloc::vec![entry(t, SiteSubset::empty(l))];
    let mut current = visited[0].clone();
    while !current.t22_invertible() {
        let candidates: Vec<CpScanEntry> = (0..l)
            .filter(|&k| !current.subset.contains(k))
            .map(|k| {
                let mut m = current.subset.members.clone();
                m.push(k);
                entry(t, SiteSubset::new(l, &m).expect("fresh site"))
            })
            .collect();
        let best = candidates.iter().cloned().max_by(|a, b| a.rcond_t22.total_cmp(&b.rcond_t22));
        visited.extend(candidates);
        match best {
            Some(b) if b.rcond_t22 > current.rcond_t22 => current = b,
            _ => break,
        }
    }
    visited.sort_by(|a, b| a.subset.len().cmp(&b.subset.len()).then_with(|| a.subset.members.cmp(&b.subset.members)));
    visited.dedup_by(|a, b| a.subset == b.subset);
    CpScan { mode: ScanMode::Greedy, entries: visited }
}
