use fermigauss_numkernel::{inverse_conditioned, logm, skew_deviation, ComplexMatrix, LinalgError, RCOND_TOL};

use super::prefactor::{root_det_continued, root_det_principal, Prefactor, PrefactorRule};
use super::transfer::{Block, GeneratorPath, TransferMatrix};
use crate::error::{Error, Result};

/// Factor order of a Balian-Brezin decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ordering {
    /// `e^{1/2 c^dag X c^dag} e^{c^dag Y c - 1/2 tr Y} e^{1/2 c Z c}`
    Normal,
    /// `e^{1/2 c X c} e^{c^dag Y c - 1/2 tr Y} e^{1/2 c^dag Z c^dag}`
    Antinormal,
}

/// Three-factor form of a quadratic Gaussian operator; the operator equals
/// `prefactor * e^{..X..} e^{c^dag Y c} e^{..Z..}` in the given ordering.
#[derive(Clone, Debug)]
pub struct FactoredGaussian {
    pub(crate) sites: usize,
    pub(crate) ordering: Ordering,
    pub(crate) x: ComplexMatrix,
    pub(crate) exp_y: ComplexMatrix,
    pub(crate) y: Option<ComplexMatrix>,
    pub(crate) z: ComplexMatrix,
    pub(crate) prefactor: Prefactor,
    pub(crate) rcond: f64,
}

impl FactoredGaussian {
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn ordering(&self) -> Ordering {
        self.ordering
    }

    /// Coefficients of the leftmost factor, as computed.
    pub fn x(&self) -> &ComplexMatrix {
        &self.x
    }

    pub fn exp_y(&self) -> &ComplexMatrix {
        &self.exp_y
    }

    /// Principal logarithm of `e^Y`, when it exists.
    pub fn y(&self) -> Option<&ComplexMatrix> {
        self.y.as_ref()
    }

    pub fn z(&self) -> &ComplexMatrix {
        &self.z
    }

    /// `(X - X^T) / 2`.
    pub fn x_antisymmetric(&self) -> ComplexMatrix {
        antisym(&self.x)
    }

    pub fn z_antisymmetric(&self) -> ComplexMatrix {
        antisym(&self.z)
    }

    pub fn prefactor(&self) -> Prefactor {
        self.prefactor
    }

    /// Reciprocal condition estimate of the inverted block.
    pub fn rcond(&self) -> f64 {
        self.rcond
    }

    /// `max(|X + X^T|, |Z + Z^T|)`.
    pub fn antisymmetry_defect(&self) -> f64 {
        skew_deviation(&self.x).max(skew_deviation(&self.z))
    }
}

pub(crate) fn antisym(a: &ComplexMatrix) -> ComplexMatrix {
    (a - &a.transpose()).scale_real(0.5)
}

pub(crate) fn invert_block(b: &ComplexMatrix, which: Block) -> Result<(ComplexMatrix, f64)> {
    inverse_conditioned(b, RCOND_TOL).map_err(|e| match e {
        LinalgError::Singular { rcond } => Error::SingularBlock { block: which, rcond },
        e => e.into(),
    })
}

/// Normal form: `X = T12 T22^-1`, `Z = T22^-1 T21`, `e^Y = T22^-T`, prefactor `det(T22)^{1/2}`
/// by the principal-log rule.
pub fn bbd_normal(t: &TransferMatrix) -> Result<FactoredGaussian> {
    let [_, t12, t21, t22] = t.blocks();
    let (inv, rcond) = invert_block(&t22, Block::T22)?;
    let y = logm(&t22.transpose()).ok().map(|l| l.scale_real(-1.0));
    Ok(FactoredGaussian {
        sites: t.sites(),
        ordering: Ordering::Normal,
        x: &t12 * &inv,
        z: &inv * &t21,
        exp_y: inv.transpose(),
        y,
        prefactor: root_det_principal(&t22),
        rcond,
    })
}

/// Antinormal form: `X = T21 T11^-1`, `Z = T11^-1 T12`, `e^Y = T11`, prefactor `det(T11)^{-1/2}`.
pub fn bbd_antinormal(t: &TransferMatrix) -> Result<FactoredGaussian> {
    let [t11, t12, t21, _] = t.blocks();
    let (inv, rcond) = invert_block(&t11, Block::T11)?;
    let y = logm(&t11).ok();
    Ok(FactoredGaussian {
        sites: t.sites(),
        ordering: Ordering::Antinormal,
        x: &t21 * &inv,
        z: &inv * &t12,
        exp_y: t11.clone(),
        y,
        prefactor: root_det_principal(&t11).map(|v| v.inv()),
        rcond,
    })
}

/// [`bbd_normal`] of the path's transfer matrix with the prefactor sign fixed by continuation.
pub fn bbd_normal_along(path: &GeneratorPath) -> Result<FactoredGaussian> {
    let mut f = bbd_normal(&path.transfer()?)?;
    let l = path.sites();
    if let Some(v) = root_det_continued(path, &|t| t.submatrix(l, l, l, l)) {
        f.prefactor = Prefactor { value: v, rule: PrefactorRule::Continuation };
    }
    Ok(f)
}

pub fn bbd_antinormal_along(path: &GeneratorPath) -> Result<FactoredGaussian> {
    let mut f = bbd_antinormal(&path.transfer()?)?;
    let l = path.sites();
    if let Some(v) = root_det_continued(path, &|t| t.submatrix(0, 0, l, l)) {
        f.prefactor = Prefactor { value: v.inv(), rule: PrefactorRule::Continuation };
    }
    Ok(f)
}
