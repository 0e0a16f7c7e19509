use alloc::vec::Vec;

use fermigauss_numkernel::{logm, ComplexMatrix, C64};

use super::embed::{embed, EmbeddedTransfer};
use super::linear::LinearGaussianOp;
use crate::error::Result;
use crate::gaussianops::{antisym, invert_block, root_det_continued, root_det_principal, Block, GeneratorPath, Prefactor, PrefactorRule};

/// `prefactor * e^{q^dag c^dag} e^{1/2 c^dag X c^dag} e^{c^dag Y c} e^{1/2 c Z c} e^{p^T c}`.
#[derive(Clone, Debug)]
pub struct GeneralizedFactored {
    pub(crate) sites: usize,
    pub(crate) q: Vec<C64>,
    pub(crate) x: ComplexMatrix,
    pub(crate) exp_y: ComplexMatrix,
    pub(crate) y: Option<ComplexMatrix>,
    pub(crate) z: ComplexMatrix,
    pub(crate) p: Vec<C64>,
    pub(crate) prefactor: Prefactor,
    pub(crate) rcond: f64,
}

impl GeneralizedFactored {
    pub fn sites(&self) -> usize {
        self.sites
    }

    /// The creation factor is `exp(sum_j conj(q_j) c_j^dag)`.
    pub fn q(&self) -> &[C64] {
        &self.q
    }

    pub fn x(&self) -> &ComplexMatrix {
        &self.x
    }

    pub fn exp_y(&self) -> &ComplexMatrix {
        &self.exp_y
    }

    pub fn y(&self) -> Option<&ComplexMatrix> {
        self.y.as_ref()
    }

    pub fn z(&self) -> &ComplexMatrix {
        &self.z
    }

    pub fn x_antisymmetric(&self) -> ComplexMatrix {
        antisym(&self.x)
    }

    pub fn z_antisymmetric(&self) -> ComplexMatrix {
        antisym(&self.z)
    }

    /// The annihilation factor is `exp(sum_j p_j c_j)`.
    pub fn p(&self) -> &[C64] {
        &self.p
    }

    pub fn prefactor(&self) -> Prefactor {
        self.prefactor
    }

    pub fn rcond(&self) -> f64 {
        self.rcond
    }
}

/// Five-factor decomposition from the embedded transfer matrix:
/// `e^{-Y^T} = T22`, `p = T22^-1 t4`, `q = conj(T22^-T t2)`, `Z = T22^-1 T21 - p p^T`,
/// `X = T12 T22^-1 - q* q^dag`, prefactor `det(T22)^{1/2}` continued along `z M'`.
pub fn generalized_bbd(op: &LinearGaussianOp) -> Result<GeneralizedFactored> {
    let path = GeneratorPath::single(embed(op).generator());
    generalized_bbd_along(&path)
}

pub(crate) fn generalized_bbd_along(path: &GeneratorPath) -> Result<GeneralizedFactored> {
    let tp = path.transfer()?;
    let e = EmbeddedTransfer::extract(tp.matrix())?;
    let l = e.sites;
    let [_, t12, t21, t22] = e.inner.split_blocks();
    let (inv, rcond) = invert_block(&t22, Block::T22)?;
    let p = inv.mul_vec(&e.t4);
    let q: Vec<C64> = inv.transpose().mul_vec(&e.t2).iter().map(|z| z.conj()).collect();
    let outer = |a: &[C64]| ComplexMatrix::from_fn(l, l, |i, j| a[i] * a[j]);
    let qc: Vec<C64> = q.iter().map(|z| z.conj()).collect();
    let z = &(&inv * &t21) - &outer(&p);
    let x = &(&t12 * &inv) - &outer(&qc);
    let y = logm(&t22.transpose()).ok().map(|m| m.scale_real(-1.0));
    let n = l + 1;
    let prefactor = match root_det_continued(path, &|t| t.select(&inner_c(n), &inner_c(n))) {
        Some(v) => Prefactor { value: v, rule: PrefactorRule::Continuation },
        None => root_det_principal(&t22),
    };
    Ok(GeneralizedFactored { sites: l, q, x, exp_y: inv.transpose(), y, z, p, prefactor, rcond })
}

/// Indices of the non-ancilla annihilation rows in a `2n` layout.
fn inner_c(n: usize) -> Vec<usize> {
    (n + 1..2 * n).collect()
}
