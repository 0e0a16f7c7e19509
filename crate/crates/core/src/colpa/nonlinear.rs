use alloc::vec::Vec;

use fermigauss_numkernel::{expm, ComplexMatrix, C64};

use super::embed::{embed, EmbeddedTransfer};
use super::linear::LinearGaussianOp;
use crate::error::Result;

/// Image of the modes under conjugation by an operator with linear parts:
/// `F^-1 s_mu F = (Tp s)_mu + 1/2 r^T B^mu s + shift_mu`, with `s = (c; c^dag)` and
/// `r = (c^dag, c)`. Quadratic coefficients are `B^mu_{ab} = -4 w_a T_{mu b}` where
/// `w = (t2; t1)`, i.e. the quadratic part is `-2 (t1.c + t2.c^dag) (T s)_mu`.
#[derive(Clone, Debug)]
pub struct NonlinearTransform {
    pub sites: usize,
    pub tp: ComplexMatrix,
    /// `B^mu` for `c_mu`, `mu = 0..L`.
    pub b: Vec<ComplexMatrix>,
    /// `B^mu` for `c_mu^dag`.
    pub b_bar: Vec<ComplexMatrix>,
    pub shift: Vec<C64>,
    pub blocks: EmbeddedTransfer,
}

impl NonlinearTransform {
    /// Quadratic coefficients for position `mu` of `s = (c; c^dag)`.
    pub fn quadratic(&self, mu: usize) -> &ComplexMatrix {
        if mu < self.sites {
            &self.b[mu]
        } else {
            &self.b_bar[mu - self.sites]
        }
    }
}

pub fn conjugate_modes(op: &LinearGaussianOp) -> Result<NonlinearTransform> {
    let e = EmbeddedTransfer::extract(&expm(embed(op).matrix())?)?;
    Ok(from_blocks(e))
}

pub(crate) fn from_blocks(e: EmbeddedTransfer) -> NonlinearTransform {
    let l = e.sites;
    let t = &e.inner;
    let one = C64::new(1.0, 0.0);
    let k = one + e.t11 * 2.0;
    let col: Vec<C64> = e.t3.iter().chain(&e.t4).copied().collect();
    let row: Vec<C64> = e.t1.iter().chain(&e.t2).copied().collect();
    let tp = ComplexMatrix::from_fn(2 * l, 2 * l, |i, j| t[(i, j)] * k - col[i] * row[j] * 2.0);
    let w: Vec<C64> = e.t2.iter().chain(&e.t1).copied().collect();
    let tensor = |mu: usize| ComplexMatrix::from_fn(2 * l, 2 * l, |a, b| w[a] * t[(mu, b)] * -4.0);
    let b = (0..l).map(tensor).collect();
    let b_bar = (l..2 * l).map(tensor).collect();
    let shift = col.iter().map(|z| z * k).collect();
    NonlinearTransform { sites: l, tp, b, b_bar, shift, blocks: e }
}
