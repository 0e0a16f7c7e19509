use alloc::vec::Vec;

use fermigauss_numkernel::{ComplexMatrix, C64};

use super::linear::LinearGaussianOp;
use crate::error::{Error, Result};
use crate::gaussianops::QuadraticGenerator;

/// Relative tolerance on the repeated entries of an embedded transfer matrix.
pub const EMBEDDING_TOL: f64 = 1e-10;

/// Quadratic generator on `L + 1` sites, the ancilla being site 0, whose projection onto
/// the symmetric ancilla combination reproduces a [`LinearGaussianOp`].
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedGenerator {
    sites: usize,
    generator: QuadraticGenerator,
}

impl EmbeddedGenerator {
    /// Site count of the original operator.
    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn generator(&self) -> &QuadraticGenerator {
        &self.generator
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.generator.matrix()
    }
}

/// Replaces `c_j -> (c_0^dag - c_0) c_j`. Rows `(c_0^dag, c^dag, c_0, c)`:
/// `(0, v^T, 0, u^dag)`, `(u*, M11, -u*, M12)`, `(0, -v^T, 0, -u^dag)`, `(v, M21, -v, M22)`.
pub fn embed(op: &LinearGaussianOp) -> EmbeddedGenerator {
    let l = op.sites();
    let n = l + 1;
    let m = op.generator().matrix();
    let (u, v) = (op.u(), op.v());
    let mut mp = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..2 * l {
        for j in 0..2 * l {
            let (ri, cj) = (lift(i, l), lift(j, l));
            mp[(ri, cj)] = m[(i, j)];
        }
    }
    for k in 0..l {
        mp[(0, 1 + k)] = v[k];
        mp[(0, n + 1 + k)] = u[k].conj();
        mp[(n, 1 + k)] = -v[k];
        mp[(n, n + 1 + k)] = -u[k].conj();
        mp[(1 + k, 0)] = u[k].conj();
        mp[(1 + k, n)] = -u[k].conj();
        mp[(n + 1 + k, 0)] = v[k];
        mp[(n + 1 + k, n)] = -v[k];
    }
    EmbeddedGenerator { sites: l, generator: QuadraticGenerator::from_trusted(mp) }
}

/// Index `i` of a `2L` layout mapped into the `2(L + 1)` embedded layout.
pub(crate) fn lift(i: usize, l: usize) -> usize {
    if i < l {
        i + 1
    } else {
        i + 2
    }
}

/// Blocks of `T' = e^{M'}`: corners `1 + t11, -t11, -t11, 1 + t11`, borders repeating
/// `t1 .. t4` with alternating signs, and the inner `2L x 2L` transfer.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddedTransfer {
    pub sites: usize,
    pub t11: C64,
    /// `T'[0, 1..=L]`.
    pub t1: Vec<C64>,
    /// `T'[0, L+2..]`.
    pub t2: Vec<C64>,
    /// `T'[1..=L, 0]`.
    pub t3: Vec<C64>,
    /// `T'[L+2.., 0]`.
    pub t4: Vec<C64>,
    pub inner: ComplexMatrix,
    /// Largest disagreement among the redundant occurrences.
    pub deviation: f64,
}

impl EmbeddedTransfer {
    /// Averages the redundant entries of `T'` and checks their agreement to
    /// `1e-10 max(1, |T'|)`.
    pub fn extract(tp: &ComplexMatrix) -> Result<Self> {
        if !tp.is_square() || tp.rows() % 2 != 0 || tp.rows() < 2 {
            return Err(Error::SiteMismatch { expected: tp.rows() / 2, found: tp.cols() / 2 });
        }
        let n = tp.rows() / 2;
        let l = n - 1;
        let one = C64::new(1.0, 0.0);
        let mut dev = 0.0f64;
        let mut avg = |xs: &[C64]| {
            let mean = xs.iter().sum::<C64>() / xs.len() as f64;
            for x in xs {
                dev = dev.max((x - mean).norm());
            }
            mean
        };
        let t11 = avg(&[tp[(0, 0)] - one, -tp[(0, n)], -tp[(n, 0)], tp[(n, n)] - one]);
        let t1 = (0..l).map(|k| avg(&[tp[(0, 1 + k)], -tp[(n, 1 + k)]])).collect();
        let t2 = (0..l).map(|k| avg(&[tp[(0, n + 1 + k)], -tp[(n, n + 1 + k)]])).collect();
        let t3 = (0..l).map(|k| avg(&[tp[(1 + k, 0)], -tp[(1 + k, n)]])).collect();
        let t4 = (0..l).map(|k| avg(&[tp[(n + 1 + k, 0)], -tp[(n + 1 + k, n)]])).collect();
        let inner = ComplexMatrix::from_fn(2 * l, 2 * l, |i, j| tp[(lift(i, l), lift(j, l))]);
        if dev > EMBEDDING_TOL * tp.max_abs().max(1.0) {
            return Err(Error::EmbeddingStructure { deviation: dev });
        }
        Ok(Self { sites: l, t11, t1, t2, t3, t4, inner, deviation: dev })
    }

    pub fn t22(&self) -> ComplexMatrix {
        let l = self.sites;
        self.inner.submatrix(l, l, l, l)
    }
}
