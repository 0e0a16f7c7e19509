use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::matrix::{ComplexMatrix, C64};
use crate::LinalgError;

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu {
    lu: ComplexMatrix,
    perm: Vec<usize>,
    odd_swaps: bool,
    norm_one: f64,
}

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let n = a.rows();
        let norm_one = a.norm_one();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut odd_swaps = false;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                perm.swap(k, p);
                odd_swaps = !odd_swaps;
            }
            let piv = lu[(k, k)];
            if piv.is_zero() {
                continue;
            }
            for i in k + 1..n {
                let f = lu[(i, k)] / piv;
                lu[(i, k)] = f;
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..n {
                    let u = lu[(k, j)];
                    lu[(i, j)] -= f * u;
                }
            }
        }
        Ok(Self { lu, perm, odd_swaps, norm_one })
    }

    pub fn dim(&self) -> usize {
        self.lu.rows()
    }

    pub fn det(&self) -> C64 {
        let mut d = C64::one();
        for i in 0..self.dim() {
            d *= self.lu[(i, i)];
        }
        if self.odd_swaps {
            -d
        } else {
            d
        }
    }

    pub fn is_singular(&self) -> bool {
        (0..self.dim()).any(|i| self.lu[(i, i)].is_zero())
    }

    /// Solves `A x = b` for every column of `b`.
    pub fn solve(&self, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
        let n = self.dim();
        if b.rows() != n {
            return Err(LinalgError::DimensionMismatch { expected: (n, b.cols()), found: (b.rows(), b.cols()) });
        }
        if self.is_singular() {
            return Err(LinalgError::Singular { rcond: 0.0 });
        }
        let m = b.cols();
        let mut x = ComplexMatrix::from_fn(n, m, |i, j| b[(self.perm[i], j)]);
        for c in 0..m {
            for i in 0..n {
                let mut s = x[(i, c)];
                for k in 0..i {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, c)];
                for k in i + 1..n {
                    s -= self.lu[(i, k)] * x[(k, c)];
                }
                x[(i, c)] = s / self.lu[(i, i)];
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<ComplexMatrix, LinalgError> {
        self.solve(&ComplexMatrix::identity(self.dim()))
    }

    /// Reciprocal 1-norm condition number, computed from the explicit inverse.
    pub fn rcond(&self) -> f64 {
        if self.dim() == 0 {
            return 1.0;
        }
        if self.norm_one == 0.0 {
            return 0.0;
        }
        match self.inverse() {
            Ok(inv) if inv.is_finite() => {
                let r = 1.0 / (self.norm_one * inv.norm_one());
                if r.is_finite() {
                    r
                } else {
                    0.0
                }
            }
            _ => 0.0,
        }
    }
}

pub fn det(a: &ComplexMatrix) -> Result<C64, LinalgError> {
    Ok(Lu::new(a)?.det())
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    Lu::new(a)?.inverse()
}

pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    Lu::new(a)?.solve(b)
}

pub fn rcond(a: &ComplexMatrix) -> Result<f64, LinalgError> {
    Ok(Lu::new(a)?.rcond())
}

/// Inverse of `a` together with its reciprocal condition number; fails when the
/// condition estimate drops below `tol`.
pub fn inverse_conditioned(a: &ComplexMatrix, tol: f64) -> Result<(ComplexMatrix, f64), LinalgError> {
    let lu = Lu::new(a)?;
    if lu.is_singular() {
        return Err(LinalgError::Singular { rcond: 0.0 });
    }
    let inv = lu.inverse()?;
    let rc = if a.rows() == 0 { 1.0 } else { 1.0 / (a.norm_one() * inv.norm_one()) };
    let rc = if rc.is_finite() { rc } else { 0.0 };
    if rc < tol || !inv.is_finite() {
        return Err(LinalgError::Singular { rcond: rc });
    }
    Ok((inv, rc))
}
