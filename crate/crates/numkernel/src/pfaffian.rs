use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::matrix::{ComplexMatrix, C64};
use crate::{LinalgError, SKEW_TOL};

/// A square matrix certified antisymmetric within [`SKEW_TOL`] (relative to its largest entry).
#[derive(Clone, Debug, PartialEq)]
pub struct SkewMatrix(ComplexMatrix);

impl SkewMatrix {
    pub fn new(a: ComplexMatrix) -> Result<Self, LinalgError> {
        Self::with_tolerance(a, SKEW_TOL)
    }

    pub fn with_tolerance(a: ComplexMatrix, tol: f64) -> Result<Self, LinalgError> {
        if !a.is_square() {
            return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let dev = skew_deviation(&a);
        if dev > tol * a.max_abs() {
            return Err(LinalgError::NotSkew { deviation: dev });
        }
        Ok(Self(a))
    }

    /// Antisymmetric part `(A - A^T)/2`, always valid.
    pub fn antisymmetrize(a: &ComplexMatrix) -> Self {
        assert!(a.is_square(), "antisymmetrize needs a square matrix");
        let n = a.rows();
        Self(ComplexMatrix::from_fn(n, n, |i, j| (a[(i, j)] - a[(j, i)]) * 0.5))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_inner(self) -> ComplexMatrix {
        self.0
    }

    /// Principal submatrix on `keep`, in the given order; antisymmetry is inherited.
    pub fn principal(&self, keep: &[usize]) -> Self {
        Self(self.0.select(keep, keep))
    }

    /// Principal submatrix with the listed indices deleted.
    pub fn without(&self, remove: &[usize]) -> Self {
        let keep: Vec<usize> = (0..self.dim()).filter(|i| !remove.contains(i)).collect();
        self.principal(&keep)
    }

    pub fn pfaffian(&self) -> C64 {
        pfaffian_unchecked(&self.0)
    }
}

/// `max |A + A^T|`.
pub fn skew_deviation(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in i..n {
            dev = dev.max((a[(i, j)] + a[(j, i)]).norm());
        }
    }
    dev
}

/// Pfaffian of a validated antisymmetric matrix.
pub fn pfaffian(a: &SkewMatrix) -> C64 {
    a.pfaffian()
}

/// Validates antisymmetry, then returns the Pfaffian.
pub fn pfaffian_checked(a: &ComplexMatrix) -> Result<C64, LinalgError> {
    Ok(SkewMatrix::new(a.clone())?.pfaffian())
}

// Parlett-Reid elimination with row/column pivoting. Interchanges flip a boolean,
// never a floating sign.
fn pfaffian_unchecked(a: &ComplexMatrix) -> C64 {
    let n = a.rows();
    if n == 0 {
        return C64::one();
    }
    if n % 2 == 1 {
        return C64::zero();
    }
    let mut w = a.clone();
    let mut negate = false;
    let mut val = C64::one();
    let mut k = 0;
    while k + 1 < n {
        let mut kp = k + 1;
        let mut best = w[(k + 1, k)].norm();
        for i in k + 2..n {
            let v = w[(i, k)].norm();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            for j in 0..n {
                let t = w[(k + 1, j)];
                w[(k + 1, j)] = w[(kp, j)];
                w[(kp, j)] = t;
            }
            for i in 0..n {
                let t = w[(i, k + 1)];
                w[(i, k + 1)] = w[(i, kp)];
                w[(i, kp)] = t;
            }
            negate = !negate;
        }
        let piv = w[(k, k + 1)];
        if piv.is_zero() {
            return C64::zero();
        }
        val *= piv;
        if k + 2 < n {
            let tau: Vec<C64> = (k + 2..n).map(|j| w[(k, j)] / piv).collect();
            let col: Vec<C64> = (k + 2..n).map(|i| w[(i, k + 1)]).collect();
            for (ii, i) in (k + 2..n).enumerate() {
                for (jj, j) in (k + 2..n).enumerate() {
                    w[(i, j)] += tau[ii] * col[jj] - col[ii] * tau[jj];
                }
            }
        }
        k += 2;
    }
    if negate {
        -val
    } else {
        val
    }
}
