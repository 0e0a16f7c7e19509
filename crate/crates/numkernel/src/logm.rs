use num_traits::{Float, Zero};

use crate::matrix::{ComplexMatrix, C64};
use crate::schur::schur;
use crate::LinalgError;

/// Principal matrix logarithm via complex Schur form and inverse scaling and squaring.
///
/// Fails with [`LinalgError::BranchCut`] when an eigenvalue lies on the closed negative
/// real axis, and with [`LinalgError::Singular`] for a zero eigenvalue.
pub fn logm(a: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let s = schur(a)?;
    let n = a.rows();
    let scale = a.max_abs();
    for lam in s.eigenvalues() {
        if lam.norm() <= 1e-14 * scale || lam.norm() == 0.0 {
            return Err(LinalgError::Singular { rcond: 0.0 });
        }
        if lam.re < 0.0 && lam.im.abs() <= 1e-14 * lam.norm() {
            return Err(LinalgError::BranchCut);
        }
    }
    let id = ComplexMatrix::identity(n);
    let mut r = s.t.clone();
    let mut k = 0i32;
    while (&r - &id).norm_one() > 0.25 {
        if k >= 100 {
            return Err(LinalgError::NoConvergence);
        }
        r = sqrt_upper(&r);
        k += 1;
    }
    let log_r = log_near_identity(&r)?.scale_real(Float::powi(2.0, k));
    let out = &(&s.q * &log_r) * &s.q.adjoint();
    if !out.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    Ok(out)
}

/// Principal square root of an upper triangular matrix.
fn sqrt_upper(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.rows();
    let mut u = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        u[(i, i)] = t[(i, i)].sqrt();
    }
    for d in 1..n {
        for i in 0..n - d {
            let j = i + d;
            let mut s = t[(i, j)];
            for m in i + 1..j {
                s -= u[(i, m)] * u[(m, j)];
            }
            let den = u[(i, i)] + u[(j, j)];
            u[(i, j)] = if den.is_zero() { C64::zero() } else { s / den };
        }
    }
    u
}

// log(R) = 2 atanh(Z), Z = (R - I)(R + I)^{-1}, for R close to the identity.
fn log_near_identity(r: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    let n = r.rows();
    let id = ComplexMatrix::identity(n);
    let num = r - &id;
    let den = r + &id;
    // Z solves Z (R + I) = (R - I); the two factors commute.
    let z = crate::lu::solve(&den, &num)?;
    let z2 = &z * &z;
    let mut term = z.clone();
    let mut sum = z;
    for j in 1..200 {
        term = &term * &z2;
        let add = term.scale_real(1.0 / (2 * j + 1) as f64);
        sum = &sum + &add;
        if add.max_abs() <= f64::EPSILON * 1e-2 * sum.max_abs().max(1e-300) {
            break;
        }
    }
    Ok(sum.scale_real(2.0))
}
