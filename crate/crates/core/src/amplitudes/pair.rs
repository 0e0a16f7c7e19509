use alloc::vec::Vec;

use fermigauss_numkernel::{det, ComplexMatrix, SkewMatrix, C64, SKEW_TOL};

use crate::config::FockConfig;
use crate::error::{Error, Result};

fn checked(r: &ComplexMatrix, u: &[C64]) -> Result<SkewMatrix> {
    if !r.is_square() || r.rows() != u.len() {
        return Err(Error::SiteMismatch { expected: u.len(), found: r.rows() });
    }
    Ok(SkewMatrix::with_tolerance(r.clone(), SKEW_TOL)?)
}

/// `<J|psi>` for `|psi> = exp(1/2 c^dag R c^dag + u^dag c^dag)|0>`: `pf R` restricted to `J_1`
/// for even `|J|`, else `pf [[R, u*], [-u^dag, 0]]` restricted to `J_1` plus the border.
pub fn pair_state_amplitude(r: &ComplexMatrix, u: &[C64], bra: &FockConfig) -> Result<C64> {
    let r = checked(r, u)?;
    let l = u.len();
    if bra.sites() != l {
        return Err(Error::SiteMismatch { expected: l, found: bra.sites() });
    }
    let keep = bra.occupied();
    if !bra.is_odd() {
        return Ok(r.principal(&keep).pfaffian());
    }
    let mut b = ComplexMatrix::zeros(l + 1, l + 1);
    b.set_submatrix(0, 0, r.matrix());
    for (k, uk) in u.iter().enumerate() {
        b[(k, l)] = uk.conj();
        b[(l, k)] = -uk.conj();
    }
    let mut keep_b: Vec<usize> = keep;
    keep_b.push(l);
    Ok(SkewMatrix::antisymmetrize(&b.select(&keep_b, &keep_b)).pfaffian())
}

/// `<psi|psi>^2 = det[(1 + s)(I + u u^dag) + R^dag ((1 + s) I - u* u^T) R] / (1 + s)^{L-1}`
/// with `s = u^dag u`.
pub fn pair_state_norm_squared(r: &ComplexMatrix, u: &[C64]) -> Result<f64> {
    let r = checked(r, u)?.into_inner();
    let l = u.len();
    let s: f64 = u.iter().map(|z| z.norm_sqr()).sum();
    let k = 1.0 + s;
    let uu = ComplexMatrix::from_fn(l, l, |i, j| u[i] * u[j].conj());
    let cu = ComplexMatrix::from_fn(l, l, |i, j| u[i].conj() * u[j]);
    let left = (&ComplexMatrix::identity(l) + &uu).scale_real(k);
    let mid = &ComplexMatrix::identity(l).scale_real(k) - &cu;
    let m = &left + &(&(&r.adjoint() * &mid) * &r);
    let d = det(&m)? / k.powi(l as i32 - 1);
    if d.re <= 0.0 || d.im.abs() > 1e-8 * d.re {
        return Err(Error::NumericalFailure("pair-state norm determinant is not positive"));
    }
    Ok(d.re)
}

/// `<psi|psi>`.
pub fn pair_state_norm(r: &ComplexMatrix, u: &[C64]) -> Result<f64> {
    Ok(pair_state_norm_squared(r, u)?.sqrt())
}
