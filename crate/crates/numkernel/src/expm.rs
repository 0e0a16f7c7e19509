use num_traits::Float;

use crate::lu;
use crate::matrix::{ComplexMatrix, C64};
use crate::LinalgError;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0];
const B9: [f64; 10] = [17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0, 2162160.0, 110880.0, 3960.0, 90.0, 1.0];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
#[allow(clippy::excessive_precision)]
const THETA: [f64; 5] = [1.495585217958292e-2, 2.539398330063230e-1, 9.504178996162932e-1, 2.097847961257068e0, 5.371920351148152e0];

/// Matrix exponential by scaling and squaring with Pade approximants (degree 3..13).
pub fn expm(a: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = a.rows();
    let id = ComplexMatrix::identity(n);
    let norm = a.norm_one();
    if norm == 0.0 {
        return Ok(id);
    }
    for (m, coeffs) in [(0usize, &B3[..]), (1, &B5[..]), (2, &B7[..]), (3, &B9[..])] {
        if norm <= THETA[m] {
            let (u, v) = pade_low(a, coeffs, &id);
            return finish(&u, &v, 0);
        }
    }
    let s = Float::max(Float::ceil(Float::log2(norm / THETA[4])), 0.0) as i32;
    let a = a.scale_real(Float::powi(2.0, -s));
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;
    let b = |k: usize| C64::new(B13[k], 0.0);
    let inner_u = &(&a6.scale(b(13)) + &a4.scale(b(11))) + &a2.scale(b(9));
    let mut u = &a6 * &inner_u;
    u = &u + &a6.scale(b(7));
    u = &u + &a4.scale(b(5));
    u = &u + &a2.scale(b(3));
    u = &u + &id.scale(b(1));
    let u = &a * &u;
    let inner_v = &(&a6.scale(b(12)) + &a4.scale(b(10))) + &a2.scale(b(8));
    let mut v = &a6 * &inner_v;
    v = &v + &a6.scale(b(6));
    v = &v + &a4.scale(b(4));
    v = &v + &a2.scale(b(2));
    v = &v + &id.scale(b(0));
    finish(&u, &v, s)
}

fn pade_low(a: &ComplexMatrix, coeffs: &[f64], id: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let a2 = a * a;
    let mut pow = id.clone();
    let mut u = ComplexMatrix::zeros(a.rows(), a.rows());
    let mut v = ComplexMatrix::zeros(a.rows(), a.rows());
    for k in (0..coeffs.len()).step_by(2) {
        v = &v + &pow.scale_real(coeffs[k]);
        u = &u + &pow.scale_real(coeffs[k + 1]);
        pow = &pow * &a2;
    }
    (a * &u, v)
}

fn finish(u: &ComplexMatrix, v: &ComplexMatrix, squarings: i32) -> Result<ComplexMatrix, LinalgError> {
    let mut r = lu::solve(&(v - u), &(v + u))?;
    for _ in 0..squarings {
        r = &r * &r;
    }
    if !r.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    Ok(r)
}
