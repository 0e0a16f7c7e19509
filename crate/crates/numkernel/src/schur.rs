use num_traits::{Float, Zero};

use crate::matrix::{ComplexMatrix, C64};
use crate::LinalgError;

/// Complex Schur form `A = Q T Q^H` with `T` upper triangular and `Q` unitary.
#[derive(Clone, Debug)]
pub struct Schur {
    pub q: ComplexMatrix,
    pub t: ComplexMatrix,
}

impl Schur {
    pub fn eigenvalues(&self) -> alloc::vec::Vec<C64> {
        (0..self.t.rows()).map(|i| self.t[(i, i)]).collect()
    }
}

pub fn schur(a: &ComplexMatrix) -> Result<Schur, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    if !a.is_finite() {
        return Err(LinalgError::NonFinite);
    }
    let n = a.rows();
    let (mut h, mut q) = hessenberg(a);
    if n < 2 {
        return Ok(Schur { q, t: h });
    }
    let scale = h.max_abs().max(f64::MIN_POSITIVE);
    let eps = f64::EPSILON;
    let mut hi = n - 1;
    let mut iters = 0usize;
    let mut total = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let s = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let s = if s == 0.0 { scale } else { s };
            if h[(l, l - 1)].norm() <= eps * s {
                h[(l, l - 1)] = C64::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iters = 0;
            continue;
        }
        iters += 1;
        total += 1;
        if total > 100 * n {
            return Err(LinalgError::NoConvergence);
        }
        let mu = if iters % 11 == 10 {
            // exceptional shift to break cycles
            h[(hi, hi)] + C64::new(h[(hi, hi - 1)].norm(), 0.0)
        } else {
            wilkinson(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(&mut h, &mut q, l, hi, mu);
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = C64::zero();
        }
    }
    Ok(Schur { q, t: h })
}

fn wilkinson(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let m1 = (a + d) * 0.5 + disc;
    let m2 = (a + d) * 0.5 - disc;
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

// Givens rotation G = [[c*, s*], [-s, c]] with G (x, y)^T = (r, 0)^T.
fn givens(x: C64, y: C64) -> (C64, C64) {
    let r = Float::hypot(x.norm(), y.norm());
    if r == 0.0 {
        return (C64::new(1.0, 0.0), C64::zero());
    }
    (x / r, y / r)
}

fn qr_sweep(h: &mut ComplexMatrix, q: &mut ComplexMatrix, l: usize, hi: usize, mu: C64) {
    let n = h.rows();
    for k in l..=hi {
        h[(k, k)] -= mu;
    }
    let mut rots = alloc::vec::Vec::with_capacity(hi - l);
    for k in l..hi {
        let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
        for j in k..n {
            let x = h[(k, j)];
            let y = h[(k + 1, j)];
            h[(k, j)] = c.conj() * x + s.conj() * y;
            h[(k + 1, j)] = -s * x + c * y;
        }
        rots.push((c, s));
    }
    for (idx, &(c, s)) in rots.iter().enumerate() {
        let k = l + idx;
        let top = (k + 2).min(hi + 1);
        for i in 0..top {
            let x = h[(i, k)];
            let y = h[(i, k + 1)];
            h[(i, k)] = x * c + y * s;
            h[(i, k + 1)] = -x * s.conj() + y * c.conj();
        }
        for i in 0..n {
            let x = q[(i, k)];
            let y = q[(i, k + 1)];
            q[(i, k)] = x * c + y * s;
            q[(i, k + 1)] = -x * s.conj() + y * c.conj();
        }
    }
    for k in l..=hi {
        h[(k, k)] += mu;
    }
}

/// Householder reduction to upper Hessenberg form, `A = Q H Q^H`.
fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    if n < 3 {
        return (h, q);
    }
    let mut v = alloc::vec![C64::zero(); n];
    for k in 0..n - 2 {
        let norm_x = Float::sqrt((k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>());
        if norm_x == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase = if x0.norm() == 0.0 { C64::new(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm_x;
        v.fill(C64::zero());
        for i in k + 1..n {
            v[i] = h[(i, k)];
        }
        v[k + 1] -= alpha;
        let vnorm2: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        let beta = 2.0 / vnorm2;
        // H <- (I - beta v v^H) H
        for j in 0..n {
            let mut s = C64::zero();
            for i in k + 1..n {
                s += v[i].conj() * h[(i, j)];
            }
            s *= beta;
            for i in k + 1..n {
                h[(i, j)] -= v[i] * s;
            }
        }
        // H <- H (I - beta v v^H), Q likewise
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let mut s = C64::zero();
                for j in k + 1..n {
                    s += m[(i, j)] * v[j];
                }
                s *= beta;
                for j in k + 1..n {
                    m[(i, j)] -= s * v[j].conj();
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = C64::zero();
        }
    }
    (h, q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn check(a: &ComplexMatrix) {
        let s = schur(a).unwrap();
        let n = a.rows();
        let qh = s.q.adjoint();
        assert!((&qh * &s.q).max_diff(&ComplexMatrix::identity(n)) < 1e-12);
        let back = &(&s.q * &s.t) * &qh;
        assert!(back.max_diff(a) < 1e-12 * a.max_abs().max(1.0));
        for i in 0..n {
            for j in 0..i {
                assert_eq!(s.t[(i, j)], C64::zero());
            }
        }
    }

    #[test]
    fn random_complex() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in [1usize, 2, 3, 5, 8, 12] {
            let a = ComplexMatrix::from_fn(n, n, |_, _| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            check(&a);
        }
    }

    #[test]
    fn real_rotation_and_defective() {
        check(&ComplexMatrix::from_real_rows(&[&[0.0, -1.0], &[1.0, 0.0]]));
        check(&ComplexMatrix::from_real_rows(&[&[2.0, 1.0, 0.0], &[0.0, 2.0, 1.0], &[0.0, 0.0, 2.0]]));
        check(&ComplexMatrix::from_real_rows(&[&[0.0, 0.0, 0.0, 1.0], &[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0]]));
        check(&ComplexMatrix::identity(4));
    }
}
