use fermigauss_numkernel::{skew_deviation, ComplexMatrix, C64, SKEW_TOL};
use rand::Rng;

use crate::error::{Error, Result};

/// `J = [[0, I], [I, 0]]` of size `2L`.
pub fn j_matrix(sites: usize) -> ComplexMatrix {
    let n = 2 * sites;
    ComplexMatrix::from_fn(n, n, |i, j| if (i + sites) % n == j && sites > 0 { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
}

/// `J M`, i.e. `M` with its two block rows exchanged.
pub(crate) fn j_times(m: &ComplexMatrix) -> ComplexMatrix {
    let l = m.rows() / 2;
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| m[((i + l) % m.rows(), j)])
}

/// Generator `M` of `F_M = exp(1/2 (c^dag, c) M (c, c^dag)^T)`.
///
/// Rows are indexed by `(c^dag, c)`, columns by `(c, c^dag)`; `J M` must be antisymmetric.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadraticGenerator {
    sites: usize,
    m: ComplexMatrix,
}

impl QuadraticGenerator {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() || m.rows() % 2 != 0 {
            return Err(Error::SiteMismatch { expected: m.rows() / 2, found: m.cols() / 2 });
        }
        let deviation = skew_deviation(&j_times(&m));
        if deviation > SKEW_TOL * m.max_abs().max(1.0) {
            return Err(Error::InvalidGenerator { deviation });
        }
        Ok(Self { sites: m.rows() / 2, m })
    }

    pub fn zero(sites: usize) -> Self {
        Self { sites, m: ComplexMatrix::zeros(2 * sites, 2 * sites) }
    }

    /// `M = J A` with `A` a random complex antisymmetric matrix, entries of size `scale`.
    pub fn random<R: Rng + ?Sized>(sites: usize, rng: &mut R, scale: f64) -> Self {
        let n = 2 * sites;
        let mut a = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let z = C64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale));
                a[(i, j)] = z;
                a[(j, i)] = -z;
            }
        }
        Self { sites, m: j_times(&a) }
    }

    /// Block form `M = [[A, B], [C, -A^T]]` from the three independent blocks (`B`, `C`
    /// antisymmetric) of `c^dag A c + 1/2 c^dag B c^dag + 1/2 c C c` up to a constant.
    pub fn from_blocks(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix) -> Result<Self> {
        Self::new(ComplexMatrix::from_blocks(a, b, c, &a.transpose().scale_real(-1.0)))
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.m
    }

    /// Generator of `F_M^dag`, which is `F_{M^dag}`.
    pub fn adjoint(&self) -> Self {
        Self { sites: self.sites, m: self.m.adjoint() }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { sites: self.sites, m: self.m.scale_real(s) }
    }

    /// `M + eps G`.
    pub fn perturbed(&self, eps: f64, g: &QuadraticGenerator) -> Result<Self> {
        if g.sites != self.sites {
            return Err(Error::SiteMismatch { expected: self.sites, found: g.sites });
        }
        Ok(Self { sites: self.sites, m: &self.m + &g.m.scale_real(eps) })
    }

    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        Self { sites: m.rows() / 2, m }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn j_squares_to_identity() {
        let j = j_matrix(3);
        assert_eq!(&j * &j, ComplexMatrix::identity(6));
        assert_eq!(j_times(&ComplexMatrix::identity(6)), j);
    }

    #[test]
    fn random_generators_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for sites in 1..5 {
            let g = QuadraticGenerator::random(sites, &mut rng, 1.0);
            assert!(QuadraticGenerator::new(g.matrix().clone()).is_ok());
            assert!(QuadraticGenerator::new(g.adjoint().matrix().clone()).is_ok());
        }
    }

    #[test]
    fn rejects_non_admissible() {
        let mut m = ComplexMatrix::zeros(4, 4);
        m[(0, 2)] = C64::new(1.0, 0.0);
        assert!(matches!(QuadraticGenerator::new(m), Err(Error::InvalidGenerator { .. })));
        assert!(QuadraticGenerator::new(ComplexMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn block_constructor() {
        let a = ComplexMatrix::from_real_rows(&[&[0.1, 0.2], &[0.3, 0.4]]);
        let b = ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[-0.5, 0.0]]);
        let c = ComplexMatrix::from_real_rows(&[&[0.0, -0.7], &[0.7, 0.0]]);
        assert!(QuadraticGenerator::from_blocks(&a, &b, &c).is_ok());
        assert!(QuadraticGenerator::from_blocks(&a, &a, &c).is_err());
    }
}
