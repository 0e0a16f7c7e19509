use alloc::vec::Vec;

use fermigauss_numkernel::{expm, logm, ComplexMatrix, LinalgError};

use super::generator::{j_matrix, QuadraticGenerator};
use crate::error::{Error, Result};

/// Relative tolerance of the `T J T^T = J` certificate.
pub const J_ORTHOGONALITY_TOL: f64 = 1e-10;

/// `T = e^M`, acting as `F^-1 (c; c^dag) F = T (c; c^dag)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransferMatrix {
    sites: usize,
    t: ComplexMatrix,
    deviation: f64,
}

impl TransferMatrix {
    /// Wraps `t` after certifying `T J T^T = J` to `1e-10 max(1, |T|^2)`.
    pub fn new(t: ComplexMatrix) -> Result<Self> {
        if !t.is_square() || t.rows() % 2 != 0 {
            return Err(Error::SiteMismatch { expected: t.rows() / 2, found: t.cols() / 2 });
        }
        let deviation = j_deviation(&t);
        let scale = t.max_abs().powi(2).max(1.0);
        if deviation > J_ORTHOGONALITY_TOL * scale {
            return Err(Error::NotJOrthogonal { deviation });
        }
        Ok(Self { sites: t.rows() / 2, t, deviation })
    }

    pub fn identity(sites: usize) -> Self {
        Self { sites, t: ComplexMatrix::identity(2 * sites), deviation: 0.0 }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.t
    }

    /// `max |T J T^T - J|` measured at construction.
    pub fn j_deviation(&self) -> f64 {
        self.deviation
    }

    /// `[T11, T12, T21, T22]`.
    pub fn blocks(&self) -> [ComplexMatrix; 4] {
        self.t.split_blocks()
    }

    pub fn block(&self, b: Block) -> ComplexMatrix {
        let l = self.sites;
        match b {
            Block::T11 => self.t.submatrix(0, 0, l, l),
            Block::T22 => self.t.submatrix(l, l, l, l),
        }
    }

    /// `self * other`, the transfer matrix of `F_self F_other`.
    pub fn compose(&self, other: &TransferMatrix) -> Result<TransferMatrix> {
        if self.sites != other.sites {
            return Err(Error::SiteMismatch { expected: self.sites, found: other.sites });
        }
        TransferMatrix::new(&self.t * &other.t)
    }

    pub fn det(&self) -> Result<fermigauss_numkernel::C64> {
        Ok(fermigauss_numkernel::det(&self.t)?)
    }
}

/// One of the two diagonal blocks of a transfer matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Block {
    T11,
    T22,
}

fn j_deviation(t: &ComplexMatrix) -> f64 {
    let j = j_matrix(t.rows() / 2);
    (&(t * &j) * &t.transpose()).max_diff(&j)
}

pub fn transfer_of(g: &QuadraticGenerator) -> Result<TransferMatrix> {
    TransferMatrix::new(expm(g.matrix())?)
}

/// `T1 T2`.
pub fn compose_transfers(t1: &TransferMatrix, t2: &TransferMatrix) -> Result<TransferMatrix> {
    t1.compose(t2)
}

/// Product of `F_{M_1} F_{M_2} ...`; the generator is present only when the principal
/// logarithm of the transfer product exists.
#[derive(Clone, Debug)]
pub struct Composition {
    pub transfer: TransferMatrix,
    pub generator: Option<QuadraticGenerator>,
}

pub fn compose_generators(gs: &[&QuadraticGenerator]) -> Result<Composition> {
    let sites = gs.first().map_or(0, |g| g.sites());
    let mut t = TransferMatrix::identity(sites);
    for g in gs {
        t = t.compose(&transfer_of(g)?)?;
    }
    let generator = match logm(t.matrix()) {
        Ok(m) => QuadraticGenerator::new(m).ok(),
        Err(LinalgError::BranchCut | LinalgError::Singular { .. } | LinalgError::NoConvergence) => None,
        Err(e) => return Err(e.into()),
    };
    Ok(Composition { transfer: t, generator })
}

/// Ordered product of generators, `F = F_{G_0} F_{G_1} ...`; transfer `T = e^{G_0} e^{G_1} ...`.
///
/// Keeping the factors (rather than only `T`) lets the prefactor sign be continued along
/// `z -> prod_k e^{z G_k}`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratorPath {
    sites: usize,
    factors: Vec<ComplexMatrix>,
}

impl GeneratorPath {
    pub fn single(g: &QuadraticGenerator) -> Self {
        Self { sites: g.sites(), factors: alloc::vec![g.matrix().clone()] }
    }

    /// `F_{M_2}^dag F_{M_1}`.
    pub fn sandwich(g1: &QuadraticGenerator, g2: &QuadraticGenerator) -> Result<Self> {
        Self::product(&[&g2.adjoint(), g1])
    }

    pub fn product(gs: &[&QuadraticGenerator]) -> Result<Self> {
        let sites = gs.first().map_or(0, |g| g.sites());
        if let Some(g) = gs.iter().find(|g| g.sites() != sites) {
            return Err(Error::SiteMismatch { expected: sites, found: g.sites() });
        }
        Ok(Self { sites, factors: gs.iter().map(|g| g.matrix().clone()).collect() })
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn factors(&self) -> &[ComplexMatrix] {
        &self.factors
    }

    /// `prod_k e^{z G_k}`.
    pub fn transfer_at(&self, z: fermigauss_numkernel::C64) -> Result<ComplexMatrix> {
        let mut t = ComplexMatrix::identity(2 * self.sites);
        for g in &self.factors {
            t = &t * &expm(&g.scale(z))?;
        }
        Ok(t)
    }

    pub fn transfer(&self) -> Result<TransferMatrix> {
        let mut t = ComplexMatrix::identity(2 * self.sites);
        for g in &self.factors {
            t = &t * &expm(g)?;
        }
        TransferMatrix::new(t)
    }

    /// Replaces the last factor `G` by `G + eps D`.
    pub fn perturb_last(&self, eps: f64, d: &QuadraticGenerator) -> Result<Self> {
        if d.sites() != self.sites {
            return Err(Error::SiteMismatch { expected: self.sites, found: d.sites() });
        }
        let mut factors = self.factors.clone();
        match factors.last_mut() {
            Some(last) => *last = &*last + &d.matrix().scale_real(eps),
            None => factors.push(d.matrix().scale_real(eps)),
        }
        Ok(Self { sites: self.sites, factors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use fermigauss_numkernel::C64;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_generator_gives_identity() {
        let t = transfer_of(&QuadraticGenerator::zero(3)).unwrap();
        assert_eq!(*t.matrix(), ComplexMatrix::identity(6));
    }

    #[test]
    fn random_transfer_is_j_orthogonal_with_unit_det() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let t = transfer_of(&QuadraticGenerator::random(4, &mut rng, 0.7)).unwrap();
            assert!(t.j_deviation() < 1e-12 * t.matrix().max_abs().powi(2).max(1.0));
            let d = t.det().unwrap();
            assert!((d.norm() - 1.0).abs() < 1e-8 && d.im.abs() < 1e-8);
        }
    }

    #[test]
    fn rejects_non_j_orthogonal() {
        let mut t = ComplexMatrix::identity(4);
        t[(0, 0)] = C64::new(2.0, 0.0);
        assert!(matches!(TransferMatrix::new(t), Err(Error::NotJOrthogonal { .. })));
    }

    #[test]
    fn commuting_generators_compose_additively() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let g = QuadraticGenerator::random(2, &mut rng, 0.3);
        let c = compose_generators(&[&g.scale(0.5), &g.scale(0.7)]).unwrap();
        let m = c.generator.unwrap();
        assert!(m.matrix().max_diff(&g.scale(1.2).matrix().clone()) < 1e-10);
    }

    #[test]
    fn composition_is_associative() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let ts: Vec<_> = (0..3).map(|_| transfer_of(&QuadraticGenerator::random(3, &mut rng, 0.5)).unwrap()).collect();
        let left = ts[0].compose(&ts[1]).unwrap().compose(&ts[2]).unwrap();
        let right = ts[0].compose(&ts[1].compose(&ts[2]).unwrap()).unwrap();
        assert!(left.matrix().max_diff(right.matrix()) < 1e-12 * left.matrix().max_abs().max(1.0));
    }

    #[test]
    fn path_transfer_matches_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let g1 = QuadraticGenerator::random(2, &mut rng, 0.5);
        let g2 = QuadraticGenerator::random(2, &mut rng, 0.5);
        let p = GeneratorPath::sandwich(&g1, &g2).unwrap();
        let want = &expm(g2.matrix()).unwrap().adjoint() * &expm(g1.matrix()).unwrap();
        assert!(p.transfer().unwrap().matrix().max_diff(&want) < 1e-12);
        assert!(p.transfer_at(C64::new(1.0, 0.0)).unwrap().max_diff(&want) < 1e-12);
    }
}
