use alloc::vec::Vec;

use fermigauss_numkernel::C64;

use crate::error::{Error, Result};
use crate::gaussianops::QuadraticGenerator;

/// `exp(1/2 (c^dag, c) M (c, c^dag)^T + u^dag c^dag + v^T c)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearGaussianOp {
    generator: QuadraticGenerator,
    u: Vec<C64>,
    v: Vec<C64>,
}

impl LinearGaussianOp {
    pub fn new(generator: QuadraticGenerator, u: Vec<C64>, v: Vec<C64>) -> Result<Self> {
        let l = generator.sites();
        for w in [&u, &v] {
            if w.len() != l {
                return Err(Error::SiteMismatch { expected: l, found: w.len() });
            }
            if w.iter().any(|z| !z.is_finite()) {
                return Err(fermigauss_numkernel::LinalgError::NonFinite.into());
            }
        }
        Ok(Self { generator, u, v })
    }

    pub fn quadratic(generator: QuadraticGenerator) -> Self {
        let l = generator.sites();
        Self { generator, u: alloc::vec![C64::new(0.0, 0.0); l], v: alloc::vec![C64::new(0.0, 0.0); l] }
    }

    pub fn sites(&self) -> usize {
        self.generator.sites()
    }

    pub fn generator(&self) -> &QuadraticGenerator {
        &self.generator
    }

    pub fn u(&self) -> &[C64] {
        &self.u
    }

    pub fn v(&self) -> &[C64] {
        &self.v
    }

    pub fn is_quadratic(&self) -> bool {
        self.u.iter().chain(&self.v).all(|z| *z == C64::new(0.0, 0.0))
    }

    /// The operator's Hermitian adjoint: `(M^dag, u <- v, v <- u)`.
    pub fn adjoint(&self) -> Self {
        Self { generator: self.generator.adjoint(), u: self.v.clone(), v: self.u.clone() }
    }
}
