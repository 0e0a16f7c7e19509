use alloc::vec::Vec;

use fermigauss_numkernel::{ComplexMatrix, SkewMatrix, C64};

use crate::config::FockConfig;
use crate::error::{Error, Result};
use crate::gaussianops::{bbd_normal_along, FactoredGaussian, GeneratorPath, Ordering, Prefactor};

/// `det(T22)^{1/2}` and `A = [[X, e^Y], [-e^{Y^T}, Z]]` of a normal-form decomposition; every
/// matrix element `<J|F|I>` is a signed Pfaffian of a principal submatrix of `A`.
#[derive(Clone, Debug)]
pub struct OverlapKernel {
    sites: usize,
    prefactor: Prefactor,
    a: SkewMatrix,
    rcond: f64,
}

impl OverlapKernel {
    pub fn from_factors(f: &FactoredGaussian) -> Result<Self> {
        if f.ordering() != Ordering::Normal {
            return Err(Error::NumericalFailure("overlap kernel needs the normal form"));
        }
        let l = f.sites();
        let e = f.exp_y();
        let a = ComplexMatrix::from_blocks(&f.x_antisymmetric(), e, &e.transpose().scale_real(-1.0), &f.z_antisymmetric());
        Ok(Self { sites: l, prefactor: f.prefactor(), a: SkewMatrix::antisymmetrize(&a), rcond: f.rcond() })
    }

    pub fn along(path: &GeneratorPath) -> Result<Self> {
        Self::from_factors(&bbd_normal_along(path)?)
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn prefactor(&self) -> Prefactor {
        self.prefactor
    }

    pub fn matrix(&self) -> &SkewMatrix {
        &self.a
    }

    pub fn rcond(&self) -> f64 {
        self.rcond
    }

    /// `pf A` with rows and columns `J_0` and `L + I_0` removed.
    pub fn reduced_pfaffian(&self, ket: &FockConfig, bra: &FockConfig) -> C64 {
        let l = self.sites;
        let mut remove: Vec<usize> = bra.empty();
        remove.extend(ket.empty().into_iter().map(|k| k + l));
        self.a.without(&remove).pfaffian()
    }

    /// `(-1)^{n(n+1)/2} (-1)^{n m}` with `n = |I_1|`, `m = |J_1|`.
    pub fn global_sign(ket: &FockConfig, bra: &FockConfig) -> f64 {
        let (n, m) = (ket.count(), bra.count());
        if (n * (n + 1) / 2 + n * m) % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    }

    /// `<J| F |I>`; exactly zero for opposite parities.
    pub fn amplitude(&self, ket: &FockConfig, bra: &FockConfig) -> C64 {
        if ket.is_odd() != bra.is_odd() {
            return C64::new(0.0, 0.0);
        }
        self.prefactor.value * self.reduced_pfaffian(ket, bra) * Self::global_sign(ket, bra)
    }

    /// The kernel of `lambda F`.
    pub fn scaled(&self, lambda: C64) -> Self {
        let mut k = self.clone();
        k.prefactor = k.prefactor.map(|v| v * lambda);
        k
    }
}
