//! Dense reconstructions used by `--verify` and the `verify` suite.

use fermigauss::colpa::{GeneralizedFactored, LinearGaussianOp, NonlinearTransform};
use fermigauss::gaussianops::{FactoredGaussian, Ordering};
use fermigauss::{FockConfig, C64};
use fermigauss_fockoracle::{dense_element, dense_exponential, dense_gaussian, mode_string, DenseOperator, Exponent, OracleError};

pub fn dense_op(op: &LinearGaussianOp) -> Result<DenseOperator, OracleError> {
    dense_gaussian(op.generator().matrix(), Some(op.u()), Some(op.v()))
}

pub fn element(f: &DenseOperator, ket: &FockConfig, bra: &FockConfig) -> C64 {
    dense_element(f, ket.bits(), bra.bits())
}

pub fn dense_three(f: &FactoredGaussian) -> Result<DenseOperator, OracleError> {
    let l = f.sites();
    let (left, right) = match f.ordering() {
        Ordering::Normal => (Exponent { pair_creation: Some(f.x()), ..Default::default() }, Exponent { pair_annihilation: Some(f.z()), ..Default::default() }),
        Ordering::Antinormal => {
            (Exponent { pair_annihilation: Some(f.x()), ..Default::default() }, Exponent { pair_creation: Some(f.z()), ..Default::default() })
        }
    };
    let mid = Exponent { hopping: f.y(), ..Default::default() };
    let p = &(&dense_exponential(l, &left)? * &dense_exponential(l, &mid)?) * &dense_exponential(l, &right)?;
    Ok(p.scale(f.prefactor().value))
}

pub fn dense_five(f: &GeneralizedFactored) -> Result<DenseOperator, OracleError> {
    let l = f.sites();
    let qc: Vec<C64> = f.q().iter().map(|z| z.conj()).collect();
    let parts = [
        Exponent { creation: Some(&qc), ..Default::default() },
        Exponent { pair_creation: Some(f.x()), ..Default::default() },
        Exponent { hopping: f.y(), ..Default::default() },
        Exponent { pair_annihilation: Some(f.z()), ..Default::default() },
        Exponent { annihilation: Some(f.p()), ..Default::default() },
    ];
    let mut acc = DenseOperator::identity(l);
    for e in &parts {
        acc = &acc * &dense_exponential(l, e)?;
    }
    Ok(acc.scale(f.prefactor().value))
}

/// `T_p s + 1/2 r^T B s + shift` for mode `mu` as a dense operator.
pub fn image_operator(nt: &NonlinearTransform, mu: usize) -> DenseOperator {
    let l = nt.sites;
    let s_op = |b: usize| if b < l { (b, false) } else { (b - l, true) };
    let r_op = |a: usize| if a < l { (a, true) } else { (a - l, false) };
    let mut acc = DenseOperator::identity(l).scale(nt.shift[mu]);
    for b in 0..2 * l {
        acc = &acc + &mode_string(l, &[s_op(b)]).scale(nt.tp[(mu, b)]);
        for a in 0..2 * l {
            acc = &acc + &mode_string(l, &[r_op(a), s_op(b)]).scale(nt.quadratic(mu)[(a, b)] * 0.5);
        }
    }
    acc
}

pub fn relative(a: &DenseOperator, b: &DenseOperator) -> f64 {
    a.max_diff(b) / b.matrix().max_abs().max(1.0)
}

pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}
