#![allow(dead_code)]

use fermigauss::colpa::{GeneralizedFactored, LinearGaussianOp};
use fermigauss::gaussianops::{FactoredGaussian, Ordering, QuadraticGenerator};
use fermigauss::{ComplexMatrix, FockConfig, C64};
use fermigauss_fockoracle::{dense_exponential, dense_gaussian, DenseOperator, Exponent};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vector(r: &mut impl Rng, n: usize, scale: f64) -> Vec<C64> {
    (0..n).map(|_| C64::new(r.random_range(-scale..scale), r.random_range(-scale..scale))).collect()
}

pub fn random_op(r: &mut ChaCha8Rng, sites: usize, scale: f64) -> LinearGaussianOp {
    let g = QuadraticGenerator::random(sites, r, scale);
    let u = random_vector(r, sites, scale);
    let v = random_vector(r, sites, scale);
    LinearGaussianOp::new(g, u, v).unwrap()
}

pub fn random_skew(r: &mut ChaCha8Rng, n: usize, scale: f64) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let z = C64::new(r.random_range(-scale..scale), r.random_range(-scale..scale));
            m[(i, j)] = z;
            m[(j, i)] = -z;
        }
    }
    m
}

/// The three-site example operator with parameter `a`.
pub fn example_generator(a: f64) -> QuadraticGenerator {
    let mut m = ComplexMatrix::zeros(6, 6);
    for (i, j, s) in [(0, 1, -1.0), (0, 5, 1.0), (1, 2, -1.0), (2, 3, -1.0), (3, 2, 1.0), (4, 3, 1.0), (5, 0, -1.0), (5, 4, 1.0)] {
        m[(i, j)] = c(s * a);
    }
    QuadraticGenerator::new(m).unwrap()
}

pub fn example_transfer(a: f64) -> ComplexMatrix {
    let (co, s) = (a.cos(), a.sin());
    ComplexMatrix::from_real_rows(&[
        &[co, -s, 1.0 - co, 0.0, 1.0 - co, s],
        &[0.0, 1.0, -s, 1.0 - co, 0.0, 0.0],
        &[0.0, 0.0, co, -s, 0.0, 0.0],
        &[0.0, 0.0, s, co, 0.0, 0.0],
        &[0.0, 0.0, 1.0 - co, s, 1.0, 0.0],
        &[-s, 1.0 - co, 0.0, 1.0 - co, s, co],
    ])
}

/// Printed `<p|F|q>` of the example operator; position `p` reads site `k` from bit `k - 1`.
pub fn printed_table(a: f64) -> ComplexMatrix {
    let (co, si) = (a.cos(), a.sin());
    let rows: [[f64; 8]; 8] = [
        [co, 0., 0., 0., 0., -si, 1. - co, 0.],
        [0., 1., -si, 0., 1. - co, 0., 0., -1. + co],
        [0., 0., co, 0., -si, 0., 0., si],
        [co - 1., 0., 0., 1., 0., -si, 1. - co, 0.],
        [0., 0., 0., 0., 1., 0., 0., 0.],
        [si, 0., 0., 0., 0., co, -si, 0.],
        [0., 0., 0., 0., 0., 0., 1., 0.],
        [0., 0., -si, 0., 1. - co, 0., 0., co],
    ];
    ComplexMatrix::from_fn(8, 8, |i, j| c(rows[i][j]))
}

pub fn table_config(p: usize) -> FockConfig {
    FockConfig::from_mask(3, p as u64)
}

pub fn dense_op(op: &LinearGaussianOp) -> DenseOperator {
    dense_gaussian(op.generator().matrix(), Some(op.u()), Some(op.v())).unwrap()
}

pub fn dense_quadratic(g: &QuadraticGenerator) -> DenseOperator {
    dense_gaussian(g.matrix(), None, None).unwrap()
}

pub fn element(f: &DenseOperator, ket: &FockConfig, bra: &FockConfig) -> C64 {
    fermigauss_fockoracle::dense_element(f, ket.bits(), bra.bits())
}

/// Dense product of the three factors times the prefactor.
pub fn dense_three(f: &FactoredGaussian) -> DenseOperator {
    let l = f.sites();
    let (left, right) = match f.ordering() {
        Ordering::Normal => (Exponent { pair_creation: Some(f.x()), ..Default::default() }, Exponent { pair_annihilation: Some(f.z()), ..Default::default() }),
        Ordering::Antinormal => {
            (Exponent { pair_annihilation: Some(f.x()), ..Default::default() }, Exponent { pair_creation: Some(f.z()), ..Default::default() })
        }
    };
    let mid = Exponent { hopping: f.y(), ..Default::default() };
    let p = &(&dense_exponential(l, &left).unwrap() * &dense_exponential(l, &mid).unwrap()) * &dense_exponential(l, &right).unwrap();
    p.scale(f.prefactor().value)
}

/// Dense product of the five factors times the prefactor.
pub fn dense_five(f: &GeneralizedFactored) -> DenseOperator {
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
        acc = &acc * &dense_exponential(l, e).unwrap();
    }
    acc.scale(f.prefactor().value)
}

pub fn relative(a: &DenseOperator, b: &DenseOperator) -> f64 {
    a.max_diff(b) / b.matrix().max_abs().max(1.0)
}

pub fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}
