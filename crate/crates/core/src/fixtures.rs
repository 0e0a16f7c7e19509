use fermigauss_numkernel::{ComplexMatrix, C64};

use crate::gaussianops::QuadraticGenerator;

/// The three-site example generator with parameter `a` (0-based entries).
pub(crate) fn example_generator(a: f64) -> QuadraticGenerator {
    let mut m = ComplexMatrix::zeros(6, 6);
    for (i, j, s) in [(0, 1, -1.0), (0, 5, 1.0), (1, 2, -1.0), (2, 3, -1.0), (3, 2, 1.0), (4, 3, 1.0), (5, 0, -1.0), (5, 4, 1.0)] {
        m[(i, j)] = C64::new(s * a, 0.0);
    }
    QuadraticGenerator::new(m).unwrap()
}

pub(crate) fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

pub(crate) fn rng(seed: u64) -> rand_chacha::ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub(crate) fn random_vector(rng: &mut impl rand::Rng, n: usize, scale: f64) -> alloc::vec::Vec<C64> {
    (0..n).map(|_| C64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale))).collect()
}

pub(crate) fn dense_of(g: &QuadraticGenerator) -> fermigauss_fockoracle::DenseOperator {
    fermigauss_fockoracle::dense_gaussian(g.matrix(), None, None).unwrap()
}

/// Dense product of the three factors of a decomposition times its prefactor.
pub(crate) fn dense_factored(f: &crate::gaussianops::FactoredGaussian) -> fermigauss_fockoracle::DenseOperator {
    use crate::gaussianops::Ordering;
    use fermigauss_fockoracle::{dense_exponential, Exponent};
    let l = f.sites();
    let y = f.y().expect("principal log exists in fixtures");
    let (left, right) = match f.ordering() {
        Ordering::Normal => (Exponent { pair_creation: Some(f.x()), ..Default::default() }, Exponent { pair_annihilation: Some(f.z()), ..Default::default() }),
        Ordering::Antinormal => {
            (Exponent { pair_annihilation: Some(f.x()), ..Default::default() }, Exponent { pair_creation: Some(f.z()), ..Default::default() })
        }
    };
    let mid = Exponent { hopping: Some(y), ..Default::default() };
    let p = &(&dense_exponential(l, &left).unwrap() * &dense_exponential(l, &mid).unwrap()) * &dense_exponential(l, &right).unwrap();
    p.scale(f.prefactor().value)
}

/// Printed matrix elements `<p|F|q>` of the example operator; position `p` reads site `k`
/// from bit `k - 1`.
pub(crate) fn printed_table(a: f64) -> ComplexMatrix {
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

pub(crate) fn table_config(p: usize) -> crate::FockConfig {
    crate::FockConfig::from_mask(3, p as u64)
}

pub(crate) fn dense_element(f: &fermigauss_fockoracle::DenseOperator, ket: &crate::FockConfig, bra: &crate::FockConfig) -> C64 {
    fermigauss_fockoracle::dense_element(f, ket.bits(), bra.bits())
}
