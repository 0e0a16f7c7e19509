use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use fermigauss_numkernel::{expm, solve, ComplexMatrix, C64};

use crate::modes::{basis_index, JwMode};
use crate::{OracleError, MAX_GAUSSIAN_SITES};

/// A `2^L x 2^L` operator in the fermionic occupation basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    sites: usize,
    matrix: ComplexMatrix,
}

impl DenseOperator {
    pub fn new(sites: usize, matrix: ComplexMatrix) -> Result<Self, OracleError> {
        let dim = 1usize << sites;
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(OracleError::DimensionMismatch);
        }
        Ok(Self { sites, matrix })
    }

    pub(crate) fn from_parts(sites: usize, matrix: ComplexMatrix) -> Self {
        Self { sites, matrix }
    }

    pub fn identity(sites: usize) -> Self {
        Self { sites, matrix: ComplexMatrix::identity(1 << sites) }
    }

    pub fn zero(sites: usize) -> Self {
        Self { sites, matrix: ComplexMatrix::zeros(1 << sites, 1 << sites) }
    }

    pub fn sites(&self) -> usize {
        self.sites
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self { sites: self.sites, matrix: self.matrix.adjoint() }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { sites: self.sites, matrix: self.matrix.scale(s) }
    }

    pub fn apply(&self, state: &[C64]) -> Vec<C64> {
        self.matrix.mul_vec(state)
    }

    pub fn anticommutator(a: &Self, b: &Self) -> Self {
        &(a * b) + &(b * a)
    }

    /// `exp(self)`.
    pub fn exp(&self) -> Result<Self, OracleError> {
        Ok(Self { sites: self.sites, matrix: expm(&self.matrix)? })
    }

    pub fn max_diff(&self, other: &Self) -> f64 {
        self.matrix.max_diff(&other.matrix)
    }
}

impl Mul for &DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.sites, rhs.sites, "site count mismatch");
        DenseOperator { sites: self.sites, matrix: &self.matrix * &rhs.matrix }
    }
}

impl Add for &DenseOperator {
    type Output = DenseOperator;
    fn add(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.sites, rhs.sites, "site count mismatch");
        DenseOperator { sites: self.sites, matrix: &self.matrix + &rhs.matrix }
    }
}

impl Sub for &DenseOperator {
    type Output = DenseOperator;
    fn sub(self, rhs: &DenseOperator) -> DenseOperator {
        assert_eq!(self.sites, rhs.sites, "site count mismatch");
        DenseOperator { sites: self.sites, matrix: &self.matrix - &rhs.matrix }
    }
}

/// A product of mode operators, each `(0-based site, dagger)`, leftmost factor first.
pub fn mode_string(sites: usize, ops: &[(usize, bool)]) -> DenseOperator {
    let dim = 1usize << sites;
    let mut m = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        if let Some((s, row)) = act_string(sites, ops, col) {
            m[(row, col)] += C64::new(s, 0.0);
        }
    }
    DenseOperator::from_parts(sites, m)
}

fn act_string(sites: usize, ops: &[(usize, bool)], index: usize) -> Option<(f64, usize)> {
    let mut sign = 1.0;
    let mut idx = index;
    for &(site, dagger) in ops.iter().rev() {
        let (s, next) = JwMode { sites, site, dagger }.act(idx)?;
        sign *= s;
        idx = next;
    }
    Some((sign, idx))
}

// Accumulates coef * (product of modes) into `m`.
fn add_monomial(m: &mut ComplexMatrix, sites: usize, coef: C64, ops: &[(usize, bool)]) {
    if coef == C64::new(0.0, 0.0) {
        return;
    }
    for col in 0..(1usize << sites) {
        if let Some((s, row)) = act_string(sites, ops, col) {
            m[(row, col)] += coef * s;
        }
    }
}

fn check_size(sites: usize) -> Result<(), OracleError> {
    if sites > MAX_GAUSSIAN_SITES {
        return Err(OracleError::TooManySites { sites, max: MAX_GAUSSIAN_SITES });
    }
    Ok(())
}

/// Operator matrix of `1/2 (c^dag, c) M (c, c^dag)^T + u^dag c^dag + v^T c`.
pub fn gaussian_exponent(m: &ComplexMatrix, u: Option<&[C64]>, v: Option<&[C64]>) -> Result<DenseOperator, OracleError> {
    if !m.is_square() || m.rows() % 2 != 0 {
        return Err(OracleError::DimensionMismatch);
    }
    let sites = m.rows() / 2;
    check_size(sites)?;
    for vec in [u, v].into_iter().flatten() {
        if vec.len() != sites {
            return Err(OracleError::DimensionMismatch);
        }
    }
    let dim = 1usize << sites;
    let mut h = ComplexMatrix::zeros(dim, dim);
    // row vector (c^dag, c), column vector (c, c^dag)
    let row_op = |a: usize| if a < sites { (a, true) } else { (a - sites, false) };
    let col_op = |b: usize| if b < sites { (b, false) } else { (b - sites, true) };
    for a in 0..2 * sites {
        for b in 0..2 * sites {
            add_monomial(&mut h, sites, m[(a, b)] * 0.5, &[row_op(a), col_op(b)]);
        }
    }
    if let Some(u) = u {
        for (j, uj) in u.iter().enumerate() {
            add_monomial(&mut h, sites, uj.conj(), &[(j, true)]);
        }
    }
    if let Some(v) = v {
        for (j, vj) in v.iter().enumerate() {
            add_monomial(&mut h, sites, *vj, &[(j, false)]);
        }
    }
    Ok(DenseOperator::from_parts(sites, h))
}

/// `exp(1/2 (c^dag, c) M (c, c^dag)^T + u^dag c^dag + v^T c)` by dense exponentiation.
pub fn dense_gaussian(m: &ComplexMatrix, u: Option<&[C64]>, v: Option<&[C64]>) -> Result<DenseOperator, OracleError> {
    gaussian_exponent(m, u, v)?.exp()
}

/// Terms of a general exponent, each optional:
/// `1/2 sum X_ij c_i^dag c_j^dag + sum Y_ij c_i^dag c_j + 1/2 sum Z_ij c_i c_j
///  + sum a_j c_j^dag + sum b_j c_j + constant`.
#[derive(Clone, Copy, Debug, Default)]
pub struct Exponent<'a> {
    pub pair_creation: Option<&'a ComplexMatrix>,
    pub hopping: Option<&'a ComplexMatrix>,
    pub pair_annihilation: Option<&'a ComplexMatrix>,
    pub creation: Option<&'a [C64]>,
    pub annihilation: Option<&'a [C64]>,
    pub constant: C64,
}

pub fn exponent_operator(sites: usize, e: &Exponent<'_>) -> Result<DenseOperator, OracleError> {
    check_size(sites)?;
    for mat in [e.pair_creation, e.hopping, e.pair_annihilation].into_iter().flatten() {
        if mat.rows() != sites || mat.cols() != sites {
            return Err(OracleError::DimensionMismatch);
        }
    }
    for vec in [e.creation, e.annihilation].into_iter().flatten() {
        if vec.len() != sites {
            return Err(OracleError::DimensionMismatch);
        }
    }
    let dim = 1usize << sites;
    let mut h = ComplexMatrix::identity(dim).scale(e.constant);
    for i in 0..sites {
        for j in 0..sites {
            if let Some(x) = e.pair_creation {
                add_monomial(&mut h, sites, x[(i, j)] * 0.5, &[(i, true), (j, true)]);
            }
            if let Some(y) = e.hopping {
                add_monomial(&mut h, sites, y[(i, j)], &[(i, true), (j, false)]);
            }
            if let Some(z) = e.pair_annihilation {
                add_monomial(&mut h, sites, z[(i, j)] * 0.5, &[(i, false), (j, false)]);
            }
        }
        if let Some(a) = e.creation {
            add_monomial(&mut h, sites, a[i], &[(i, true)]);
        }
        if let Some(b) = e.annihilation {
            add_monomial(&mut h, sites, b[i], &[(i, false)]);
        }
    }
    Ok(DenseOperator::from_parts(sites, h))
}

/// `exp` of the operator described by `e`.
pub fn dense_exponential(sites: usize, e: &Exponent<'_>) -> Result<DenseOperator, OracleError> {
    exponent_operator(sites, e)?.exp()
}

/// `<bra| F |ket>`.
pub fn dense_element(f: &DenseOperator, ket: &[bool], bra: &[bool]) -> C64 {
    assert!(ket.len() == f.sites && bra.len() == f.sites, "configuration length mismatch");
    f.matrix[(basis_index(bra), basis_index(ket))]
}

/// `F^-1 op F`, by a direct linear solve.
pub fn dense_conjugate(f: &DenseOperator, op: &DenseOperator) -> Result<DenseOperator, OracleError> {
    if f.sites != op.sites {
        return Err(OracleError::DimensionMismatch);
    }
    let rhs = &op.matrix * &f.matrix;
    let m = solve(&f.matrix, &rhs).map_err(|_| OracleError::Singular)?;
    Ok(DenseOperator::from_parts(f.sites, m))
}

/// `<bra| F2^dag A F1 |ket>`.
pub fn dense_expectation(f2: &DenseOperator, a: &DenseOperator, f1: &DenseOperator, ket: &[bool], bra: &[bool]) -> C64 {
    let sandwich = &(&f2.adjoint() * a) * f1;
    dense_element(&sandwich, ket, bra)
}
