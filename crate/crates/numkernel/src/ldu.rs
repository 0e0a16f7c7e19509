use crate::lu::inverse_conditioned;
use crate::matrix::ComplexMatrix;
use crate::{LinalgError, RCOND_TOL};

/// Which diagonal block of a 2x2 block matrix is inverted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pivot {
    /// `T = [[I, T12 T22^-1], [0, I]] diag(S, T22) [[I, 0], [T22^-1 T21, I]]`
    T22,
    /// `T = [[I, 0], [T21 T11^-1, I]] diag(T11, S) [[I, T11^-1 T12], [0, I]]`
    T11,
}

/// Block LDU (or UDL) factors of a square matrix of even dimension.
#[derive(Clone, Debug)]
pub struct BlockLdu {
    pub left: ComplexMatrix,
    pub diag: ComplexMatrix,
    pub right: ComplexMatrix,
    pub pivot: Pivot,
    pub rcond: f64,
}

impl BlockLdu {
    pub fn reassemble(&self) -> ComplexMatrix {
        &(&self.left * &self.diag) * &self.right
    }
}

pub fn schur_factor(t: &ComplexMatrix, pivot: Pivot) -> Result<BlockLdu, LinalgError> {
    if !t.is_square() {
        return Err(LinalgError::NotSquare { rows: t.rows(), cols: t.cols() });
    }
    if t.rows() % 2 != 0 {
        return Err(LinalgError::DimensionMismatch { expected: (t.rows() + 1, t.rows() + 1), found: (t.rows(), t.cols()) });
    }
    let n = t.rows() / 2;
    let [t11, t12, t21, t22] = t.split_blocks();
    let id = ComplexMatrix::identity(n);
    let zero = ComplexMatrix::zeros(n, n);
    match pivot {
        Pivot::T22 => {
            let (inv, rcond) = inverse_conditioned(&t22, RCOND_TOL)?;
            let x = &t12 * &inv;
            let z = &inv * &t21;
            let s = &t11 - &(&x * &t21);
            Ok(BlockLdu {
                left: ComplexMatrix::from_blocks(&id, &x, &zero, &id),
                diag: ComplexMatrix::from_blocks(&s, &zero, &zero, &t22),
                right: ComplexMatrix::from_blocks(&id, &zero, &z, &id),
                pivot,
                rcond,
            })
        }
        Pivot::T11 => {
            let (inv, rcond) = inverse_conditioned(&t11, RCOND_TOL)?;
            let x = &t21 * &inv;
            let z = &inv * &t12;
            let s = &t22 - &(&x * &t12);
            Ok(BlockLdu {
                left: ComplexMatrix::from_blocks(&id, &zero, &x, &id),
                diag: ComplexMatrix::from_blocks(&t11, &zero, &zero, &s),
                right: ComplexMatrix::from_blocks(&id, &z, &zero, &id),
                pivot,
                rcond,
            })
        }
    }
}
