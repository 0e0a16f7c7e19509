use fermigauss_numkernel::{ComplexMatrix, C64};

use super::generalized::generalized_bbd;
use super::linear::LinearGaussianOp;
use crate::error::Result;
use crate::gaussianops::QuadraticGenerator;

/// `exp(a c^dag + b c + d (c^dag c - 1/2))` on one mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingleModeOp {
    pub a: C64,
    pub b: C64,
    pub d: C64,
}

/// Order of the factors `P = e^{alpha c^dag}`, `Q = e^{beta c}`, `G = e^{gamma (c^dag c - 1/2)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OrderingType {
    /// `P G Q`
    I,
    /// `Q G P`
    II,
    /// `P Q G`
    III,
    /// `Q P G`
    IV,
    /// `G Q P`
    V,
    /// `G P Q`
    VI,
}

impl OrderingType {
    pub const ALL: [OrderingType; 6] = [Self::I, Self::II, Self::III, Self::IV, Self::V, Self::VI];

    pub fn pattern(self) -> &'static str {
        match self {
            Self::I => "PGQ",
            Self::II => "QGP",
            Self::III => "PQG",
            Self::IV => "QPG",
            Self::V => "GQP",
            Self::VI => "GPQ",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OrderedFactors {
    pub kind: OrderingType,
    pub alpha: C64,
    pub beta: C64,
    pub gamma: C64,
}

impl OrderedFactors {
    /// The product as a matrix on `(|0>, |1>)`.
    pub fn matrix(&self) -> ComplexMatrix {
        let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        let p = ComplexMatrix::new(2, 2, alloc::vec![o, z, self.alpha, o]).expect("finite");
        let q = ComplexMatrix::new(2, 2, alloc::vec![o, self.beta, z, o]).expect("finite");
        let g = ComplexMatrix::diagonal(&[(-self.gamma * 0.5).exp(), (self.gamma * 0.5).exp()]);
        let seq = self.kind.pattern().chars().map(|ch| match ch {
            'P' => &p,
            'Q' => &q,
            _ => &g,
        });
        seq.fold(ComplexMatrix::identity(2), |acc, m| &acc * m)
    }
}

impl SingleModeOp {
    pub fn new(a: C64, b: C64, d: C64) -> Self {
        Self { a, b, d }
    }

    /// `M = diag(d, -d)`, `u = (a*)`, `v = (b)`.
    pub fn to_linear_op(&self) -> LinearGaussianOp {
        let m = ComplexMatrix::diagonal(&[self.d, -self.d]);
        LinearGaussianOp::new(QuadraticGenerator::from_trusted(m), alloc::vec![self.a.conj()], alloc::vec![self.b]).expect("one site")
    }

    /// `cosh(x/2)` and `sinh(x/2) / x` with `x^2 = 4ab + d^2`, both even in `x`.
    fn ch_sh(&self) -> (C64, C64) {
        let x2 = self.a * self.b * 4.0 + self.d * self.d;
        if x2.norm() < 1e-8 {
            let y2 = x2 * 0.25;
            let ch = C64::new(1.0, 0.0) + y2 * 0.5 + y2 * y2 / 24.0;
            let sh = (C64::new(1.0, 0.0) + y2 / 6.0 + y2 * y2 / 120.0) * 0.5;
            (ch, sh)
        } else {
            let x = x2.sqrt();
            ((x * 0.5).cosh(), (x * 0.5).sinh() / x)
        }
    }

    /// Closed form of the operator on `(|0>, |1>)`.
    pub fn matrix(&self) -> ComplexMatrix {
        let (ch, sh) = self.ch_sh();
        let two_sh = sh * 2.0;
        ComplexMatrix::new(2, 2, alloc::vec![ch - self.d * sh, self.b * two_sh, self.a * two_sh, ch + self.d * sh]).expect("finite")
    }
}

/// The six orderings from the closed forms in `cosh(x/2)`, `sinh(x/2)/x`.
pub fn factor_orderings(op: &SingleModeOp) -> [OrderedFactors; 6] {
    let (ch, sh) = op.ch_sh();
    let em = ch - op.d * sh;
    let ep = ch + op.d * sh;
    let (sa, sb) = (op.a * sh * 2.0, op.b * sh * 2.0);
    let gm = -em.ln() * 2.0;
    let gp = ep.ln() * 2.0;
    let f = |kind, alpha, beta, gamma| OrderedFactors { kind, alpha, beta, gamma };
    [
        f(OrderingType::I, sa / em, sb / em, gm),
        f(OrderingType::II, sa / ep, sb / ep, gp),
        f(OrderingType::III, sa / em, sb * em, gm),
        f(OrderingType::IV, sa * ep, sb / ep, gp),
        f(OrderingType::V, sa / ep, sb * ep, gp),
        f(OrderingType::VI, sa * em, sb / em, gm),
    ]
}

/// The six orderings solved from the entries of a unit-determinant `2 x 2` operator matrix.
pub fn orderings_from_matrix(m: &ComplexMatrix) -> [OrderedFactors; 6] {
    let (f00, f01, f10, f11) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    let gm = -f00.ln() * 2.0;
    let gp = f11.ln() * 2.0;
    let f = |kind, alpha, beta, gamma| OrderedFactors { kind, alpha, beta, gamma };
    [
        f(OrderingType::I, f10 / f00, f01 / f00, gm),
        f(OrderingType::II, f10 / f11, f01 / f11, gp),
        f(OrderingType::III, f10 / f00, f01 * f00, gm),
        f(OrderingType::IV, f10 * f11, f01 / f11, gp),
        f(OrderingType::V, f10 / f11, f01 * f11, gp),
        f(OrderingType::VI, f10 * f00, f01 / f00, gm),
    ]
}

/// The six orderings via the five-factor decomposition of the one-site embedding, which
/// is ordering I directly.
pub fn factor_orderings_via_embedding(op: &SingleModeOp) -> Result<[OrderedFactors; 6]> {
    let g = generalized_bbd(&op.to_linear_op())?;
    let pre = g.prefactor().value;
    let (alpha, beta) = (g.q()[0].conj(), g.p()[0]);
    let gplus = pre * g.exp_y()[(0, 0)];
    let m = ComplexMatrix::new(2, 2, alloc::vec![pre, pre * beta, alpha * pre, alpha * beta * pre + gplus]).expect("finite");
    Ok(orderings_from_matrix(&m))
}
