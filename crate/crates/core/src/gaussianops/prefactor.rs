use core::f64::consts::PI;

use fermigauss_numkernel::{det, logm, ComplexMatrix, C64};

use super::transfer::GeneratorPath;

/// How the square-root branch of a prefactor was fixed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PrefactorRule {
    /// `exp(1/2 tr log B)` with the principal matrix logarithm; the convention for
    /// transfer-only input, exact whenever the spectrum of `B` stays off the branch cut
    /// along the generating path.
    PrincipalLog,
    /// Analytic continuation of `det(B(z))^{1/2}` along `z -> prod_k e^{z G_k}` from `z = 0`.
    Continuation,
    /// Principal square root of the determinant; the sign is not determined.
    PrincipalRoot,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Prefactor {
    pub value: C64,
    pub rule: PrefactorRule,
}

impl Prefactor {
    pub fn sign_ambiguous(&self) -> bool {
        self.rule == PrefactorRule::PrincipalRoot
    }

    pub(crate) fn map(self, f: impl FnOnce(C64) -> C64) -> Self {
        Self { value: f(self.value), rule: self.rule }
    }
}

/// `det(B)^{1/2}` from the principal logarithm, or the principal root when the log fails.
pub(crate) fn root_det_principal(b: &ComplexMatrix) -> Prefactor {
    match logm(b) {
        Ok(l) => Prefactor { value: (l.trace() * 0.5).exp(), rule: PrefactorRule::PrincipalLog },
        Err(_) => Prefactor { value: det(b).map(|d| d.sqrt()).unwrap_or(C64::new(0.0, 0.0)), rule: PrefactorRule::PrincipalRoot },
    }
}

/// `det(B)^{1/2}` where `B = select(T)`, continued along the path. When the straight path
/// meets a zero of the determinant, arcs into complex `z` are tried; the value at `z = 1`
/// does not depend on the arc because the square root is itself an entire function of `z`
/// (it is a vacuum matrix element of `F(z)`).
pub(crate) fn root_det_continued(path: &GeneratorPath, select: &dyn Fn(&ComplexMatrix) -> ComplexMatrix) -> Option<C64> {
    for beta in [0.0, 0.2, -0.2, 0.5, -0.5] {
        let z = |t: f64| C64::new(t, beta * (PI * t).sin());
        if let Some(v) = follow(path, select, &z) {
            return Some(v);
        }
    }
    None
}

fn follow(path: &GeneratorPath, select: &dyn Fn(&ComplexMatrix) -> ComplexMatrix, z: &dyn Fn(f64) -> C64) -> Option<C64> {
    let eval = |t: f64| -> Option<C64> {
        let tm = path.transfer_at(z(t)).ok()?;
        let d = det(&select(&tm)).ok()?;
        (d.norm() > 1e-280).then_some(d.sqrt())
    };
    let pick = |root: C64, prev: C64| if (root - prev).norm() <= (root + prev).norm() { root } else { -root };
    let close = |a: C64, b: C64| (a - b).norm() <= 0.25 * (a + b).norm();
    let (mut t, mut s, mut h) = (0.0f64, C64::new(1.0, 0.0), 0.125f64);
    while t < 1.0 {
        h = h.min(1.0 - t);
        if h < 1e-9 {
            return None;
        }
        let mid = eval(t + 0.5 * h).map(|r| pick(r, s));
        let end = mid.and_then(|m| eval(t + h).map(|r| (m, pick(r, m))));
        match end {
            Some((m, e)) if close(s, m) && close(m, e) => {
                s = e;
                t += h;
                h = (2.0 * h).min(0.25);
            }
            _ => h *= 0.5,
        }
    }
    Some(s)
}
