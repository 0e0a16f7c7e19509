use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use fermigauss_numkernel::{expm, ComplexMatrix, SkewMatrix, C64};

use super::operator::{pair_action_sign, ModeOperator, OperatorString};
use super::wick::{contractions, WickExpansion, WickTerm};
use crate::amplitudes::{richardson, EpsilonSchedule, OverlapKernel};
use crate::colpa::{embed, embedded_configs, LinearGaussianOp};
use crate::config::FockConfig;
use crate::error::{Error, Result};
use crate::gaussianops::{GeneratorPath, QuadraticGenerator};

fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

/// Sandwich `<J| F_2^dag (...) F_1 |I>` data: the composed overlap kernel and `T_1^{+-1}`.
#[derive(Clone, Debug)]
struct Evaluator {
    sites: usize,
    kernel: OverlapKernel,
    t1: ComplexMatrix,
    t1_inv: ComplexMatrix,
}

impl Evaluator {
    fn new(g1: &QuadraticGenerator, g2: &QuadraticGenerator, scale: C64) -> Result<Self> {
        let kernel = OverlapKernel::along(&GeneratorPath::sandwich(g1, g2)?)?.scaled(scale);
        let t1 = expm(g1.matrix())?;
        let t1_inv = expm(&g1.matrix().scale_real(-1.0))?;
        Ok(Self { sites: g1.sites(), kernel, t1, t1_inv })
    }

    fn amplitude(&self, ket: &FockConfig, bra: &FockConfig) -> C64 {
        self.kernel.amplitude(ket, bra)
    }

    /// `w.s F_1 = F_1 (T_1^T w).s`.
    fn pull(&self, w: &[C64]) -> Vec<C64> {
        transpose_apply(&self.t1, w)
    }

    /// `F_1 w.s = (T_1^{-T} w).s F_1`.
    fn push(&self, w: &[C64]) -> Vec<C64> {
        transpose_apply(&self.t1_inv, w)
    }

    fn mode(&self, b: usize) -> (usize, bool) {
        (b % self.sites, b >= self.sites)
    }

    /// `<J| F_2^dag (w.s) F_1 |I> = sum_k [(T_1)_{w,k} sgn(I(k-)) <J|F|I(k-)> + (T_1)_{w,L+k} sgn(I(k+)) <J|F|I(k+)>]`.
    fn one_point(&self, w: &[C64], ket: &FockConfig, bra: &FockConfig) -> C64 {
        let p = self.pull(w);
        let mut sum = zero();
        for (b, &coef) in p.iter().enumerate() {
            let (site, dagger) = self.mode(b);
            if let Some((sign, cfg)) = ket.act(site, dagger) {
                sum += coef * sign * self.amplitude(&cfg, bra);
            }
        }
        sum
    }

    /// Double sum over `(k, e1), (l, e2)` with the signs of [`pair_action_sign`].
    fn two_point(&self, wa: &[C64], wb: &[C64], ket: &FockConfig, bra: &FockConfig) -> C64 {
        let (pa, pb) = (self.pull(wa), self.pull(wb));
        let mut sum = zero();
        for (b1, &c1) in pa.iter().enumerate() {
            let (k, e1) = self.mode(b1);
            for (b2, &c2) in pb.iter().enumerate() {
                let (l, e2) = self.mode(b2);
                if let Some(sign) = pair_action_sign(ket, k, e1, l, e2) {
                    let cfg = ket.with_site(l, e2).with_site(k, e1);
                    sum += c1 * c2 * sign * self.amplitude(&cfg, bra);
                }
            }
        }
        sum
    }

    /// `<J| F_2^dag (w_1.s) ... (w_n.s) F_1 |I>` by moving every factor through `F_1` and
    /// acting on `|I>`.
    fn direct(&self, left: &[Vec<C64>], ket: &FockConfig, bra: &FockConfig) -> C64 {
        let mut state: BTreeMap<Vec<bool>, C64> = BTreeMap::new();
        state.insert(ket.bits().to_vec(), C64::new(1.0, 0.0));
        for w in left.iter().rev() {
            let p = self.pull(w);
            let mut next: BTreeMap<Vec<bool>, C64> = BTreeMap::new();
            for (bits, amp) in state {
                let cfg = FockConfig::new(bits);
                for (b, &coef) in p.iter().enumerate() {
                    if coef == zero() {
                        continue;
                    }
                    let (site, dagger) = self.mode(b);
                    if let Some((sign, out)) = cfg.act(site, dagger) {
                        *next.entry(out.bits().to_vec()).or_insert(zero()) += amp * coef * sign;
                    }
                }
            }
            state = next;
        }
        state.into_iter().map(|(bits, amp)| amp * self.amplitude(&FockConfig::new(bits), bra)).sum()
    }

    /// Pairing sum `pf G / <J|F|I>^{n/2 - 1}` for an even string at equal parities, after
    /// rewriting `|I> = phi |I'>` when the parities differ.
    fn wick(&self, left: &[Vec<C64>], ket: &FockConfig, bra: &FockConfig) -> Result<C64> {
        let n = left.len();
        if ket.is_odd() == bra.is_odd() {
            if n % 2 == 1 {
                return Ok(zero());
            }
            return self.pairing_pfaffian(left, ket, bra);
        }
        if n % 2 == 0 {
            return Ok(zero());
        }
        let (phi, reduced) = split_ket(ket);
        let mut ext: Vec<Vec<C64>> = left.to_vec();
        ext.push(self.push(&phi.vector(self.sites)));
        self.pairing_pfaffian(&ext, &reduced, bra)
    }

    fn pairing_pfaffian(&self, left: &[Vec<C64>], ket: &FockConfig, bra: &FockConfig) -> Result<C64> {
        let n = left.len();
        let ov = self.amplitude(ket, bra);
        if n == 0 {
            return Ok(ov);
        }
        let mut g = ComplexMatrix::zeros(n, n);
        for a in 0..n {
            for b in a + 1..n {
                let v = self.two_point(&left[a], &left[b], ket, bra);
                g[(a, b)] = v;
                g[(b, a)] = -v;
            }
        }
        let pf = SkewMatrix::antisymmetrize(&g).pfaffian();
        normalize(pf, ov, n / 2)
    }
}

/// `|I> = phi |I'>` with `phi = c_k^dag` for the first occupied site `k`, or `phi = c_1` and
/// `I' = {1}` for the vacuum; the action sign is `+1` in both cases.
fn split_ket(ket: &FockConfig) -> (ModeOperator, FockConfig) {
    match ket.occupied().first() {
        Some(&k) => (ModeOperator::creation(k), ket.with_site(k, false)),
        None => (ModeOperator::annihilation(0), ket.with_site(0, true)),
    }
}

fn transpose_apply(t: &ComplexMatrix, w: &[C64]) -> Vec<C64> {
    (0..t.cols()).map(|b| w.iter().enumerate().map(|(a, &x)| x * t[(a, b)]).sum()).collect()
}

/// `sum / ov^{factors - 1}`, guarding a vanishing overlap.
fn normalize(sum: C64, ov: C64, factors: usize) -> Result<C64> {
    match factors {
        0 => Ok(ov),
        1 => Ok(sum),
        f => {
            if ov == zero() {
                return Err(Error::ZeroOverlap { unnormalized: sum });
            }
            Ok(sum / ov.powi(f as i32 - 1))
        }
    }
}

#[derive(Clone, Debug)]
enum Mode {
    Direct(Evaluator),
    /// The composed `T22` is singular: every quantity is extrapolated from `M_1 + eps D`.
    Regularized(EpsilonSchedule),
}

#[derive(Clone, Debug)]
struct Engine {
    g1: QuadraticGenerator,
    g2: QuadraticGenerator,
    scale: C64,
    mode: Mode,
}

impl Engine {
    fn new(g1: QuadraticGenerator, g2: QuadraticGenerator, schedule: EpsilonSchedule) -> Result<Self> {
        let scale = C64::new(1.0, 0.0);
        let mode = match Evaluator::new(&g1, &g2, scale) {
            Ok(ev) => Mode::Direct(ev),
            Err(Error::SingularBlock { .. }) => Mode::Regularized(schedule),
            Err(e) => return Err(e),
        };
        Ok(Self { g1, g2, scale, mode })
    }

    fn eval(&self, f: impl Fn(&Evaluator) -> Result<C64>) -> Result<C64> {
        match &self.mode {
            Mode::Direct(ev) => f(ev),
            Mode::Regularized(schedule) => {
                let d = schedule.direction(self.g1.sites());
                let (value, _) = richardson(schedule, |eps| f(&Evaluator::new(&self.g1.perturbed(eps, &d)?, &self.g2, self.scale)?))?;
                Ok(value)
            }
        }
    }

    fn scaled(&self, lambda: C64) -> Self {
        let mut e = self.clone();
        e.scale *= lambda;
        if let Mode::Direct(ev) = &mut e.mode {
            ev.kernel = ev.kernel.scaled(lambda);
        }
        e
    }
}

/// `<A> = <J| F_2^dag A F_1 |I>` for `F_k` Gaussian operators with optional linear parts.
///
/// Values are unnormalized: `<1>` is the overlap `<J| F_2^dag F_1 |I>`.
#[derive(Clone, Debug)]
pub struct CorrelatorContext {
    op1: LinearGaussianOp,
    op2: LinearGaussianOp,
    ket: FockConfig,
    bra: FockConfig,
    quadratic: Option<Engine>,
    extended: Engine,
    ext_ket: FockConfig,
    ext_bra: FockConfig,
}

impl CorrelatorContext {
    pub fn new(op1: LinearGaussianOp, op2: LinearGaussianOp, ket: FockConfig, bra: FockConfig) -> Result<Self> {
        Self::with_schedule(op1, op2, ket, bra, EpsilonSchedule::default())
    }

    pub fn quadratic(g1: QuadraticGenerator, g2: QuadraticGenerator, ket: FockConfig, bra: FockConfig) -> Result<Self> {
        Self::new(LinearGaussianOp::quadratic(g1), LinearGaussianOp::quadratic(g2), ket, bra)
    }

    pub fn with_schedule(op1: LinearGaussianOp, op2: LinearGaussianOp, ket: FockConfig, bra: FockConfig, schedule: EpsilonSchedule) -> Result<Self> {
        let sites = op1.sites();
        for found in [op2.sites(), ket.sites(), bra.sites()] {
            if found != sites {
                return Err(Error::SiteMismatch { expected: sites, found });
            }
        }
        let quadratic =
            if op1.is_quadratic() && op2.is_quadratic() { Some(Engine::new(op1.generator().clone(), op2.generator().clone(), schedule)?) } else { None };
        let extended = Engine::new(embed(&op1).generator().clone(), embed(&op2).generator().clone(), schedule)?;
        let (ext_ket, ext_bra) = embedded_configs(&ket, &bra);
        Ok(Self { op1, op2, ket, bra, quadratic, extended, ext_ket, ext_bra })
    }

    pub fn sites(&self) -> usize {
        self.ket.sites()
    }

    pub fn ket(&self) -> &FockConfig {
        &self.ket
    }

    pub fn bra(&self) -> &FockConfig {
        &self.bra
    }

    pub fn op1(&self) -> &LinearGaussianOp {
        &self.op1
    }

    pub fn op2(&self) -> &LinearGaussianOp {
        &self.op2
    }

    pub fn is_quadratic(&self) -> bool {
        self.quadratic.is_some()
    }

    /// `true` when values come from epsilon extrapolation because the composed `T22` is
    /// singular.
    pub fn is_regularized(&self) -> bool {
        let engine = self.quadratic.as_ref().unwrap_or(&self.extended);
        matches!(engine.mode, Mode::Regularized(_))
    }

    /// The context with `F_1` replaced by `lambda F_1`.
    pub fn scaled(&self, lambda: C64) -> Self {
        let mut c = self.clone();
        c.quadratic = c.quadratic.map(|e| e.scaled(lambda));
        c.extended = c.extended.scaled(lambda);
        c
    }

    fn engine(&self) -> Result<&Engine> {
        self.quadratic.as_ref().ok_or(Error::NotQuadratic)
    }

    fn vectors(&self, a: &OperatorString) -> Result<Vec<Vec<C64>>> {
        a.check_sites(self.sites())?;
        Ok(a.ops().iter().map(|op| op.vector(self.sites())).collect())
    }

    fn parity_vanishes(&self, n: usize) -> bool {
        (self.ket.is_odd() != self.bra.is_odd()) != (n % 2 == 1)
    }

    /// `<J| F_2^dag F_1 |I>`.
    pub fn overlap(&self) -> Result<C64> {
        match &self.quadratic {
            Some(e) => e.eval(|ev| Ok(ev.amplitude(&self.ket, &self.bra))),
            None => self.extended.eval(|ev| Ok(ev.amplitude(&self.ext_ket, &self.ext_bra))),
        }
    }

    pub fn one_point(&self, phi: ModeOperator) -> Result<C64> {
        let w = self.vectors(&OperatorString::new(alloc::vec![phi]))?;
        let e = self.engine()?;
        if self.parity_vanishes(1) {
            return Ok(zero());
        }
        e.eval(|ev| Ok(ev.one_point(&w[0], &self.ket, &self.bra)))
    }

    pub fn two_point(&self, phi_i: ModeOperator, phi_j: ModeOperator) -> Result<C64> {
        let w = self.vectors(&OperatorString::new(alloc::vec![phi_i, phi_j]))?;
        let e = self.engine()?;
        if self.parity_vanishes(2) {
            return Ok(zero());
        }
        e.eval(|ev| Ok(ev.two_point(&w[0], &w[1], &self.ket, &self.bra)))
    }

    /// `<A>` by acting with every operator on the ket; no contraction expansion.
    pub fn expectation(&self, a: &OperatorString) -> Result<C64> {
        let w = self.vectors(a)?;
        let e = self.engine()?;
        if self.parity_vanishes(a.len()) {
            return Ok(zero());
        }
        e.eval(|ev| Ok(ev.direct(&w, &self.ket, &self.bra)))
    }

    /// `<A>` as the Pfaffian of two-point values divided by `overlap^{n/2 - 1}`.
    pub fn n_point_wick(&self, a: &OperatorString) -> Result<C64> {
        let w = self.vectors(a)?;
        let e = self.engine()?;
        if self.parity_vanishes(a.len()) {
            return Ok(zero());
        }
        e.eval(|ev| ev.wick(&w, &self.ket, &self.bra))
    }

    /// `<A>` through the ancilla embedding: `c_j -> theta c_j` with `theta = c_0^dag - c_0`,
    /// so an odd string gains one leading `theta`.
    fn embedded_vectors(&self, a: &OperatorString) -> Result<Vec<Vec<C64>>> {
        a.check_sites(self.sites())?;
        let n = self.sites() + 1;
        let mut out = Vec::with_capacity(a.len() + 1);
        if a.is_odd() {
            let mut theta = alloc::vec![zero(); 2 * n];
            theta[0] = C64::new(-1.0, 0.0);
            theta[n] = C64::new(1.0, 0.0);
            out.push(theta);
        }
        out.extend(a.ops().iter().map(|op| ModeOperator { site: op.site + 1, dagger: op.dagger }.vector(n)));
        Ok(out)
    }

    pub fn generalized_expectation(&self, a: &OperatorString) -> Result<C64> {
        let w = self.embedded_vectors(a)?;
        self.extended.eval(|ev| Ok(ev.direct(&w, &self.ext_ket, &self.ext_bra)))
    }

    /// Sum over complete contractions into generalized two- and one-point values, each term
    /// divided by `overlap^{factors - 1}`.
    pub fn generalized_wick_expand(&self, a: &OperatorString) -> Result<WickExpansion> {
        a.check_sites(self.sites())?;
        let overlap = self.generalized_expectation(&OperatorString::default())?;
        let ops = a.ops();
        let sub = |idx: &[usize]| self.generalized_expectation(&OperatorString::new(idx.iter().map(|&k| ops[k]).collect()));
        let mut pair_cache: BTreeMap<(usize, usize), C64> = BTreeMap::new();
        let mut single_cache: BTreeMap<usize, C64> = BTreeMap::new();
        let mut terms = Vec::new();
        for contraction in contractions(a.len()) {
            let mut factors = Vec::with_capacity(contraction.factors());
            for &(i, j) in &contraction.pairs {
                let v = match pair_cache.get(&(i, j)) {
                    Some(&v) => v,
                    None => *pair_cache.entry((i, j)).or_insert(sub(&[i, j])?),
                };
                factors.push(v);
            }
            if let Some(s) = contraction.singleton {
                let v = match single_cache.get(&s) {
                    Some(&v) => v,
                    None => *single_cache.entry(s).or_insert(sub(&[s])?),
                };
                factors.push(v);
            }
            let product: C64 = factors.iter().product::<C64>() * contraction.sign;
            terms.push(WickTerm { contraction, factors, value: product });
        }
        if overlap == zero() && terms.iter().any(|t| t.contraction.factors() > 1) {
            return Err(Error::ZeroOverlap { unnormalized: terms.iter().map(|t| t.value).sum() });
        }
        let mut value = zero();
        for t in &terms {
            value += normalize(t.value, overlap, t.contraction.factors())?;
        }
        Ok(WickExpansion { terms, overlap, value })
    }
}
