use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use fermigauss_numkernel::C64;

use super::kernel::OverlapKernel;
use crate::colpa::{embed, embedded_configs, LinearGaussianOp};
use crate::config::FockConfig;
use crate::error::{Error, Result};
use crate::gaussianops::{bbd_normal, cp_scan, GeneratorPath, PrefactorRule, QuadraticGenerator, SiteSubset};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Pfaffian,
    EpsilonRegularized,
    CpMagnitude,
}

/// Two-level Richardson schedule: samples at `eps`, `ratio eps`, `ratio^2 eps` along a
/// seeded random admissible direction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsilonSchedule {
    pub epsilon: f64,
    pub ratio: f64,
    pub seed: u64,
    /// Largest accepted relative gap between the two extrapolants.
    pub tolerance: f64,
}

impl Default for EpsilonSchedule {
    fn default() -> Self {
        Self { epsilon: 1e-4, ratio: 0.5, seed: 0x5eed, tolerance: 1e-6 }
    }
}

impl EpsilonSchedule {
    pub fn direction(&self, sites: usize) -> QuadraticGenerator {
        QuadraticGenerator::random(sites, &mut ChaCha8Rng::seed_from_u64(self.seed), 1.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EpsilonReport {
    pub schedule: EpsilonSchedule,
    pub samples: [C64; 3],
    /// Extrapolant from the first two samples; the returned value.
    pub coarse: C64,
    /// Extrapolant from the last two samples.
    pub fine: C64,
    pub relative_gap: f64,
}

/// Richardson extrapolation of `f(eps) -> f(0)` for an `f` analytic in `eps`.
pub fn richardson(schedule: &EpsilonSchedule, mut f: impl FnMut(f64) -> Result<C64>) -> Result<(C64, EpsilonReport)> {
    let (e, r) = (schedule.epsilon, schedule.ratio);
    let samples = [f(e)?, f(e * r)?, f(e * r * r)?];
    let ext = |a: C64, b: C64| (b - a * r) / (1.0 - r);
    let coarse = ext(samples[0], samples[1]);
    let fine = ext(samples[1], samples[2]);
    let relative_gap = (coarse - fine).norm() / coarse.norm().max(1.0);
    if relative_gap > schedule.tolerance {
        return Err(Error::ExtrapolationDisagreement { relative: relative_gap });
    }
    Ok((coarse, EpsilonReport { schedule: *schedule, samples, coarse, fine, relative_gap }))
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Diagnostics {
    pub rcond: Option<f64>,
    pub prefactor_rule: Option<PrefactorRule>,
    pub epsilon: Option<EpsilonReport>,
    pub cp_subset: Option<SiteSubset>,
    /// Why the direct method was abandoned.
    pub fallback_from: Option<Error>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct OverlapResult {
    pub value: C64,
    pub method: Method,
    /// `false` only for [`Method::CpMagnitude`], which returns `|value|`.
    pub sign_certain: bool,
    pub diagnostics: Diagnostics,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OverlapOptions {
    pub schedule: EpsilonSchedule,
    pub allow_epsilon: bool,
    pub allow_cp: bool,
}

impl Default for OverlapOptions {
    fn default() -> Self {
        Self { schedule: EpsilonSchedule::default(), allow_epsilon: true, allow_cp: true }
    }
}

fn check_sites(sites: usize, ket: &FockConfig, bra: &FockConfig) -> Result<()> {
    for c in [ket, bra] {
        if c.sites() != sites {
            return Err(Error::SiteMismatch { expected: sites, found: c.sites() });
        }
    }
    Ok(())
}

fn exact_zero() -> OverlapResult {
    OverlapResult { value: C64::new(0.0, 0.0), method: Method::Pfaffian, sign_certain: true, diagnostics: Diagnostics::default() }
}

/// `<J| F_M |I>` with the default fallback chain.
pub fn overlap(g: &QuadraticGenerator, ket: &FockConfig, bra: &FockConfig) -> Result<OverlapResult> {
    overlap_path(&GeneratorPath::single(g), ket, bra, &OverlapOptions::default())
}

/// `<M2(J) | M1(I)> = <J| F_{M2}^dag F_{M1} |I>`, composed at the transfer level.
pub fn overlap_between(g1: &QuadraticGenerator, g2: &QuadraticGenerator, ket: &FockConfig, bra: &FockConfig) -> Result<OverlapResult> {
    overlap_path(&GeneratorPath::sandwich(g1, g2)?, ket, bra, &OverlapOptions::default())
}

/// Pfaffian formula, then epsilon regularization, then the canonical-permutation magnitude.
pub fn overlap_path(path: &GeneratorPath, ket: &FockConfig, bra: &FockConfig, opts: &OverlapOptions) -> Result<OverlapResult> {
    check_sites(path.sites(), ket, bra)?;
    if ket.is_odd() != bra.is_odd() {
        return Ok(exact_zero());
    }
    let direct = match OverlapKernel::along(path) {
        Ok(k) => {
            let diagnostics = Diagnostics { rcond: Some(k.rcond()), prefactor_rule: Some(k.prefactor().rule), ..Default::default() };
            let sign_certain = !k.prefactor().sign_ambiguous();
            return Ok(OverlapResult { value: k.amplitude(ket, bra), method: Method::Pfaffian, sign_certain, diagnostics });
        }
        Err(e @ Error::SingularBlock { .. }) => e,
        Err(e) => return Err(e),
    };
    let mut last = direct.clone();
    if opts.allow_epsilon {
        match overlap_epsilon_path(path, ket, bra, &opts.schedule) {
            Ok(mut r) => {
                r.diagnostics.fallback_from = Some(direct);
                return Ok(r);
            }
            Err(e) => last = e,
        }
    }
    if opts.allow_cp {
        let mut r = overlap_magnitude_cp_path(path, ket, bra)?;
        r.diagnostics.fallback_from = Some(direct);
        return Ok(r);
    }
    Err(last)
}

pub fn overlap_epsilon(g: &QuadraticGenerator, ket: &FockConfig, bra: &FockConfig, schedule: &EpsilonSchedule) -> Result<OverlapResult> {
    overlap_epsilon_path(&GeneratorPath::single(g), ket, bra, schedule)
}

/// Extrapolates `eps -> 0` of the overlap with the last path factor replaced by `G + eps D`.
pub fn overlap_epsilon_path(path: &GeneratorPath, ket: &FockConfig, bra: &FockConfig, schedule: &EpsilonSchedule) -> Result<OverlapResult> {
    check_sites(path.sites(), ket, bra)?;
    if ket.is_odd() != bra.is_odd() {
        return Ok(exact_zero());
    }
    let d = schedule.direction(path.sites());
    let mut worst_rcond = f64::INFINITY;
    let (value, report) = richardson(schedule, |eps| {
        let k = OverlapKernel::along(&path.perturb_last(eps, &d)?)?;
        worst_rcond = worst_rcond.min(k.rcond());
        Ok(k.amplitude(ket, bra))
    })?;
    let diagnostics = Diagnostics { rcond: Some(worst_rcond), epsilon: Some(report), ..Default::default() };
    Ok(OverlapResult { value, method: Method::EpsilonRegularized, sign_certain: true, diagnostics })
}

pub fn overlap_magnitude_cp(g: &QuadraticGenerator, ket: &FockConfig, bra: &FockConfig) -> Result<OverlapResult> {
    overlap_magnitude_cp_path(&GeneratorPath::single(g), ket, bra)
}

/// `|<J|F|I>|` from the first subset `S` (by size, then lexicographically) whose permuted
/// `T22` is invertible, using the configurations flipped on `S`.
pub fn overlap_magnitude_cp_path(path: &GeneratorPath, ket: &FockConfig, bra: &FockConfig) -> Result<OverlapResult> {
    check_sites(path.sites(), ket, bra)?;
    if ket.is_odd() != bra.is_odd() {
        return Ok(exact_zero());
    }
    let t = path.transfer()?;
    let scan = cp_scan(&t);
    let entry = scan.first_t22_invertible().ok_or(Error::UnsupportedInstance)?;
    magnitude_with_subset(path, ket, bra, &entry.subset)
}

pub fn magnitude_with_subset(path: &GeneratorPath, ket: &FockConfig, bra: &FockConfig, s: &SiteSubset) -> Result<OverlapResult> {
    let t = crate::gaussianops::cp_transform_transfer(&path.transfer()?, s)?;
    let k = OverlapKernel::from_factors(&bbd_normal(&t)?)?;
    let (kt, bt) = (ket.flipped(s.members()), bra.flipped(s.members()));
    let value = C64::new(k.amplitude(&kt, &bt).norm(), 0.0);
    let diagnostics = Diagnostics { rcond: Some(k.rcond()), cp_subset: Some(s.clone()), ..Default::default() };
    Ok(OverlapResult { value, method: Method::CpMagnitude, sign_certain: false, diagnostics })
}

/// `<(M2,u2,v2)(J) | (M1,u1,v1)(I)>` through the ancilla embedding; no parity selection.
pub fn generalized_overlap(op1: &LinearGaussianOp, op2: &LinearGaussianOp, ket: &FockConfig, bra: &FockConfig) -> Result<OverlapResult> {
    generalized_overlap_with(op1, op2, ket, bra, &OverlapOptions::default())
}

pub fn generalized_overlap_with(
    op1: &LinearGaussianOp,
    op2: &LinearGaussianOp,
    ket: &FockConfig,
    bra: &FockConfig,
    opts: &OverlapOptions,
) -> Result<OverlapResult> {
    if op1.sites() != op2.sites() {
        return Err(Error::SiteMismatch { expected: op1.sites(), found: op2.sites() });
    }
    check_sites(op1.sites(), ket, bra)?;
    let path = embedded_sandwich(op1, op2)?;
    let (k, b) = embedded_configs(ket, bra);
    overlap_path(&path, &k, &b, opts)
}

/// `F'_2^dag F'_1` on `L + 1` sites.
pub(crate) fn embedded_sandwich(op1: &LinearGaussianOp, op2: &LinearGaussianOp) -> Result<GeneratorPath> {
    GeneratorPath::sandwich(embed(op1).generator(), embed(op2).generator())
}
