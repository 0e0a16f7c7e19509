//! The oracle-equivalence suite behind `fermigauss verify`.

use std::fmt::Write as _;

use fermigauss::amplitudes::{generalized_overlap, overlap, overlap_between, Method, OverlapResult};
use fermigauss::colpa::{conjugate_modes, generalized_bbd, LinearGaussianOp};
use fermigauss::correlators::{CorrelatorContext, ModeOperator, OperatorString};
use fermigauss::gaussianops::{bbd_antinormal_along, bbd_normal_along, transfer_of, GeneratorPath, QuadraticGenerator};
use fermigauss::{Error, FockConfig, C64};
use fermigauss_fockoracle::{dense_conjugate, dense_expectation, mode_string, DenseOperator, MAX_GAUSSIAN_SITES};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::commands::Session;
use crate::oracle::{dense_five, dense_op, dense_three, element, image_operator, rel, relative};
use crate::{CliError, VerifyArgs};

/// Configuration pairs checked exhaustively up to this many sites, sampled above.
const EXHAUSTIVE_PAIRS_MAX_SITES: usize = 4;
const SAMPLED_PAIRS: usize = 128;
const CORRELATOR_CONFIGS: usize = 4;
const MAX_STRING: usize = 5;

struct Check {
    name: &'static str,
    tolerance: f64,
    worst: f64,
    cases: usize,
    skipped: usize,
    failure: Option<String>,
}

impl Check {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Self { name, tolerance, worst: 0.0, cases: 0, skipped: 0, failure: None }
    }

    fn see(&mut self, deviation: f64) {
        self.cases += 1;
        // NaN counts as a failure
        let d = if deviation.is_nan() { f64::INFINITY } else { deviation };
        self.worst = self.worst.max(d);
    }

    fn fail(&mut self, e: impl ToString) {
        self.cases += 1;
        self.failure.get_or_insert_with(|| e.to_string());
    }

    /// Records the result, skipping (not failing) on a singular block.
    fn record<T>(&mut self, r: Result<T, Error>, f: impl FnOnce(&mut Self, T)) {
        match r {
            Ok(v) => f(self, v),
            Err(Error::SingularBlock { .. }) => self.skipped += 1,
            Err(e) => self.fail(e),
        }
    }

    fn pass(&self) -> bool {
        self.failure.is_none() && self.worst <= self.tolerance
    }

    fn json(&self) -> Value {
        json!({
            "name": self.name,
            "pass": self.pass(),
            "maxDeviation": self.worst,
            "tolerance": self.tolerance,
            "cases": self.cases,
            "skipped": self.skipped,
            "failure": self.failure,
        })
    }
}

fn random_op(rng: &mut ChaCha8Rng, sites: usize, linear: bool) -> LinearGaussianOp {
    let g = QuadraticGenerator::random(sites, rng, 0.5);
    if !linear {
        return LinearGaussianOp::quadratic(g);
    }
    let mut vec = || (0..sites).map(|_| C64::new(rng.random_range(-0.5..0.5), rng.random_range(-0.5..0.5))).collect::<Vec<_>>();
    let (u, v) = (vec(), vec());
    LinearGaussianOp::new(g, u, v).expect("lengths match")
}

fn config_pairs(rng: &mut ChaCha8Rng, sites: usize) -> Vec<(FockConfig, FockConfig)> {
    if sites <= EXHAUSTIVE_PAIRS_MAX_SITES {
        let all: Vec<FockConfig> = FockConfig::all(sites).collect();
        return all.iter().flat_map(|k| all.iter().map(move |b| (k.clone(), b.clone()))).collect();
    }
    (0..SAMPLED_PAIRS).map(|_| (random_config(rng, sites), random_config(rng, sites))).collect()
}

fn random_config(rng: &mut ChaCha8Rng, sites: usize) -> FockConfig {
    FockConfig::new((0..sites).map(|_| rng.random_bool(0.5)).collect())
}

fn random_string(rng: &mut ChaCha8Rng, sites: usize, len: usize) -> OperatorString {
    OperatorString::new((0..len).map(|_| ModeOperator { site: rng.random_range(0..sites), dagger: rng.random_bool(0.5) }).collect())
}

/// Deviation of an overlap result from the dense value; magnitudes only when the sign is
/// not determined.
fn overlap_deviation(r: &OverlapResult, want: C64) -> f64 {
    if r.method == Method::CpMagnitude {
        (r.value.norm() - want.norm()).abs() / want.norm().max(1.0)
    } else {
        rel(r.value, want)
    }
}

fn dense_quadratic(g: &QuadraticGenerator) -> Result<DenseOperator, CliError> {
    Ok(dense_op(&LinearGaussianOp::quadratic(g.clone()))?)
}

pub(crate) fn run(a: &VerifyArgs, s: &mut Session) -> Result<(), CliError> {
    s.report.seed = Some(a.seed);
    let op = s.load(&a.op)?;
    let cap = a.max_sites.min(MAX_GAUSSIAN_SITES);
    let sites = op.sites();
    if sites > cap {
        return Err(CliError::Usage(format!("L = {sites} exceeds the verify cap of {cap} sites")));
    }
    s.report.method = Some("dense-oracle".into());
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let g = op.generator();
    let dense = dense_op(&op)?;
    let quadratic = op.is_quadratic();
    let mut checks = Vec::new();

    let mut c = Check::new("transfer J-orthogonality", 1e-10);
    c.record(transfer_of(g), |c, t| c.see(t.j_deviation()));
    checks.push(c);

    let dq = dense_quadratic(g)?;
    for (name, along) in [("normal reassembly", bbd_normal_along as fn(&GeneratorPath) -> Result<_, Error>), ("antinormal reassembly", bbd_antinormal_along)] {
        let mut c = Check::new(name, 1e-9);
        c.record(along(&GeneratorPath::single(g)), |c, f| match dense_three(&f) {
            Ok(d) => c.see(relative(&d, &dq)),
            Err(e) => c.fail(e),
        });
        checks.push(c);
    }

    let mut c = Check::new("five-factor reassembly", 1e-9);
    c.record(generalized_bbd(&op), |c, f| match dense_five(&f) {
        Ok(d) => c.see(relative(&d, &dense)),
        Err(e) => c.fail(e),
    });
    checks.push(c);

    let identity = LinearGaussianOp::quadratic(QuadraticGenerator::zero(sites));
    let mut direct = Check::new("overlaps", 1e-8);
    let mut regularized = Check::new("overlaps, epsilon-regularized", 1e-6);
    for (ket, bra) in config_pairs(&mut rng, sites) {
        let r = if quadratic { overlap(g, &ket, &bra) } else { generalized_overlap(&op, &identity, &ket, &bra) };
        let want = element(&dense, &ket, &bra);
        match r {
            Ok(r) if r.method == Method::EpsilonRegularized => regularized.see(overlap_deviation(&r, want)),
            r => direct.record(r, |c, r| c.see(overlap_deviation(&r, want))),
        }
    }
    checks.push(direct);
    checks.push(regularized);

    let op2 = random_op(&mut rng, sites, !quadratic);
    let dense2 = dense_op(&op2)?;
    let sandwich = &dense2.adjoint() * &dense;
    let mut c = Check::new("sandwich overlaps", 1e-8);
    let mut regularized = Check::new("sandwich overlaps, epsilon-regularized", 1e-6);
    for (ket, bra) in config_pairs(&mut rng, sites) {
        let r = if quadratic { overlap_between(g, op2.generator(), &ket, &bra) } else { generalized_overlap(&op, &op2, &ket, &bra) };
        let want = element(&sandwich, &ket, &bra);
        match r {
            Ok(r) if r.method == Method::EpsilonRegularized => regularized.see(overlap_deviation(&r, want)),
            r => c.record(r, |c, r| c.see(overlap_deviation(&r, want))),
        }
    }
    checks.push(c);
    checks.push(regularized);

    let mut direct = Check::new("correlators vs oracle", 1e-8);
    let mut expansion = Check::new("contraction expansion vs direct", 1e-8);
    for _ in 0..CORRELATOR_CONFIGS {
        let (ket, bra) = (random_config(&mut rng, sites), random_config(&mut rng, sites));
        let ctx = match CorrelatorContext::new(op.clone(), op2.clone(), ket.clone(), bra.clone()) {
            Ok(ctx) => ctx,
            Err(e) => {
                direct.fail(e);
                continue;
            }
        };
        for len in 0..=MAX_STRING {
            let string = random_string(&mut rng, sites, len);
            let ops: Vec<(usize, bool)> = string.ops().iter().map(|o| (o.site, o.dagger)).collect();
            let want = dense_expectation(&dense2, &mode_string(sites, &ops), &dense, ket.bits(), bra.bits());
            let got = if quadratic { ctx.expectation(&string) } else { ctx.generalized_expectation(&string) };
            let got = match got {
                Ok(v) => v,
                Err(e) => {
                    direct.fail(e);
                    continue;
                }
            };
            direct.see(rel(got, want));
            match ctx.generalized_wick_expand(&string) {
                Ok(x) => expansion.see(rel(x.value, got)),
                Err(Error::ZeroOverlap { .. }) => expansion.skipped += 1,
                Err(e) => expansion.fail(e),
            }
        }
    }
    checks.push(direct);
    checks.push(expansion);

    let mut c = Check::new("mode conjugation", 1e-9);
    c.record(conjugate_modes(&op), |c, nt| {
        for mu in 0..2 * sites {
            let mode = if mu < sites { (mu, false) } else { (mu - sites, true) };
            match dense_conjugate(&dense, &mode_string(sites, &[mode])) {
                Ok(want) => c.see(relative(&image_operator(&nt, mu), &want)),
                Err(e) => c.fail(e),
            }
        }
    });
    checks.push(c);

    let failed = checks.iter().filter(|c| !c.pass()).count();
    let mut table = format!("{:<40} {:>6} {:>12} {:>10} {:>7} {:>7}\n", "check", "result", "max dev", "tolerance", "cases", "skipped");
    for c in &checks {
        let status = if c.pass() { "PASS" } else { "FAIL" };
        let _ = writeln!(table, "{:<40} {:>6} {:>12.3e} {:>10.0e} {:>7} {:>7}", c.name, status, c.worst, c.tolerance, c.cases, c.skipped);
        if let Some(f) = &c.failure {
            let _ = writeln!(table, "    {f}");
        }
    }
    s.stderr.push_str(&table);
    s.report.results = json!({
        "L": sites,
        "checks": checks.iter().map(Check::json).collect::<Vec<_>>(),
        "passed": checks.len() - failed,
        "failed": failed,
    });
    if failed > 0 {
        return Err(CliError::VerifyFailed { failed });
    }
    Ok(())
}
