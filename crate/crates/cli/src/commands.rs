use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use fermigauss::amplitudes::{
    overlap_epsilon_path, overlap_magnitude_cp_path, overlap_path, EpsilonReport, EpsilonSchedule, Method, OverlapOptions, OverlapResult,
};
use fermigauss::colpa::{embed, embedded_configs, generalized_bbd, GeneralizedFactored, LinearGaussianOp};
use fermigauss::correlators::{CorrelatorContext, OperatorString, WickExpansion};
use fermigauss::gaussianops::{
    bbd_antinormal_along, bbd_normal_along, compose_generators, cp_scan, cp_transform, transfer_of, Block, CpScan, FactoredGaussian, GeneratorPath,
    PrefactorRule, QuadraticGenerator, ScanMode, SiteSubset,
};
use fermigauss::{Error, FockConfig, C64};
use fermigauss_fockoracle::{dense_expectation, mode_string, DenseOperator};
use serde_json::{json, Value};

use crate::format::{cx, load_operator, matrix, matrix_pairs, vector, Loaded, OperatorFile};
use crate::report::{ErrorReport, RunReport};
use crate::{oracle, verify, CliError, Command, ComposeArgs, CorrelateArgs, CpScanArgs, DecomposeArgs, Form, Outcome, OverlapArgs, StateArgs};

/// Deviation allowed for `--verify` on a Pfaffian or magnitude result.
const VERIFY_TOL: f64 = 1e-8;
/// Same for epsilon-extrapolated results.
const VERIFY_TOL_EPSILON: f64 = 1e-6;
/// Suggestions listed with a singular-block error.
const MAX_SUGGESTIONS: usize = 16;

pub(crate) struct Session {
    pub report: RunReport,
    /// Where the report goes; stdout when `None`.
    report_path: Option<PathBuf>,
    artifact: Option<(PathBuf, String)>,
    pub stderr: String,
    details: Value,
}

impl Session {
    fn new(args: Vec<String>) -> Self {
        Self { report: RunReport::new(args), report_path: None, artifact: None, stderr: String::new(), details: Value::Null }
    }

    pub(crate) fn load(&mut self, path: &Path) -> Result<LinearGaussianOp, CliError> {
        let Loaded { op, digest } = load_operator(path)?;
        self.report.inputs.push(digest);
        Ok(op)
    }

    fn diagnostic(&mut self, key: &str, value: Value) {
        if let Value::Object(map) = &mut self.report.diagnostics {
            map.insert(key.to_string(), value);
        }
    }
}

pub(crate) fn dispatch(command: Command, args: Vec<String>) -> Outcome {
    let mut s = Session::new(args);
    let result = match command {
        Command::Decompose(a) => decompose(&a, &mut s),
        Command::Compose(a) => compose(&a, &mut s),
        Command::Overlap(a) => overlap(&a, &mut s),
        Command::Correlate(a) => correlate(&a, false, &mut s),
        Command::Wick(a) => correlate(&a, true, &mut s),
        Command::CpScan(a) => cp_scan_cmd(&a, &mut s),
        Command::Verify(a) => {
            s.report_path = a.output.clone();
            verify::run(&a, &mut s)
        }
    };
    let mut code = 0;
    if let Err(e) = &result {
        code = e.exit_code();
        let mut details = std::mem::take(&mut s.details);
        if let CliError::Lib(Error::ZeroOverlap { unnormalized }) = e {
            details = json!({ "unnormalized": cx(*unnormalized) });
        }
        s.report.error = Some(ErrorReport { kind: e.kind(), exit_code: code, message: e.to_string(), details });
        let _ = writeln!(s.stderr, "error: {e}");
    } else if let Some((path, text)) = &s.artifact {
        if let Err(e) = fs::write(path, text) {
            let e = CliError::Io { path: path.display().to_string(), source: e };
            code = e.exit_code();
            s.report.error = Some(ErrorReport { kind: e.kind(), exit_code: code, message: e.to_string(), details: Value::Null });
            let _ = writeln!(s.stderr, "error: {e}");
        }
    }
    let text = s.report.to_json();
    let mut stdout = String::new();
    match &s.report_path {
        Some(path) => {
            if let Err(e) = fs::write(path, &text) {
                let _ = writeln!(s.stderr, "error: {}: {e}", path.display());
                code = 3;
            }
        }
        None => stdout = text,
    }
    Outcome { code, stdout, stderr: s.stderr }
}

pub(crate) fn rule_name(r: PrefactorRule) -> &'static str {
    match r {
        PrefactorRule::PrincipalLog => "principal-log",
        PrefactorRule::Continuation => "continuation",
        PrefactorRule::PrincipalRoot => "principal-root",
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Pfaffian => "pfaffian",
        Method::EpsilonRegularized => "epsilon-regularized",
        Method::CpMagnitude => "cp-magnitude",
    }
}

fn schedule_json(s: &EpsilonSchedule) -> Value {
    json!({ "epsilon": s.epsilon, "ratio": s.ratio, "seed": s.seed, "tolerance": s.tolerance })
}

fn epsilon_json(r: &EpsilonReport) -> Value {
    json!({
        "schedule": schedule_json(&r.schedule),
        "samples": r.samples.iter().map(|&z| cx(z)).collect::<Vec<_>>(),
        "coarse": cx(r.coarse),
        "fine": cx(r.fine),
        "relativeGap": r.relative_gap,
    })
}

fn schedule(seed: u64) -> EpsilonSchedule {
    EpsilonSchedule { seed, ..EpsilonSchedule::default() }
}

fn parse_subset(sites: usize, text: &str) -> Result<SiteSubset, CliError> {
    let labels = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<usize>().map_err(|_| CliError::Usage(format!("bad site label {t:?} in --cp"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SiteSubset::from_labels(sites, &labels)?)
}

fn subset_labels(s: &SiteSubset) -> Vec<usize> {
    s.members().iter().map(|k| k + 1).collect()
}

/// Subsets whose canonical permutation makes `block` invertible, in scan order.
fn suggestions(scan: &CpScan, block: Block) -> Vec<String> {
    scan.entries
        .iter()
        .filter(|e| match block {
            Block::T22 => e.t22_invertible(),
            Block::T11 => e.t11_invertible(),
        })
        .take(MAX_SUGGESTIONS)
        .map(|e| e.subset.to_string())
        .collect()
}

fn singular_details(s: &mut Session, g: &QuadraticGenerator, e: &CliError) {
    let CliError::Lib(Error::SingularBlock { block, rcond }) = e else { return };
    let Ok(t) = transfer_of(g) else { return };
    let list = suggestions(&cp_scan(&t), *block);
    let _ = writeln!(
        s.stderr,
        "block {block:?} is singular; canonical permutations that restore it: {}",
        if list.is_empty() { "none".into() } else { list.join(" ") }
    );
    s.details = json!({ "block": format!("{block:?}"), "rcond": rcond, "cpSuggestions": list });
}

fn factored_json(f: &FactoredGaussian) -> Value {
    json!({
        "ordering": format!("{:?}", f.ordering()).to_lowercase(),
        "prefactor": cx(f.prefactor().value),
        "prefactorRule": rule_name(f.prefactor().rule),
        "signCertain": !f.prefactor().sign_ambiguous(),
        "X": matrix(f.x()),
        "Y": f.y().map(matrix),
        "expY": matrix(f.exp_y()),
        "Z": matrix(f.z()),
        "rcond": f.rcond(),
    })
}

fn generalized_json(f: &GeneralizedFactored) -> Value {
    json!({
        "ordering": "generalized",
        "prefactor": cx(f.prefactor().value),
        "prefactorRule": rule_name(f.prefactor().rule),
        "signCertain": !f.prefactor().sign_ambiguous(),
        "q": vector(f.q()),
        "X": matrix(f.x()),
        "Y": f.y().map(matrix),
        "expY": matrix(f.exp_y()),
        "Z": matrix(f.z()),
        "p": vector(f.p()),
        "rcond": f.rcond(),
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

fn decompose(a: &DecomposeArgs, s: &mut Session) -> Result<(), CliError> {
    let mut op = s.load(&a.input)?;
    let sites = op.sites();
    if a.form != Form::Generalized && !op.is_quadratic() {
        return Err(CliError::Usage("operator has linear parts; use --form generalized".into()));
    }
    let mut cp = None;
    if let Some(text) = &a.cp {
        if !op.is_quadratic() {
            return Err(CliError::Usage("--cp applies to quadratic operators only".into()));
        }
        let subset = parse_subset(sites, text)?;
        let (g, _) = cp_transform(op.generator(), &subset)?;
        op = LinearGaussianOp::quadratic(g);
        cp = Some(subset);
    }
    let mut epsilon = None;
    if a.epsilon {
        let sch = schedule(a.seed);
        let g = op.generator().perturbed(sch.epsilon, &sch.direction(sites))?;
        op = LinearGaussianOp::new(g, op.u().to_vec(), op.v().to_vec())?;
        s.report.seed = Some(a.seed);
        s.diagnostic("epsilonSchedule", schedule_json(&sch));
        epsilon = Some(sch.epsilon);
    }
    let path = GeneratorPath::single(op.generator());
    let factors = match a.form {
        Form::Normal => bbd_normal_along(&path).map(|f| factored_json(&f)),
        Form::Antinormal => bbd_antinormal_along(&path).map(|f| factored_json(&f)),
        Form::Generalized => generalized_bbd(&op).map(|f| generalized_json(&f)),
    }
    .map_err(CliError::from);
    let mut factors = match factors {
        Ok(f) => f,
        Err(e) => {
            singular_details(s, op.generator(), &e);
            return Err(e);
        }
    };
    s.report.method = Some(format!("{:?}", a.form).to_lowercase());
    for key in ["rcond", "prefactorRule", "signCertain"] {
        s.diagnostic(key, factors[key].clone());
    }
    if let Value::Object(map) = &mut factors {
        map.insert("L".into(), json!(sites));
        map.insert("cp".into(), json!(cp.as_ref().map(subset_labels)));
        map.insert("epsilon".into(), json!(epsilon));
    }
    if let Some(path) = &a.output {
        s.artifact = Some((path.clone(), pretty(&factors)));
    }
    s.report.results = factors;
    Ok(())
}

fn compose(a: &ComposeArgs, s: &mut Session) -> Result<(), CliError> {
    let ops = [s.load(&a.inputs[0])?, s.load(&a.inputs[1])?];
    if ops.iter().any(|op| !op.is_quadratic()) {
        return Err(CliError::Usage("compose takes quadratic operators (no u, v)".into()));
    }
    if ops[0].sites() != ops[1].sites() {
        return Err(Error::SiteMismatch { expected: ops[0].sites(), found: ops[1].sites() }.into());
    }
    let c = compose_generators(&[ops[0].generator(), ops[1].generator()])?;
    let sites = ops[0].sites();
    s.report.method = Some(if c.generator.is_some() { "transfer+log" } else { "transfer" }.into());
    s.diagnostic("jDeviation", json!(c.transfer.j_deviation()));
    s.diagnostic("generatorAvailable", json!(c.generator.is_some()));
    let doc = match &c.generator {
        Some(g) => {
            let mut f = OperatorFile::from_op(&LinearGaussianOp::quadratic(g.clone()));
            f.transfer = Some(matrix_pairs(c.transfer.matrix()));
            serde_json::to_value(&f).expect("operator file serializes")
        }
        None => json!({ "L": sites, "T": matrix(c.transfer.matrix()) }),
    };
    if c.generator.is_none() {
        let _ = writeln!(s.stderr, "note: the product has no principal logarithm; only T is written");
    }
    if let Some(path) = &a.output {
        s.artifact = Some((path.clone(), pretty(&doc)));
    }
    s.report.results = doc;
    Ok(())
}

struct States {
    op1: LinearGaussianOp,
    op2: LinearGaussianOp,
    ket: FockConfig,
    bra: FockConfig,
}

fn load_states(a: &StateArgs, s: &mut Session) -> Result<States, CliError> {
    s.report_path = a.output.clone();
    s.report.seed = Some(a.seed);
    let op1 = s.load(&a.op)?;
    let op2 = match &a.op2 {
        Some(p) => s.load(p)?,
        None => LinearGaussianOp::quadratic(QuadraticGenerator::zero(op1.sites())),
    };
    if op2.sites() != op1.sites() {
        return Err(Error::SiteMismatch { expected: op1.sites(), found: op2.sites() }.into());
    }
    let ket = FockConfig::parse(&a.ket)?;
    let bra = FockConfig::parse(&a.bra)?;
    for c in [&ket, &bra] {
        if c.sites() != op1.sites() {
            return Err(Error::SiteMismatch { expected: op1.sites(), found: c.sites() }.into());
        }
    }
    Ok(States { op1, op2, ket, bra })
}

fn dense_pair(st: &States) -> Result<(DenseOperator, DenseOperator), CliError> {
    Ok((oracle::dense_op(&st.op1)?, oracle::dense_op(&st.op2)?))
}

fn overlap(a: &OverlapArgs, s: &mut Session) -> Result<(), CliError> {
    let st = load_states(&a.state, s)?;
    let quadratic = st.op1.is_quadratic() && st.op2.is_quadratic();
    let (path, ket, bra) = if quadratic {
        let path = match &a.state.op2 {
            Some(_) => GeneratorPath::sandwich(st.op1.generator(), st.op2.generator())?,
            None => GeneratorPath::single(st.op1.generator()),
        };
        (path, st.ket.clone(), st.bra.clone())
    } else {
        let path = GeneratorPath::sandwich(embed(&st.op1).generator(), embed(&st.op2).generator())?;
        let (k, b) = embedded_configs(&st.ket, &st.bra);
        (path, k, b)
    };
    let sch = schedule(a.state.seed);
    let result = if a.epsilon {
        overlap_epsilon_path(&path, &ket, &bra, &sch)
    } else if a.cp_magnitude {
        overlap_magnitude_cp_path(&path, &ket, &bra)
    } else {
        overlap_path(&path, &ket, &bra, &OverlapOptions { schedule: sch, ..OverlapOptions::default() })
    };
    let r = match result {
        Ok(r) => r,
        Err(e) => {
            let e = CliError::from(e);
            if quadratic {
                if let Ok(t) = path.transfer() {
                    if let CliError::Lib(Error::SingularBlock { block, .. }) = &e {
                        s.details = json!({ "cpSuggestions": suggestions(&cp_scan(&t), *block) });
                    }
                }
            }
            return Err(e);
        }
    };
    s.report.method = Some(method_name(r.method).into());
    s.report.diagnostics = overlap_diagnostics(&r, quadratic);
    let mut results = json!({ "bra": st.bra.to_string(), "ket": st.ket.to_string(), "value": cx(r.value), "signCertain": r.sign_certain });
    if a.state.verify {
        let (d1, d2) = dense_pair(&st)?;
        let mut want = oracle::element(&(&d2.adjoint() * &d1), &st.ket, &st.bra);
        if r.method == Method::CpMagnitude {
            want = C64::new(want.norm(), 0.0);
        }
        let tol = if r.method == Method::EpsilonRegularized { VERIFY_TOL_EPSILON } else { VERIFY_TOL };
        let dev = oracle::rel(r.value, want);
        results["oracle"] = json!({ "value": cx(want), "deviation": dev, "tolerance": tol, "pass": dev <= tol });
        let _ = writeln!(s.stderr, "oracle deviation {dev:.3e} (tolerance {tol:e})");
        s.report.results = results;
        if dev > tol {
            return Err(CliError::VerifyFailed { failed: 1 });
        }
        return Ok(());
    }
    s.report.results = results;
    Ok(())
}

fn overlap_diagnostics(r: &OverlapResult, quadratic: bool) -> Value {
    let d = &r.diagnostics;
    json!({
        "embedded": !quadratic,
        "rcond": d.rcond,
        "prefactorRule": d.prefactor_rule.map(rule_name),
        "signCertain": r.sign_certain,
        "epsilon": d.epsilon.as_ref().map(epsilon_json),
        "cpSubset": d.cp_subset.as_ref().map(subset_labels),
        "fallbackFrom": d.fallback_from.as_ref().map(|e| e.to_string()),
    })
}

fn expansion_json(x: &WickExpansion) -> Value {
    let terms: Vec<Value> = x
        .terms
        .iter()
        .map(|t| {
            json!({
                "pairs": t.contraction.pairs.iter().map(|&(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
                "singleton": t.contraction.singleton.map(|k| k + 1),
                "sign": t.contraction.sign,
                "factors": vector(&t.factors),
                "value": cx(t.value),
            })
        })
        .collect();
    Value::Array(terms)
}

fn expansion_table(a: &OperatorString, x: &WickExpansion) -> String {
    let ops = a.ops();
    let mut out = format!("{} term(s), overlap {}\n", x.terms.len(), fmt_c(x.overlap));
    for t in &x.terms {
        let mut line = String::from(if t.contraction.sign > 0.0 { "+" } else { "-" });
        for &(i, j) in &t.contraction.pairs {
            let _ = write!(line, " <{} {}>", ops[i], ops[j]);
        }
        if let Some(k) = t.contraction.singleton {
            let _ = write!(line, " <{}>", ops[k]);
        }
        let _ = writeln!(out, "{line:<40} {}", fmt_c(t.value));
    }
    out
}

fn fmt_c(z: C64) -> String {
    format!("{:.17e}{:+.17e}i", z.re, z.im)
}

fn correlate(a: &CorrelateArgs, force_expand: bool, s: &mut Session) -> Result<(), CliError> {
    let expand = a.expand || force_expand;
    let st = load_states(&a.state, s)?;
    let string = OperatorString::parse(&a.string)?;
    string.check_sites(st.op1.sites())?;
    let sch = schedule(a.state.seed);
    let ctx = CorrelatorContext::with_schedule(st.op1.clone(), st.op2.clone(), st.ket.clone(), st.bra.clone(), sch)?;
    s.diagnostic("quadratic", json!(ctx.is_quadratic()));
    s.diagnostic("regularized", json!(ctx.is_regularized()));
    if ctx.is_regularized() {
        s.diagnostic("epsilonSchedule", schedule_json(&sch));
    }
    s.report.method = Some(if expand { "contraction-expansion" } else { "direct" }.into());
    let (value, overlap, terms) = if expand {
        let x = ctx.generalized_wick_expand(&string)?;
        let _ = write!(s.stderr, "{}", expansion_table(&string, &x));
        (x.value, x.overlap, Some(expansion_json(&x)))
    } else {
        let v = if ctx.is_quadratic() { ctx.expectation(&string)? } else { ctx.generalized_expectation(&string)? };
        (v, ctx.overlap()?, None)
    };
    let normalized = (overlap != C64::new(0.0, 0.0)).then(|| cx(value / overlap));
    let mut results = json!({
        "string": string.to_string(),
        "bra": st.bra.to_string(),
        "ket": st.ket.to_string(),
        "value": cx(value),
        "overlap": cx(overlap),
        "normalized": normalized,
    });
    if let Some(t) = terms {
        results["terms"] = t;
    }
    if a.state.verify {
        let (d1, d2) = dense_pair(&st)?;
        let ops: Vec<(usize, bool)> = string.ops().iter().map(|o| (o.site, o.dagger)).collect();
        let want = dense_expectation(&d2, &mode_string(st.op1.sites(), &ops), &d1, st.ket.bits(), st.bra.bits());
        let tol = if ctx.is_regularized() { VERIFY_TOL_EPSILON } else { VERIFY_TOL };
        let dev = oracle::rel(value, want);
        results["oracle"] = json!({ "value": cx(want), "deviation": dev, "tolerance": tol, "pass": dev <= tol });
        let _ = writeln!(s.stderr, "oracle deviation {dev:.3e} (tolerance {tol:e})");
        s.report.results = results;
        return if dev > tol { Err(CliError::VerifyFailed { failed: 1 }) } else { Ok(()) };
    }
    s.report.results = results;
    Ok(())
}

fn cp_scan_cmd(a: &CpScanArgs, s: &mut Session) -> Result<(), CliError> {
    s.report_path = a.output.clone();
    let op = s.load(&a.op)?;
    let t = transfer_of(op.generator())?;
    let scan = cp_scan(&t);
    s.report.method = Some(
        match scan.mode {
            ScanMode::Exhaustive => "exhaustive",
            ScanMode::Greedy => "greedy",
        }
        .into(),
    );
    if !op.is_quadratic() {
        s.diagnostic("note", json!("scan of the quadratic part; linear terms do not enter T11, T22"));
    }
    let mut table = format!("{:<16} {:>24} {:>24}\n", "S", "rcond T22", "rcond T11");
    let entries: Vec<Value> = scan
        .entries
        .iter()
        .map(|e| {
            let mark = |ok: bool| if ok { "" } else { " singular" };
            let _ = writeln!(
                table,
                "{:<16} {:>24} {:>24}",
                e.subset.to_string(),
                format!("{:.3e}{}", e.rcond_t22, mark(e.t22_invertible())),
                format!("{:.3e}{}", e.rcond_t11, mark(e.t11_invertible()))
            );
            json!({
                "subset": subset_labels(&e.subset),
                "rcondT22": e.rcond_t22,
                "rcondT11": e.rcond_t11,
                "t22Invertible": e.t22_invertible(),
                "t11Invertible": e.t11_invertible(),
            })
        })
        .collect();
    s.stderr.push_str(&table);
    s.report.results = json!({
        "L": op.sites(),
        "entries": entries,
        "firstT22Invertible": scan.first_t22_invertible().map(|e| subset_labels(&e.subset)),
    });
    Ok(())
}
