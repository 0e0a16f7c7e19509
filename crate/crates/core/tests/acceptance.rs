//! One line per acceptance criterion; exits nonzero if any criterion fails.

mod common;

use std::f64::consts::FRAC_PI_2;
use std::process::ExitCode;

use common::*;
use fermigauss::amplitudes::{
    generalized_overlap, overlap, overlap_between, overlap_epsilon, pair_state_amplitude, pair_state_norm, pair_state_norm_squared, EpsilonSchedule,
    OverlapKernel,
};
use fermigauss::colpa::{
    conjugate_modes, embed, embedded_configs, factor_orderings, factor_orderings_via_embedding, generalized_bbd, orderings_from_matrix, EmbeddedTransfer,
    LinearGaussianOp, NonlinearTransform, SingleModeOp,
};
use fermigauss::correlators::{CorrelatorContext, ModeOperator, OperatorString};
use fermigauss::gaussianops::{bbd_antinormal_along, bbd_normal_along, cp_scan, transfer_of, GeneratorPath, QuadraticGenerator};
use fermigauss::numkernel::{det, expm};
use fermigauss::{ComplexMatrix, FockConfig, C64};
use fermigauss_fockoracle::{basis_index, dense_conjugate, dense_exponential, fock_state, mode_string, DenseOperator, Exponent};
use rand::Rng;

/// Largest deviation seen, against a tolerance.
struct Worst {
    tol: f64,
    max: f64,
    ok: bool,
}

impl Worst {
    fn new(tol: f64) -> Self {
        Self { tol, max: 0.0, ok: true }
    }

    fn see(&mut self, dev: f64) {
        if dev.is_nan() || dev > self.tol {
            self.ok = false;
        }
        if dev.is_nan() || dev > self.max {
            self.max = dev;
        }
    }

    fn exact(&mut self, holds: bool) {
        self.ok &= holds;
    }

    fn report(&self, what: &str) -> String {
        format!("{what} max {:.2e} (tol {:.0e})", self.max, self.tol)
    }
}

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(parts: &[(&Worst, &str)]) -> Outcome {
    Outcome { pass: parts.iter().all(|(w, _)| w.ok), detail: parts.iter().map(|(w, name)| w.report(name)).collect::<Vec<_>>().join("; ") }
}

fn all_modes(sites: usize) -> Vec<ModeOperator> {
    (0..sites).flat_map(|k| [ModeOperator::annihilation(k), ModeOperator::creation(k)]).collect()
}

fn random_string(r: &mut impl Rng, sites: usize, len: usize) -> OperatorString {
    OperatorString::new((0..len).map(|_| ModeOperator { site: r.random_range(0..sites), dagger: r.random_bool(0.5) }).collect())
}

fn oracle_expectation(ctx: &CorrelatorContext, a: &OperatorString) -> C64 {
    let ops: Vec<(usize, bool)> = a.ops().iter().map(|o| (o.site, o.dagger)).collect();
    let l = ctx.sites();
    fermigauss_fockoracle::dense_expectation(&dense_op(ctx.op2()), &mode_string(l, &ops), &dense_op(ctx.op1()), ctx.ket().bits(), ctx.bra().bits())
}

fn config_pairs(r: &mut impl Rng, sites: usize) -> Vec<(FockConfig, FockConfig)> {
    if sites <= 3 {
        FockConfig::all(sites).flat_map(|k| FockConfig::all(sites).map(move |b| (k.clone(), b))).collect()
    } else {
        (0..24).map(|_| (FockConfig::from_mask(sites, r.random()), FockConfig::from_mask(sites, r.random()))).collect()
    }
}

fn criterion_1() -> Outcome {
    let mut w = Worst::new(1e-12);
    for a in [0.3, 0.7, 1.2] {
        w.see(transfer_of(&example_generator(a)).unwrap().matrix().max_diff(&example_transfer(a)));
    }
    outcome(&[(&w, "|T - printed|")])
}

fn criterion_2() -> Outcome {
    let g = example_generator(0.7);
    let table = printed_table(0.7);
    let f = dense_quadratic(&g);
    let (mut printed, mut oracle) = (Worst::new(1e-10), Worst::new(1e-10));
    for p in 0..8 {
        for q in 0..8 {
            let (ket, bra) = (table_config(q), table_config(p));
            let v = overlap(&g, &ket, &bra).unwrap().value;
            printed.see((v - table[(p, q)]).norm());
            oracle.see((v - element(&f, &ket, &bra)).norm());
        }
    }
    outcome(&[(&printed, "vs printed"), (&oracle, "vs oracle")])
}

fn criterion_3() -> Outcome {
    let g = example_generator(FRAC_PI_2);
    let table = printed_table(FRAC_PI_2);
    let mut eps = Worst::new(1e-6);
    for p in 0..8 {
        for q in 0..8 {
            let v = overlap_epsilon(&g, &table_config(q), &table_config(p), &EpsilonSchedule::default()).unwrap().value;
            eps.see((v - table[(p, q)]).norm());
        }
    }
    let mut pattern = Worst::new(0.0);
    let scan = cp_scan(&transfer_of(&g).unwrap());
    pattern.exact(scan.entries.len() == 8);
    for e in &scan.entries {
        let good = matches!(e.subset.members(), [0] | [2] | [0, 1] | [1, 2]);
        pattern.exact(e.t22_invertible() == good && e.t11_invertible() == good);
    }
    let mut o = outcome(&[(&eps, "epsilon vs printed")]);
    o.pass &= pattern.ok;
    o.detail += &format!("; CP invertibility pattern {}", if pattern.ok { "exact" } else { "differs" });
    o
}

fn criterion_4() -> Outcome {
    let a = 0.7f64;
    let g = example_generator(a);
    let path = GeneratorPath::single(&g);
    let (sec, tan, lc, cot) = (1.0 / a.cos(), a.tan(), a.cos().ln(), 1.0 / (a / 2.0).tan());
    let mut coef = Worst::new(1e-10);
    let n = bbd_normal_along(&path).unwrap();
    let (x, z, y) = (n.x_antisymmetric(), n.z_antisymmetric(), n.y().unwrap().clone());
    for (got, want) in [
        (x[(0, 1)], 1.0 - sec),
        (x[(0, 2)], tan),
        (x[(1, 2)], 0.0),
        (z[(0, 2)], tan),
        (z[(1, 2)], 1.0 - sec),
        (z[(0, 1)], 0.0),
        (y[(0, 0)], -lc),
        (y[(2, 2)], -lc),
        (y[(0, 1)], cot * lc),
        (y[(1, 2)], cot * lc),
        (y[(0, 2)], cot * cot * lc + 2.0),
        (n.prefactor().value, a.cos()),
    ] {
        coef.see((got - c(want)).norm());
    }
    let an = bbd_antinormal_along(&path).unwrap();
    let (x, z, y) = (an.x_antisymmetric(), an.z_antisymmetric(), an.y().unwrap().clone());
    for (got, want) in [
        (x[(1, 2)], sec - 1.0),
        (x[(0, 2)], tan),
        (x[(0, 1)], 0.0),
        (z[(0, 1)], sec - 1.0),
        (z[(0, 2)], tan),
        (z[(1, 2)], 0.0),
        (y[(0, 0)], lc),
        (y[(2, 2)], lc),
        (y[(0, 1)], cot * lc),
        (y[(1, 2)], cot * lc),
        (y[(0, 2)], -(cot * cot * lc + 2.0)),
        (an.prefactor().value, sec),
    ] {
        coef.see((got - c(want)).norm());
    }
    let dense = dense_quadratic(&g);
    let mut reassembly = Worst::new(1e-9);
    reassembly.see(relative(&dense_three(&n), &dense));
    reassembly.see(relative(&dense_three(&an), &dense));
    reassembly.see(relative(&dense_five(&generalized_bbd(&LinearGaussianOp::quadratic(g)).unwrap()), &dense));
    outcome(&[(&coef, "closed forms"), (&reassembly, "dense reassembly")])
}

fn criterion_5() -> Outcome {
    let grid = [-1.0f64, 0.0, 1.0];
    let (mut closed, mut dense_w) = (Worst::new(1e-10), Worst::new(1e-10));
    let mut points = 0;
    for a in grid {
        for b in grid {
            for d in grid {
                if (4.0 * a * b + d * d).abs() < 1e-6 {
                    continue;
                }
                points += 1;
                let op = SingleModeOp::new(c(a), c(b), c(d));
                let dense = dense_op(&op.to_linear_op());
                let table = factor_orderings(&op);
                let from_dense = orderings_from_matrix(dense.matrix());
                let via = factor_orderings_via_embedding(&op).unwrap();
                for k in 0..6 {
                    for other in [&from_dense[k], &via[k]] {
                        for (x, y) in [(table[k].alpha, other.alpha), (table[k].beta, other.beta), (table[k].gamma, other.gamma)] {
                            closed.see((x - y).norm());
                        }
                    }
                    dense_w.see(table[k].matrix().max_diff(dense.matrix()));
                }
            }
        }
    }
    let mut o = outcome(&[(&closed, "closed vs dense/embedded"), (&dense_w, "2x2 reassembly")]);
    o.detail = format!("{points} grid points; {}", o.detail);
    o
}

fn criterion_6() -> Outcome {
    let (mut norm, mut det_w, mut amp) = (Worst::new(1e-9), Worst::new(1e-12), Worst::new(1e-10));
    for seed in 0..50 {
        let mut r = rng(600 + seed);
        let rm = random_skew(&mut r, 4, 1.0);
        let u = random_vector(&mut r, 4, 1.0);
        let ua: Vec<C64> = u.iter().map(|z| z.conj()).collect();
        let f = dense_exponential(4, &Exponent { pair_creation: Some(&rm), creation: Some(&ua), ..Default::default() }).unwrap();
        let psi = f.apply(&fock_state(&[false; 4]));
        let want: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        norm.see((pair_state_norm(&rm, &u).unwrap() - want).abs() / want);
        for bra in FockConfig::all(4) {
            amp.see(rel(pair_state_amplitude(&rm, &u, &bra).unwrap(), psi[basis_index(bra.bits())]));
        }
        let d = det(&(&ComplexMatrix::identity(4) + &(&rm.adjoint() * &rm))).unwrap();
        det_w.see((pair_state_norm_squared(&rm, &[c(0.0); 4]).unwrap() - d.re).abs() / d.re);
    }
    outcome(&[(&norm, "norm vs oracle"), (&det_w, "u=0 vs det(I+R^dag R)"), (&amp, "amplitudes")])
}

fn criterion_7() -> Outcome {
    let (mut jo, mut pf, mut ov, mut corr) = (Worst::new(1e-10), Worst::new(1e-9), Worst::new(1e-8), Worst::new(1e-8));
    let mut zeros = Worst::new(0.0);
    for seed in 0..100u64 {
        let sites = 1 + (seed % 5) as usize;
        let mut r = rng(700 + seed);
        let g1 = QuadraticGenerator::random(sites, &mut r, 0.6);
        let g2 = QuadraticGenerator::random(sites, &mut r, 0.6);
        jo.see(transfer_of(&g1).unwrap().j_deviation());
        let kernel = OverlapKernel::along(&GeneratorPath::sandwich(&g1, &g2).unwrap()).unwrap();
        let p = kernel.matrix().pfaffian();
        pf.see(rel(p * p, det(kernel.matrix().matrix()).unwrap()));
        let f = &dense_quadratic(&g2).adjoint() * &dense_quadratic(&g1);
        for (ket, bra) in config_pairs(&mut r, sites) {
            let v = overlap_between(&g1, &g2, &ket, &bra).unwrap().value;
            ov.see(rel(v, element(&f, &ket, &bra)));
            if ket.is_odd() != bra.is_odd() {
                zeros.exact(v == c(0.0));
            }
        }
        let (ket, bra) = (FockConfig::from_mask(sites, r.random()), FockConfig::from_mask(sites, r.random()));
        let ctx = CorrelatorContext::quadratic(g1, g2, ket, bra).unwrap();
        let modes = all_modes(sites);
        for &a in &modes {
            let s = OperatorString::new(vec![a]);
            corr.see(rel(ctx.one_point(a).unwrap(), oracle_expectation(&ctx, &s)));
            for &b in &modes {
                let s = OperatorString::new(vec![a, b]);
                corr.see(rel(ctx.two_point(a, b).unwrap(), oracle_expectation(&ctx, &s)));
            }
        }
        for len in 0..=6 {
            let s = random_string(&mut r, sites, len);
            let v = ctx.n_point_wick(&s).unwrap();
            corr.see(rel(v, oracle_expectation(&ctx, &s)));
            if (ctx.ket().is_odd() != ctx.bra().is_odd()) != s.is_odd() {
                zeros.exact(v == c(0.0));
            }
        }
    }
    let mut o = outcome(&[(&jo, "T J T^T - J"), (&pf, "pf^2 vs det"), (&ov, "overlaps"), (&corr, "one/two/n-point")]);
    o.pass &= zeros.ok;
    o.detail += &format!("; parity zeros {}", if zeros.ok { "exact" } else { "violated" });
    o
}

fn image_operator(nt: &NonlinearTransform, mu: usize) -> DenseOperator {
    let l = nt.sites;
    let s_op = |b: usize| if b < l { (b, false) } else { (b - l, true) };
    let r_op = |a: usize| if a < l { (a, true) } else { (a - l, false) };
    let mut acc = DenseOperator::identity(l).scale(nt.shift[mu]);
    for b in 0..2 * l {
        acc = &acc + &mode_string(l, &[s_op(b)]).scale(nt.tp[(mu, b)]);
        for a in 0..2 * l {
            acc = &acc + &mode_string(l, &[r_op(a), s_op(b)]).scale(nt.quadratic(mu)[(a, b)] * 0.5);
        }
    }
    acc
}

fn criterion_8() -> Outcome {
    let (mut five, mut ov, mut conj, mut wick, mut red) = (Worst::new(1e-9), Worst::new(1e-9), Worst::new(1e-9), Worst::new(1e-8), Worst::new(1e-11));
    for seed in 0..50u64 {
        let sites = 1 + (seed % 4) as usize;
        let mut r = rng(800 + seed);
        let op1 = random_op(&mut r, sites, 0.5);
        let op2 = random_op(&mut r, sites, 0.5);
        let d1 = dense_op(&op1);
        five.see(relative(&dense_five(&generalized_bbd(&op1).unwrap()), &d1));
        let f = &dense_op(&op2).adjoint() * &d1;
        for (ket, bra) in config_pairs(&mut r, sites) {
            ov.see(rel(generalized_overlap(&op1, &op2, &ket, &bra).unwrap().value, element(&f, &ket, &bra)));
        }
        let nt = conjugate_modes(&op1).unwrap();
        for mu in 0..2 * sites {
            let s = if mu < sites { (mu, false) } else { (mu - sites, true) };
            conj.see(relative(&image_operator(&nt, mu), &dense_conjugate(&d1, &mode_string(sites, &[s])).unwrap()));
        }
        let (ket, bra) = (FockConfig::from_mask(sites, r.random()), FockConfig::from_mask(sites, r.random()));
        let ctx = CorrelatorContext::new(op1.clone(), op2.clone(), ket.clone(), bra.clone()).unwrap();
        for len in 0..=5 {
            let s = random_string(&mut r, sites, len);
            let direct = ctx.generalized_expectation(&s).unwrap();
            wick.see(rel(ctx.generalized_wick_expand(&s).unwrap().value, direct));
            wick.see(rel(direct, oracle_expectation(&ctx, &s)));
        }
        let (q1, q2) = (LinearGaussianOp::quadratic(op1.generator().clone()), LinearGaussianOp::quadratic(op2.generator().clone()));
        red.see(rel(generalized_overlap(&q1, &q2, &ket, &bra).unwrap().value, overlap_between(q1.generator(), q2.generator(), &ket, &bra).unwrap().value));
        let plain = bbd_normal_along(&GeneratorPath::single(q1.generator())).unwrap();
        let gen = generalized_bbd(&q1).unwrap();
        red.see(gen.x().max_diff(plain.x()).max(gen.z().max_diff(plain.z())).max(gen.exp_y().max_diff(plain.exp_y())));
        red.see((gen.prefactor().value - plain.prefactor().value).norm());
        let qctx = CorrelatorContext::new(q1, q2, ket, bra).unwrap();
        for len in 0..=5 {
            let s = random_string(&mut r, sites, len);
            red.see(rel(qctx.generalized_expectation(&s).unwrap(), qctx.n_point_wick(&s).unwrap()));
        }
    }
    outcome(&[
        (&five, "five-factor reassembly"),
        (&ov, "generalized overlaps"),
        (&conj, "mode conjugation"),
        (&wick, "expansion vs direct vs oracle"),
        (&red, "u=v=0 reductions"),
    ])
}

fn criterion_9() -> Outcome {
    let mut structure = Worst::new(1e-10);
    let mut projection = Worst::new(1e-10);
    for seed in 0..50u64 {
        let sites = 1 + (seed % 4) as usize;
        let mut r = rng(800 + seed);
        let op = random_op(&mut r, sites, 0.5);
        let em = embed(&op);
        structure.see(EmbeddedTransfer::extract(&expm(em.matrix()).unwrap()).unwrap().deviation);
        if sites <= 3 {
            let (d, dp) = (dense_op(&op), dense_quadratic(em.generator()));
            for ket in FockConfig::all(sites) {
                for bra in FockConfig::all(sites) {
                    let half: C64 =
                        [false, true].iter().flat_map(|&a| [false, true].map(|b| element(&dp, &ket.prepend(a), &bra.prepend(b)))).sum::<C64>() / 2.0;
                    projection.see(rel(half, element(&d, &ket, &bra)));
                    let (k, b) = embedded_configs(&ket, &bra);
                    projection.see(rel(element(&dp, &k, &b), element(&d, &ket, &bra)));
                }
            }
        }
    }
    let mut table = Worst::new(0.0);
    for sites in 1..=3 {
        let n = sites + 1;
        for j in 1..=sites {
            let theta_c = &mode_string(n, &[(0, true), (j, false)]) - &mode_string(n, &[(0, false), (j, false)]);
            let cd_theta = &mode_string(n, &[(j, true), (0, false)]) - &mode_string(n, &[(j, true), (0, true)]);
            for cfg in FockConfig::all(n) {
                let e = fock_state(cfg.bits());
                let m = (1..j).filter(|&k| cfg.is_occupied(k)).count();
                let sign = c(if m % 2 == 0 { 1.0 } else { -1.0 });
                let flipped = cfg.with_site(0, !cfg.is_occupied(0));
                for (op, occupied) in [(&theta_c, false), (&cd_theta, true)] {
                    let out = op.apply(&e);
                    let mut want = vec![c(0.0); 1 << n];
                    if cfg.is_occupied(j) != occupied {
                        want[basis_index(flipped.with_site(j, occupied).bits())] = sign;
                    }
                    table.exact(out == want);
                }
            }
        }
    }
    let mut o = outcome(&[(&structure, "T' block pattern"), (&projection, "projected elements")]);
    o.pass &= table.ok;
    o.detail += &format!("; ancilla action table {}", if table.ok { "exact" } else { "differs" });
    o
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("example transfer matrix", criterion_1),
        ("example matrix elements", criterion_2),
        ("singular point", criterion_3),
        ("factorization closed forms", criterion_4),
        ("single-mode orderings", criterion_5),
        ("pair-state norm", criterion_6),
        ("quadratic property suite", criterion_7),
        ("linear property suite", criterion_8),
        ("ancilla embedding structure", criterion_9),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        println!("criterion {} [{}] {name}: {}", k + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += !o.pass as usize;
    }
    println!("acceptance: {} of 9 criteria pass", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
