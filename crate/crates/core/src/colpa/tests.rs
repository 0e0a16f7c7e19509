use alloc::string::ToString;
use alloc::vec::Vec;

use fermigauss_fockoracle::{dense_conjugate, dense_element, dense_exponential, dense_gaussian, mode_string, DenseOperator, Exponent};
use fermigauss_numkernel::{expm, ComplexMatrix, C64};
use proptest::prelude::*;

use super::embed::lift;
use super::*;
use crate::config::FockConfig;
use crate::fixtures::{c, random_vector, rng};
use crate::gaussianops::{bbd_normal_along, GeneratorPath, QuadraticGenerator};

fn random_op(seed: u64, sites: usize, scale: f64) -> LinearGaussianOp {
    let mut r = rng(seed);
    let g = QuadraticGenerator::random(sites, &mut r, scale);
    let u = random_vector(&mut r, sites, scale);
    let v = random_vector(&mut r, sites, scale);
    LinearGaussianOp::new(g, u, v).unwrap()
}

fn dense_op(op: &LinearGaussianOp) -> DenseOperator {
    dense_gaussian(op.generator().matrix(), Some(op.u()), Some(op.v())).unwrap()
}

fn dense_five(f: &GeneralizedFactored) -> DenseOperator {
    let l = f.sites();
    let qc: Vec<C64> = f.q().iter().map(|z| z.conj()).collect();
    let y = f.y().unwrap();
    let parts = [
        Exponent { creation: Some(&qc), ..Default::default() },
        Exponent { pair_creation: Some(f.x()), ..Default::default() },
        Exponent { hopping: Some(y), ..Default::default() },
        Exponent { pair_annihilation: Some(f.z()), ..Default::default() },
        Exponent { annihilation: Some(f.p()), ..Default::default() },
    ];
    let mut acc = DenseOperator::identity(l);
    for e in &parts {
        acc = &acc * &dense_exponential(l, e).unwrap();
    }
    acc.scale(f.prefactor().value)
}

fn rel(a: &DenseOperator, b: &DenseOperator) -> f64 {
    a.max_diff(b) / b.matrix().max_abs().max(1.0)
}

#[test]
fn quadratic_embedding_has_zero_borders() {
    let g = QuadraticGenerator::random(3, &mut rng(1), 0.5);
    let e = embed(&LinearGaussianOp::quadratic(g.clone()));
    let mp = e.matrix();
    for i in 0..8 {
        for anc in [0, 4] {
            assert_eq!(mp[(i, anc)], c(0.0));
            assert_eq!(mp[(anc, i)], c(0.0));
        }
    }
    for i in 0..6 {
        for j in 0..6 {
            assert_eq!(mp[(lift(i, 3), lift(j, 3))], g.matrix()[(i, j)]);
        }
    }
    let t = EmbeddedTransfer::extract(&expm(mp).unwrap()).unwrap();
    assert!(t.inner.max_diff(&expm(g.matrix()).unwrap()) < 1e-12);
    assert_eq!(t.t11, c(0.0));
}

#[test]
fn single_mode_embedding_layout() {
    // e^{a c^dag + b c + d(n - 1/2)}: sum of the three one-factor generators
    let (a, b, d) = (C64::new(0.3, 0.1), C64::new(0.2, -0.4), C64::new(0.5, 0.0));
    let op = SingleModeOp::new(a, b, d).to_linear_op();
    let z = c(0.0);
    let want = ComplexMatrix::new(4, 4, alloc::vec![z, b, z, a, a, d, -a, z, z, -b, z, -a, b, z, -b, -d]).unwrap();
    assert_eq!(*embed(&op).matrix(), want);
}

#[test]
fn adjoint_commutes_with_embedding() {
    let op = random_op(2, 3, 0.5);
    assert_eq!(*embed(&op.adjoint()).matrix(), embed(&op).matrix().adjoint());
}

#[test]
fn projection_reproduces_matrix_elements() {
    for seed in 0..4 {
        let op = random_op(10 + seed, 3, 0.5);
        let f = dense_op(&op);
        let fp = dense_gaussian(embed(&op).matrix(), None, None).unwrap();
        for ket in FockConfig::all(3) {
            for bra in FockConfig::all(3) {
                let want = dense_element(&f, ket.bits(), bra.bits());
                let (k, b) = embedded_configs(&ket, &bra);
                assert!((dense_element(&fp, k.bits(), b.bits()) - want).norm() < 1e-10);
                let (pk, pb) = (project_state(&ket), project_state(&bra));
                let mut sym = c(0.0);
                for kk in [&pk.ancilla_empty, &pk.ancilla_filled] {
                    for bb in [&pb.ancilla_empty, &pb.ancilla_filled] {
                        sym += dense_element(&fp, kk.bits(), bb.bits());
                    }
                }
                let w = ProjectedState::WEIGHT * ProjectedState::WEIGHT;
                assert!((sym * w - want).norm() < 1e-10);
            }
        }
    }
}

#[test]
fn vacuum_projection() {
    let p = project_state(&FockConfig::vacuum(3));
    assert_eq!((p.ancilla_empty.to_string().as_str(), p.ancilla_filled.to_string().as_str()), ("0000", "1000"));
    let even = FockConfig::parse("110").unwrap();
    assert!(!ancilla_branch(&even, &FockConfig::vacuum(3)));
    assert!(ancilla_branch(&FockConfig::parse("100").unwrap(), &even));
}

#[test]
fn ancilla_substitution_action_table() {
    for sites in 1..=3 {
        let n = sites + 1;
        for j in 0..sites {
            let cj = j + 1;
            let theta_c = &mode_string(n, &[(0, true), (cj, false)]) - &mode_string(n, &[(0, false), (cj, false)]);
            let cd_theta = &mode_string(n, &[(cj, true), (0, false)]) - &mode_string(n, &[(cj, true), (0, true)]);
            for idx in 0..1usize << n {
                let cfg = FockConfig::all(n).nth(idx).unwrap();
                let anc = cfg.is_occupied(0);
                let m = (1..cj).filter(|&k| cfg.is_occupied(k)).count();
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                let mut e = alloc::vec![c(0.0); 1 << n];
                e[idx] = c(1.0);
                let flipped = cfg.with_site(0, !anc);
                let target = |occ: bool| fermigauss_fockoracle::basis_index(flipped.with_site(cj, occ).bits());
                let out = theta_c.apply(&e);
                let want_c = cfg.is_occupied(cj).then(|| target(false));
                let out2 = cd_theta.apply(&e);
                let want_cd = (!cfg.is_occupied(cj)).then(|| target(true));
                for k in 0..1usize << n {
                    let w1 = if Some(k) == want_c { c(sign) } else { c(0.0) };
                    let w2 = if Some(k) == want_cd { c(sign) } else { c(0.0) };
                    assert_eq!(out[k], w1, "theta c_{cj} on {cfg}");
                    assert_eq!(out2[k], w2, "c_{cj}^dag theta' on {cfg}");
                }
            }
        }
    }
}

#[test]
fn generalized_reduces_to_plain_decomposition() {
    let g = QuadraticGenerator::random(3, &mut rng(20), 0.5);
    let gen = generalized_bbd(&LinearGaussianOp::quadratic(g.clone())).unwrap();
    let plain = bbd_normal_along(&GeneratorPath::single(&g)).unwrap();
    assert!(gen.q().iter().chain(gen.p()).all(|z| z.norm() <= 1e-12));
    assert!(gen.x().max_diff(plain.x()) <= 1e-10);
    assert!(gen.z().max_diff(plain.z()) <= 1e-10);
    assert!(gen.y().unwrap().max_diff(plain.y().unwrap()) <= 1e-10);
    assert!((gen.prefactor().value - plain.prefactor().value).norm() <= 1e-10);
}

#[test]
fn single_mode_golden_values() {
    let (a, b, d) = (0.3f64, 0.2, 0.5);
    let x = (4.0 * a * b + d * d).sqrt();
    let (ch, sh) = ((x / 2.0).cosh(), (x / 2.0).sinh() / x);
    let op = SingleModeOp::new(c(a), c(b), c(d));
    let all = factor_orderings(&op);
    assert!(((-all[0].gamma / 2.0).exp() - c(ch - d * sh)).norm() < 1e-14);
    assert!(((all[1].gamma / 2.0).exp() - c(ch + d * sh)).norm() < 1e-14);
    assert!((all[0].alpha - c(2.0 * a * sh / (ch - d * sh))).norm() < 1e-14);
    assert_eq!(all[0].gamma, all[2].gamma);
    assert_eq!(all[1].gamma, all[3].gamma);
}

#[test]
fn single_mode_pure_number_term() {
    for d in [-0.7, 0.4, 1.3] {
        for f in factor_orderings(&SingleModeOp::new(c(0.0), c(0.0), c(d))) {
            assert_eq!((f.alpha, f.beta), (c(0.0), c(0.0)));
            assert!((f.gamma - c(d)).norm() < 1e-14, "{:?}", f.kind);
        }
    }
}

#[test]
fn single_mode_degenerate_exponent() {
    // 4ab + d^2 = 0: the exponent is nilpotent after removing its trace
    for (a, b, d) in [(1.0, -0.25, 1.0), (0.5, -0.5, 1.0), (0.0, 0.3, 0.0)] {
        let op = SingleModeOp::new(c(a), c(b), c(d));
        let dense = dense_op(&op.to_linear_op());
        assert!(op.matrix().max_diff(dense.matrix()) < 1e-14);
        for f in factor_orderings(&op) {
            assert!(f.matrix().max_diff(dense.matrix()) < 1e-13, "{:?}", f.kind);
        }
        let lim = -(C64::new(1.0, 0.0) - c(d) / 2.0).ln() * 2.0;
        assert!((factor_orderings(&op)[0].gamma - lim).norm() < 1e-14);
    }
}

#[test]
fn single_mode_grid_three_routes() {
    let grid = [-1.0f64, 0.0, 1.0];
    for a in grid {
        for b in grid {
            for d in grid {
                if (4.0 * a * b + d * d).abs() < 1e-6 {
                    continue;
                }
                let op = SingleModeOp::new(c(a), c(b), c(d));
                let dense = dense_op(&op.to_linear_op());
                let closed = factor_orderings(&op);
                let via = factor_orderings_via_embedding(&op).unwrap();
                for (f, g) in closed.iter().zip(&via) {
                    assert_eq!(f.kind, g.kind);
                    for (x, y) in [(f.alpha, g.alpha), (f.beta, g.beta), (f.gamma, g.gamma)] {
                        assert!((x - y).norm() < 1e-10, "({a},{b},{d}) {:?}", f.kind);
                    }
                    assert!(f.matrix().max_diff(dense.matrix()) < 1e-12);
                }
            }
        }
    }
}

#[test]
fn pure_linear_conjugation_single_mode() {
    let op = LinearGaussianOp::new(QuadraticGenerator::zero(1), alloc::vec![C64::new(0.4, -0.2)], alloc::vec![C64::new(-0.3, 0.5)]).unwrap();
    check_conjugation(&op);
}

#[test]
fn quadratic_conjugation_is_linear() {
    let g = QuadraticGenerator::random(2, &mut rng(3), 0.5);
    let nt = conjugate_modes(&LinearGaussianOp::quadratic(g.clone())).unwrap();
    assert!(nt.tp.max_diff(&expm(g.matrix()).unwrap()) <= 1e-12);
    assert!(nt.b.iter().chain(&nt.b_bar).all(|m| m.max_abs() <= 1e-12));
    assert!(nt.shift.iter().all(|z| z.norm() <= 1e-12));
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

fn check_conjugation(op: &LinearGaussianOp) -> f64 {
    let l = op.sites();
    let f = dense_op(op);
    let nt = conjugate_modes(op).unwrap();
    let mut worst = 0.0f64;
    for mu in 0..2 * l {
        let s = if mu < l { (mu, false) } else { (mu - l, true) };
        let want = dense_conjugate(&f, &mode_string(l, &[s])).unwrap();
        worst = worst.max(rel(&image_operator(&nt, mu), &want));
    }
    assert!(worst <= 1e-9, "{worst}");
    worst
}

#[test]
fn images_satisfy_anticommutation() {
    let op = random_op(30, 3, 0.5);
    let f = dense_op(&op);
    let images: Vec<(DenseOperator, DenseOperator)> =
        (0..3).map(|k| (dense_conjugate(&f, &mode_string(3, &[(k, false)])).unwrap(), dense_conjugate(&f, &mode_string(3, &[(k, true)])).unwrap())).collect();
    let id = DenseOperator::identity(3);
    let zero = DenseOperator::zero(3);
    for (i, (ai, _)) in images.iter().enumerate() {
        for (j, (aj, ajd)) in images.iter().enumerate() {
            let want = if i == j { &id } else { &zero };
            assert!(DenseOperator::anticommutator(ai, ajd).max_diff(want) < 1e-9);
            assert!(DenseOperator::anticommutator(ai, aj).max_diff(&zero) < 1e-9);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn embedded_transfer_structure(seed in any::<u64>(), sites in 1usize..=4) {
        let op = random_op(seed, sites, 0.6);
        let t = EmbeddedTransfer::extract(&expm(embed(&op).matrix()).unwrap()).unwrap();
        prop_assert!(t.deviation <= 1e-10);
    }

    #[test]
    fn generalized_reassembly(seed in any::<u64>(), sites in 1usize..=4) {
        let op = random_op(seed, sites, 0.4);
        let f = generalized_bbd(&op).unwrap();
        prop_assert!(rel(&dense_five(&f), &dense_op(&op)) <= 1e-9);
    }

    #[test]
    fn conjugation_formula(seed in any::<u64>(), sites in 1usize..=3) {
        check_conjugation(&random_op(seed, sites, 0.5));
    }
}
