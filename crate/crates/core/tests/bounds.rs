mod common;

use bgs::bounds::{alpha, alpha_squared, gamma_k, l2, l3, l4, l5};
use bgs::{bcgs2, check_assumptions, BlockPartition, BoundContext, Matrix};
use common::*;
use proptest::prelude::*;

// Independent evaluations of the closed forms.
fn o_l1(m: f64, p: f64) -> f64 {
    if p == 1.0 {
        m + 4.0
    } else {
        m * p * p.sqrt()
    }
}

fn o_lf(m: f64, t: f64, p: f64) -> f64 {
    o_l1(m, p) + m * (t * p).sqrt() + p.sqrt() * (1.0 + t * t.sqrt())
}

fn o_gamma(k: f64) -> f64 {
    1.0 / ((7.0 + 4.0 * 2f64.sqrt()) * (k - 1.0) + 1.0).sqrt()
}

/// `f₁(m, t_k, p) = γ_{k+1}⁻¹·L_F(m, t_k, p)`.
fn o_f1(m: f64, k: f64, p: f64) -> f64 {
    o_lf(m, k * p, p) / o_gamma(k + 1.0)
}

fn ctx() -> BoundContext {
    BoundContext::new(100_000, 32).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn small_function_examples() {
    assert_eq!(l4(1), 2.0);
    assert_eq!(l5(1), 1.0);
    for p in [1usize, 4, 9, 16] {
        assert_eq!(l3(0, p), (p as f64).sqrt());
    }
    assert_eq!(l2(100, 16, 4), 800.0);
}

#[test]
fn lf_single_column_values() {
    let c = ctx();
    assert_eq!(c.lf(10, 0, 1), 15.0);
    // (m + 4) + m·k^{1/2} + (1 + k^{3/2}) at m = 10, k = 4
    assert_eq!(c.lf(10, 4, 1), 14.0 + 20.0 + 9.0);
    for m in [3usize, 10, 77, 500] {
        for k in 0..40usize {
            let kf = k as f64;
            let closed = m as f64 + kf.sqrt() * (m as f64 + kf) + 5.0;
            assert!(rel(c.lf(m, k, 1), closed) <= 1e-15);
            assert!(c.lf(m, k, 1) >= c.l1(m, 1));
        }
    }
}

#[test]
fn single_column_specializations() {
    let c = ctx();
    for m in [5usize, 50, 500] {
        for k in 0..30usize {
            let kf = k as f64;
            assert_eq!(l2(m, k, 1), m as f64 * kf.sqrt());
            assert_eq!(l3(k, 1), 1.0 + kf.powf(1.5));
            // the panel bound is redefined for single columns
            assert_eq!(c.l1(m, 1), m as f64 + 4.0);
            assert_ne!(c.l1(m, 1), c.d1 * m as f64);
        }
    }
}

#[test]
fn alpha_and_gamma_values() {
    assert!((alpha() - (7.0 + 4.0 * 2f64.sqrt()).sqrt()).abs() <= 1e-15);
    assert!((alpha() - 3.56).abs() < 5e-3);
    assert_eq!(alpha_squared(), 7.0 + 4.0 * 2f64.sqrt());
    assert_eq!(gamma_k(1), 1.0);
    assert!(rel(gamma_k(2), 1.0 / (8.0 + 4.0 * 2f64.sqrt()).sqrt()) <= 1e-15);
}

#[test]
fn gamma_k_times_f1_is_lf() {
    let c = ctx();
    for (m, p) in [(1000usize, 1usize), (5000, 4), (100_000, 16), (100_000, 32)] {
        for k in 1..=10_000usize {
            let t = (k - 1) * p;
            let lhs = gamma_k(k) * c.f1(m, t, p).unwrap();
            assert!(rel(lhs, c.lf(m, t, p)) <= 1e-14, "m={m} p={p} k={k}");
            let g = c.gamma(m, t, p).unwrap();
            assert!(rel(g, gamma_k(k)) <= 1e-14);
            assert!(rel(g, o_gamma(k as f64)) <= 1e-14);
        }
    }
}

#[test]
fn gamma_below_one_after_first_block() {
    let c = ctx();
    for k in 1..200usize {
        assert!(c.gamma(500, k * 4, 4).unwrap() < 1.0);
    }
}

#[test]
fn f1_matches_oracle() {
    let c = ctx();
    for (m, p) in [(500usize, 1usize), (500, 8), (2000, 32)] {
        for k in 0..60usize {
            let ours = c.f1(m, k * p, p).unwrap();
            assert!(rel(ours, o_f1(m as f64, k as f64, p as f64)) <= 1e-14);
        }
    }
    assert_eq!(c.f1(100, 0, 4).unwrap(), c.lf(100, 0, 4));
}

#[test]
fn f_resid_single_column_closed_form() {
    let c = ctx();
    for m in 1..60usize {
        for j in 0..12usize {
            let k = j * j; // k^{3/2} = j³ is an exact integer
            let closed = (2 * m + 2 * j * j * j + 13) as f64;
            assert_eq!(c.f_resid(m, k, 1), closed);
        }
    }
    assert_eq!(c.f_resid(10, 4, 1), 49.0);
    for m in [7usize, 40] {
        assert_eq!(c.f_resid(m, 0, 1), (2 * m + 13) as f64);
    }
}

#[test]
fn cgs2_residual_constant() {
    let c = ctx();
    for m in [50usize, 200] {
        for j in 1..8usize {
            let n = j * j;
            let nf = n as f64;
            let lhs = nf.sqrt() * c.f_resid(m, n, 1);
            let rhs = 2.0 * m as f64 * nf.sqrt() + 2.0 * nf * nf + 13.0 * nf.sqrt();
            assert!(rel(lhs, rhs) <= 1e-15);
        }
    }
}

#[test]
fn f_sing_general_formula() {
    let c = ctx();
    for (m, p) in [(10usize, 1usize), (300, 1), (300, 6)] {
        for k in 0..30usize {
            let t = k * p;
            let f1 = o_f1(m as f64, k as f64, p as f64);
            let lf = o_lf(m as f64, t as f64, p as f64);
            let expected = f1 + lf + (lf / f1) * (p * p) as f64;
            assert!(rel(c.f_sing(m, t, p).unwrap(), expected) <= 1e-14);
        }
    }
    // single column: [√(α²t + 1) + 1]·L_F + γ_{t+1}
    let t = 1usize;
    let lf = c.lf(10, t, 1);
    let expected = ((alpha_squared() * t as f64 + 1.0).sqrt() + 1.0) * lf + gamma_k(t + 1);
    assert!(rel(c.f_sing(10, t, 1).unwrap(), expected) <= 1e-15);
}

#[test]
fn induction_step_inequality() {
    let two = 2f64.sqrt();
    for m in [500usize, 5000, 100_000] {
        let c = BoundContext::new(m, 1).unwrap();
        for p in 1..=32usize {
            for k in 1..=50usize {
                let (mf, pf, kf) = (m as f64, p as f64, k as f64);
                let c_orth = (o_f1(mf, kf - 1.0, pf).powi(2)
                    + 2.0 * (1.0 + two).powi(2) * o_lf(mf, kf * pf, pf).powi(2)
                    + o_l1(mf, pf).powi(2))
                .sqrt();
                let f1 = c.f1(m, k * p, p).unwrap();
                assert!(c_orth <= f1, "m={m} p={p} k={k}: {c_orth} > {f1}");
            }
        }
    }
}

#[test]
fn monotone_on_grids() {
    let c = ctx();
    let ms = [3usize, 4, 10, 50, 200, 1000];
    let ps = [1usize, 2, 3, 4, 8, 16, 32];
    let ks = [0usize, 1, 2, 5, 10, 40];
    for &m in &ms {
        for &p in &ps {
            for &k in &ks {
                let t = k * p;
                let vals = [
                    c.lf(m, t, p),
                    c.f1(m, t, p).unwrap(),
                    c.f_sing(m, t, p).unwrap(),
                    c.f_resid(m, t, p),
                    c.f2(m, t, p, k + 1),
                    l2(m, t, p),
                    l3(t, p),
                ];
                assert!(vals.iter().all(|v| v.is_finite() && *v >= 0.0));
                // increasing m
                let m2 = m * 2;
                assert!(c.lf(m2, t, p) >= vals[0]);
                assert!(c.f1(m2, t, p).unwrap() >= vals[1]);
                assert!(c.f_sing(m2, t, p).unwrap() >= vals[2]);
                assert!(c.f_resid(m2, t, p) >= vals[3]);
                assert!(c.l1(m2, p) >= c.l1(m, p));
                // increasing block count
                let t2 = (k + 1) * p;
                assert!(c.lf(m, t2, p) >= vals[0]);
                assert!(c.f1(m, t2, p).unwrap() > vals[1]);
                assert!(c.f_sing(m, t2, p).unwrap() >= vals[2]);
                assert!(c.f_resid(m, t2, p) >= vals[3]);
                assert!(c.f2(m, t2, p, k + 2) >= vals[4]);
            }
        }
        // increasing width at a fixed number of completed blocks
        for w in ps.windows(2) {
            let (p, q) = (w[0], w[1]);
            assert!(c.l1(m, q) >= c.l1(m, p), "m={m} p={p}");
            assert!(l4(q) >= l4(p) && l5(q) >= l5(p));
            for &k in &ks {
                assert!(c.f1_blocks(m, k, q) >= c.f1_blocks(m, k, p));
                assert!(c.f_resid(m, k * q, q) >= c.f_resid(m, k * p, p));
            }
        }
    }
}

#[test]
fn panel_bound_not_monotone_in_width_for_two_rows() {
    // L₁(2, 1) = 6 exceeds L₁(2, 2) = 2·2^{3/2} ≈ 5.66.
    let c = ctx();
    assert!(c.l1(2, 1) > c.l1(2, 2));
}

#[test]
fn verdicts_on_well_conditioned_matrix() {
    let mut r = rng(300);
    let a = graded(&mut r, 120, 40, 10.0);
    let t = bcgs2(&a, &BlockPartition::uniform(40, 8).unwrap()).unwrap();
    let v = check_assumptions(&t, &BoundContext::new(120, 8).unwrap()).unwrap();
    assert_eq!(v.len(), 4);
    for x in &v {
        assert!(x.check_a.passed && x.check_b.passed, "{}", x.describe());
        assert_eq!(x.either_passed, x.check_a.passed || x.check_b.passed);
    }
}

#[test]
fn verdicts_on_orthonormal_input() {
    let mut r = rng(301);
    let a = orthonormal(&mut r, 64, 16);
    let t = bcgs2(&a, &BlockPartition::uniform(16, 4).unwrap()).unwrap();
    let ctx = BoundContext::new(64, 4).unwrap();
    for x in check_assumptions(&t, &ctx).unwrap() {
        assert!(x.check_a.passed);
        let k = x.block_index;
        let fs = ctx.f_sing(64, (k - 1) * 4, 4).unwrap();
        assert!(x.check_a.lhs <= 1.0001 * ctx.eps * fs);
        assert!(x.check_a.margin() > 0.0);
    }
}

/// `[W, W·C + δ·N]`: every block after the first lies in the span of the
/// first up to `δ`, so each trailing `R_kk` has `κ ≈ 1/δ`.
fn near_dependent(seed: u64, m: usize, r: usize, n: usize, delta: f64) -> Matrix<f64> {
    let mut g = rng(seed);
    let w = gaussian(&mut g, m, r);
    let c = gaussian(&mut g, r, n - r);
    let noise = gaussian(&mut g, m, n - r);
    let wc = w.view().matmul(c.view()).unwrap();
    let tail = wc.view().add(noise.scale(delta).view()).unwrap();
    let mut a = Matrix::zeros(m, n);
    a.set_block(0, 0, w.view());
    a.set_block(0, r, tail.view());
    a
}

#[test]
fn check_a_fails_exactly_where_orthogonality_is_lost() {
    let a = near_dependent(302, 100, 8, 40, 1e-20);
    let t = bcgs2(&a, &BlockPartition::uniform(40, 4).unwrap()).unwrap();
    let v = check_assumptions(&t, &BoundContext::new(100, 4).unwrap()).unwrap();
    assert!(v[0].check_a.passed, "{}", v[0].describe());
    assert!(v[1..].iter().all(|x| !x.check_a.passed));
    assert!(t.final_defect() > 1e-10);

    let healthy = graded(&mut rng(303), 100, 40, 1e4);
    let t = bcgs2(&healthy, &BlockPartition::uniform(40, 4).unwrap()).unwrap();
    let v = check_assumptions(&t, &BoundContext::new(100, 4).unwrap()).unwrap();
    assert!(v.iter().all(|x| x.check_a.passed));
    assert!(t.final_defect() <= 1e-13);
}

#[test]
fn context_mismatch_is_rejected() {
    let a = Matrix::<f64>::identity(8);
    let t = bcgs2(&a, &BlockPartition::uniform(8, 4).unwrap()).unwrap();
    assert!(check_assumptions(&t, &BoundContext::new(9, 4).unwrap()).is_err());
    assert!(check_assumptions(&t, &BoundContext::new(8, 2).unwrap()).is_err());
}

proptest! {
    #[test]
    fn gamma_k_strictly_decreasing(k in 1usize..1_000_000) {
        prop_assert!(gamma_k(k + 1) < gamma_k(k));
    }

    #[test]
    fn bounds_nonnegative_and_ordered(m in 3usize..5000, p in 1usize..33, k in 0usize..200) {
        let c = ctx();
        let t = k * p;
        let lf = c.lf(m, t, p);
        prop_assert!(lf >= c.l1(m, p));
        prop_assert!(c.f1(m, t, p).unwrap() >= lf);
        prop_assert!(c.f_sing(m, t, p).unwrap() >= c.f1(m, t, p).unwrap());
        prop_assert!(c.f2(m, t, p, k + 1) >= c.f_resid(m, t, p));
    }
}
