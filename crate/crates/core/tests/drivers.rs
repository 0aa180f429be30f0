mod common;

use bgs::{
    bcgs, bcgs2, cgs, cgs2, check_assumptions, householder, local_qr, mgs, orthogonality_defect,
    relative_residual, BlockPartition, BoundContext, FactorizationTrace, Matrix,
};
use common::*;
use proptest::prelude::*;

fn prefix_residual(a: &Matrix<f64>, t: &FactorizationTrace<f64>, end: usize) -> f64 {
    let q = t.q().columns(0..end);
    let r = t.r().block(0..end, 0..end);
    let qr = q.matmul(r.view()).unwrap();
    na_norm(&sub(&a.columns(0..end).to_owned(), &qr))
}

#[test]
fn cgs2_ill_conditioned() {
    let mut r = rng(100);
    let a = graded(&mut r, 100, 30, 1e10);
    let t = cgs2(&a).unwrap();
    assert!(na_defect(t.q()) <= 1e-13);
    assert!(relative_residual(&a, &t.factorization).unwrap().value <= 1e-13);
}

#[test]
fn bcgs2_very_ill_conditioned_blocks_of_eight() {
    let mut r = rng(101);
    let a = graded(&mut r, 200, 64, 1e12);
    let blocks = BlockPartition::uniform(64, 8).unwrap();
    let t = bcgs2(&a, &blocks).unwrap();
    assert!(na_defect(t.q()) <= 1e-13);
    assert!(relative_residual(&a, &t.factorization).unwrap().value <= 1e-13);
    let ctx = BoundContext::new(200, 8).unwrap();
    let verdicts = check_assumptions(&t, &ctx).unwrap();
    assert_eq!(verdicts.len(), 7);
    assert!(verdicts.iter().all(|v| v.either_passed));
}

#[test]
fn single_block_is_local_qr() {
    let mut r = rng(102);
    let a = gaussian(&mut r, 30, 7);
    let t = bcgs2(&a, &BlockPartition::new(vec![7]).unwrap()).unwrap();
    let f = local_qr(&a).unwrap();
    assert_eq!(t.q(), &f.q);
    assert_eq!(t.r(), &f.r);
    assert_eq!(t.per_block.len(), 1);
}

#[test]
fn orthonormal_input_every_method() {
    let mut r = rng(103);
    let a = orthonormal(&mut r, 20, 5);
    let blocks = BlockPartition::uniform(5, 2).unwrap();
    let traces = [
        cgs(&a).unwrap(),
        mgs(&a).unwrap(),
        cgs2(&a).unwrap(),
        bcgs(&a, &blocks).unwrap(),
        bcgs2(&a, &blocks).unwrap(),
        householder(&a).unwrap(),
    ];
    for t in &traces {
        assert!(na_defect(t.q()) <= 1e-14);
    }
}

#[test]
fn one_pass_loses_orthogonality() {
    let mut r = rng(104);
    let a = graded(&mut r, 100, 20, 1e8);
    let one = cgs(&a).unwrap().final_defect();
    let two = bcgs2(&a, &BlockPartition::uniform(20, 4).unwrap())
        .unwrap()
        .final_defect();
    assert!(one >= 1e3 * two, "cgs {one:e} vs bcgs2 {two:e}");
}

#[test]
fn trace_shape() {
    let mut r = rng(105);
    let a = gaussian(&mut r, 40, 11);
    let blocks = BlockPartition::new(vec![3, 5, 1, 2]).unwrap();
    let t = bcgs2(&a, &blocks).unwrap();
    assert_eq!(t.per_block.len(), 4);
    let mut acc = 0;
    for (k, rec) in t.per_block.iter().enumerate() {
        assert_eq!(rec.index, k + 1);
        assert_eq!(rec.t_prev, acc);
        assert_eq!(rec.width, blocks.widths()[k]);
        assert_eq!(rec.r2_inv_norm.is_some(), k > 0);
        acc += rec.width;
    }
    assert!(t.r().is_upper_triangular());
}

#[test]
fn induction_contracts_hold_for_every_prefix() {
    let mut r = rng(106);
    for (m, n, p, kappa) in [
        (60usize, 24usize, 4usize, 1e4),
        (120, 48, 8, 1e10),
        (80, 20, 1, 1e8),
        (150, 64, 16, 1e12),
    ] {
        let a = graded(&mut r, m, n, kappa);
        let blocks = BlockPartition::uniform(n, p).unwrap();
        let t = if p == 1 { cgs2(&a).unwrap() } else { bcgs2(&a, &blocks).unwrap() };
        let ctx = BoundContext::new(m, p).unwrap();
        let verdicts = check_assumptions(&t, &ctx).unwrap();
        let mut all_passed = true;
        for rec in &t.per_block {
            let k = rec.index;
            let end = rec.t_prev + rec.width;
            let t_prev = (k - 1) * p;
            let ak = na_norm(&a.columns(0..end).to_owned());
            let res = prefix_residual(&a, &t, end);
            assert!(
                res <= 10.0 * EPS * ctx.f2(m, t_prev, p, k) * ak,
                "m={m} p={p} k={k}: residual {res:e}"
            );
            if k >= 2 {
                all_passed &= verdicts[k - 2].either_passed;
            }
            if all_passed {
                let d = na_defect(&t.q().columns(0..end).to_owned());
                assert!(d <= 10.0 * EPS * ctx.f1(m, t_prev, p).unwrap(), "m={m} p={p} k={k}: defect {d:e}");
            }
        }
    }
}

#[test]
fn partition_invariance_at_contract_level() {
    let mut r = rng(107);
    let (m, n) = (160, 48);
    let a = graded(&mut r, m, n, 1e9);
    for p in [4usize, 8, 12] {
        let t = bcgs2(&a, &BlockPartition::uniform(n, p).unwrap()).unwrap();
        let ctx = BoundContext::new(m, p).unwrap();
        let s = n / p;
        assert!(orthogonality_defect(t.q()).unwrap() <= 10.0 * ctx.orthogonality_bound(s));
        assert!(relative_residual(&a, &t.factorization).unwrap().value <= 10.0 * ctx.residual_bound(s));
    }
}

#[test]
fn ragged_partition_uses_widest_block() {
    let mut r = rng(108);
    let a = graded(&mut r, 90, 30, 1e6);
    let blocks = BlockPartition::with_block_count(30, 4).unwrap();
    assert_eq!(blocks.widths(), &[8, 8, 8, 6]);
    let t = bcgs2(&a, &blocks).unwrap();
    let ctx = BoundContext::for_partition::<f64>(90, &blocks).unwrap();
    assert_eq!(ctx.p, 8);
    assert!(check_assumptions(&t, &ctx).unwrap().iter().all(|v| v.either_passed));
    assert!(t.final_defect() <= 10.0 * ctx.orthogonality_bound(4));
}

#[test]
fn single_precision_factorization() {
    let mut r = rng(109);
    let a64 = graded(&mut r, 80, 16, 1e3);
    let a = Matrix::from_col_major(80, 16, a64.as_slice().iter().map(|&v| v as f32).collect()).unwrap();
    let blocks = BlockPartition::uniform(16, 4).unwrap();
    let t = bcgs2(&a, &blocks).unwrap();
    let ctx = BoundContext::for_scalar::<f32>(80, 4).unwrap();
    assert!((t.final_defect() as f64) <= 10.0 * ctx.orthogonality_bound(4));
    assert!((relative_residual(&a, &t.factorization).unwrap().value as f64) <= 10.0 * ctx.residual_bound(4));
}

#[test]
fn mgs_sits_between_cgs_and_cgs2() {
    let mut r = rng(110);
    let a = graded(&mut r, 100, 20, 1e10);
    let dm = mgs(&a).unwrap().final_defect();
    let dc = cgs(&a).unwrap().final_defect();
    let d2 = cgs2(&a).unwrap().final_defect();
    assert!(dm >= 10.0 * d2);
    assert!(dc >= dm);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bcgs2_singletons_bitwise_equal_cgs2(seed in any::<u64>(), m in 2usize..40, nfrac in 0.0f64..1.0, lk in 0.0f64..12.0) {
        let n = 1 + ((m - 1) as f64 * nfrac) as usize;
        let mut r = rng(seed);
        let a = graded(&mut r, m, n, 10f64.powf(lk));
        let x = cgs2(&a).unwrap();
        let y = bcgs2(&a, &BlockPartition::singletons(n).unwrap()).unwrap();
        prop_assert_eq!(x, y);
    }
}
