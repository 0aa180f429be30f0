//! Growth functions of the BCGS2 rounding-error analysis and runtime checks
//! of the two alternative per-block stability assumptions.
//!
//! All functions take the row count `m`, the number `t` of columns already
//! orthogonalized, and the block width `p`. With unequal partitions `p` is the
//! widest block and `t` after `k` blocks is taken as `k·p`.
//!
//! Single-column panels (`p = 1`) are normalized rather than Householder
//! factored, so `L₁(m, 1) = m + 4` replaces `d₁·m·p^{3/2}` there. Every other
//! function is the general formula evaluated at `p = 1`.

use std::f64::consts::SQRT_2;

use crate::drivers::FactorizationTrace;
use crate::error::{Error, Result};
use crate::partition::BlockPartition;
use crate::scalar::Scalar;

/// `α² = 7 + 4√2`.
pub fn alpha_squared() -> f64 {
    7.0 + 4.0 * SQRT_2
}

/// `α = √(7 + 4√2) ≈ 3.5577`.
pub fn alpha() -> f64 {
    alpha_squared().sqrt()
}

/// `γ_k = 1 / √(α²(k − 1) + 1)` for `k ≥ 1`.
pub fn gamma_k(k: usize) -> f64 {
    assert!(k >= 1, "gamma_k is indexed from 1");
    1.0 / (alpha_squared() * (k - 1) as f64 + 1.0).sqrt()
}

/// Error growth of `S̄ = UᵀB`: `m·t^{1/2}·p^{1/2}`.
pub fn l2(m: usize, t: usize, p: usize) -> f64 {
    m as f64 * (t as f64).sqrt() * (p as f64).sqrt()
}

/// Error growth of `Ȳ = B − US̄`: `p^{1/2}(1 + t^{3/2})`.
pub fn l3(t: usize, p: usize) -> f64 {
    (p as f64).sqrt() * (1.0 + (t as f64).powf(1.5))
}

/// Error growth of `S_B = S₁ + S₂R₁`: `p^{1/2}(1 + p^{3/2})`.
pub fn l4(p: usize) -> f64 {
    let p = p as f64;
    p.sqrt() * (1.0 + p.powf(1.5))
}

/// Error growth of `R_B = R₂R₁`: `p²`.
pub fn l5(p: usize) -> f64 {
    (p * p) as f64
}

/// Parameters of the bound functions: row count, (maximum) block width,
/// machine unit and the Householder calibration constant `d₁`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundContext {
    pub m: usize,
    pub p: usize,
    pub eps: f64,
    pub d1: f64,
}

impl BoundContext {
    /// Binary64 context with `d₁ = 1`.
    pub fn new(m: usize, p: usize) -> Result<Self> {
        Self::with_params(m, p, f64::unit_roundoff(), 1.0)
    }

    /// Context using the unit roundoff of `T`.
    pub fn for_scalar<T: Scalar>(m: usize, p: usize) -> Result<Self> {
        Self::with_params(m, p, T::unit_roundoff().to_f64_lossy(), 1.0)
    }

    pub fn with_params(m: usize, p: usize, eps: f64, d1: f64) -> Result<Self> {
        if p == 0 || m < p {
            return Err(Error::BoundContext(format!("need m >= p >= 1, got m={m}, p={p}")));
        }
        if !(eps > 0.0 && eps < 1.0) || !(d1 > 0.0 && d1.is_finite()) {
            return Err(Error::BoundContext(format!("bad eps={eps} or d1={d1}")));
        }
        let ctx = Self { m, p, eps, d1 };
        let panel = eps * ctx.l1(m, p);
        if panel >= 1.0 {
            return Err(Error::BoundContext(format!(
                "eps * L1(m, p) = {panel:e} is not below 1"
            )));
        }
        Ok(ctx)
    }

    /// Context for factoring an `m`-row matrix with `blocks`, checking that
    /// the final orthogonality bound is meaningful (`ε·f₁ < 1`).
    pub fn for_partition<T: Scalar>(m: usize, blocks: &BlockPartition) -> Result<Self> {
        let ctx = Self::for_scalar::<T>(m, blocks.max_width())?;
        ctx.ensure_meaningful(blocks.len())?;
        Ok(ctx)
    }

    /// Checks `ε·f₁(m, t_{s−1}, p) < 1` for `s` blocks.
    pub fn ensure_meaningful(&self, s: usize) -> Result<()> {
        let t = s.saturating_sub(1) * self.p;
        let v = self.eps * self.f1(self.m, t, self.p)?;
        if v >= 1.0 {
            return Err(Error::BoundContext(format!(
                "eps * f1(m, {t}, p) = {v:e} is not below 1"
            )));
        }
        Ok(())
    }

    /// Panel-kernel growth `L₁(m, p) = d₁·m·p^{3/2}`, or `m + 4` for the
    /// normalization used on single columns.
    pub fn l1(&self, m: usize, p: usize) -> f64 {
        l1_with(self.d1, m, p)
    }

    /// `L_F = L₁ + L₂ + L₃`, the backward error growth of one block CGS step.
    pub fn lf(&self, m: usize, t: usize, p: usize) -> f64 {
        self.l1(m, p) + l2(m, t, p) + l3(t, p)
    }

    /// `f₁(m, t_k, p) = √(α²k + 1)·L_F(m, t_k, p)` with `t_k = k·p`.
    pub fn f1(&self, m: usize, t: usize, p: usize) -> Result<f64> {
        let k = block_count(t, p)?;
        Ok(self.f1_blocks(m, k, p))
    }

    /// `f₁` indexed by the number of completed blocks `k` (`t = k·p`).
    pub fn f1_blocks(&self, m: usize, k: usize, p: usize) -> f64 {
        (alpha_squared() * k as f64 + 1.0).sqrt() * self.lf(m, k * p, p)
    }

    /// `γ = L_F / f₁`; equals `γ_{k+1}` at `t = k·p`.
    pub fn gamma(&self, m: usize, t: usize, p: usize) -> Result<f64> {
        Ok(self.lf(m, t, p) / self.f1(m, t, p)?)
    }

    /// `f_sing = f₁ + L_F + γ·L₅`.
    pub fn f_sing(&self, m: usize, t: usize, p: usize) -> Result<f64> {
        let f1 = self.f1(m, t, p)?;
        let lf = self.lf(m, t, p);
        Ok(f1 + lf + (lf / f1) * l5(p))
    }

    /// Residual growth of one reorthogonalized block step:
    /// `2L₁ + 2L₃ + L₄ + L₅`.
    pub fn f_resid(&self, m: usize, t: usize, p: usize) -> f64 {
        2.0 * self.l1(m, p) + 2.0 * l3(t, p) + l4(p) + l5(p)
    }

    /// Residual growth after `k` blocks: `k^{1/2}·f_resid(m, t, p)` with
    /// `t = t_{k−1}`.
    pub fn f2(&self, m: usize, t: usize, p: usize, k: usize) -> f64 {
        (k as f64).sqrt() * self.f_resid(m, t, p)
    }

    /// `ε·f₁(m, t_{k−1}, p)`: the orthogonality bound after `k` blocks.
    pub fn orthogonality_bound(&self, k: usize) -> f64 {
        self.eps * self.f1_blocks(self.m, k.saturating_sub(1), self.p)
    }

    /// `ε·f₂(m, t_{k−1}, p)`: the relative residual bound after `k` blocks.
    pub fn residual_bound(&self, k: usize) -> f64 {
        let t = k.saturating_sub(1) * self.p;
        self.eps * self.f2(self.m, t, self.p, k)
    }
}

fn l1_with(d1: f64, m: usize, p: usize) -> f64 {
    if p == 1 {
        (m as f64 + 4.0).max(1.0)
    } else {
        d1 * m as f64 * (p as f64).powf(1.5)
    }
}

fn block_count(t: usize, p: usize) -> Result<usize> {
    if p == 0 || t % p != 0 {
        return Err(Error::NotBlockMultiple { t, p });
    }
    Ok(t / p)
}

/// Left- and right-hand side of one assumption inequality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckOutcome {
    pub passed: bool,
    pub lhs: f64,
    pub rhs: f64,
}

impl CheckOutcome {
    fn new(lhs: f64, rhs: f64) -> Self {
        // NaN compares false and therefore fails.
        Self {
            passed: lhs <= rhs,
            lhs,
            rhs,
        }
    }

    /// `rhs − lhs`; negative when the check fails.
    pub fn margin(&self) -> f64 {
        self.rhs - self.lhs
    }
}

/// Verdict for block `k ≥ 2`.
///
/// Check A: `ε·f_sing(m, t_{k−1}, p)·‖A_k‖₂·‖R_kk⁻¹‖₂ ≤ γ_k`.
/// Check B: `‖(R₂^{(k)})⁻¹‖₂ ≤ √(1 + γ_k²)`, where `R₂^{(k)}` is the
/// triangular factor of the second pass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AssumptionVerdict {
    pub block_index: usize,
    pub check_a: CheckOutcome,
    pub check_b: CheckOutcome,
    pub either_passed: bool,
}

impl AssumptionVerdict {
    /// Human-readable description of which check failed, for reports.
    pub fn describe(&self) -> String {
        format!(
            "block {}: check A {} (lhs {:.3e} vs gamma_k {:.3e}); check B {} (||R2^-1|| {:.6} vs {:.6})",
            self.block_index,
            if self.check_a.passed { "passed" } else { "failed" },
            self.check_a.lhs,
            self.check_a.rhs,
            if self.check_b.passed { "passed" } else { "failed" },
            self.check_b.lhs,
            self.check_b.rhs,
        )
    }
}

/// Evaluates both assumptions for every block after the first.
///
/// Traces from one-pass methods carry no second-pass factor, so check B
/// fails for them with an infinite left-hand side.
pub fn check_assumptions<T: Scalar>(
    trace: &FactorizationTrace<T>,
    ctx: &BoundContext,
) -> Result<Vec<AssumptionVerdict>> {
    let m = trace.factorization.q.rows();
    if ctx.m != m {
        return Err(Error::BoundContext(format!(
            "context has m = {} but the trace has {m} rows",
            ctx.m
        )));
    }
    if ctx.p < trace.partition.max_width() {
        return Err(Error::BoundContext(format!(
            "context has p = {} but the widest block is {}",
            ctx.p,
            trace.partition.max_width()
        )));
    }
    let p = ctx.p;
    trace
        .per_block
        .iter()
        .filter(|rec| rec.index >= 2)
        .map(|rec| {
            let k = rec.index;
            let gk = gamma_k(k);
            let fs = ctx.f_sing(m, (k - 1) * p, p)?;
            let lhs_a =
                ctx.eps * fs * rec.block_norm.to_f64_lossy() * rec.r_kk_inv_norm.to_f64_lossy();
            let check_a = CheckOutcome::new(lhs_a, gk);
            let lhs_b = rec.r2_inv_norm.map_or(f64::INFINITY, Scalar::to_f64_lossy);
            let check_b = CheckOutcome::new(lhs_b, (1.0 + gk * gk).sqrt());
            Ok(AssumptionVerdict {
                block_index: k,
                check_a,
                check_b,
                either_passed: check_a.passed || check_b.passed,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> BoundContext {
        BoundContext::new(1000, 1).unwrap()
    }

    #[test]
    fn l1_examples() {
        let c = ctx();
        assert_eq!(c.l1(10, 1), 14.0);
        assert_eq!(c.l1(8, 4), 64.0);
        assert_eq!(c.l1(1, 1), 5.0);
    }

    #[test]
    fn small_l_functions() {
        assert_eq!(l4(1), 2.0);
        assert_eq!(l5(1), 1.0);
        assert_eq!(l3(0, 9), 3.0);
        assert_eq!(l2(100, 16, 4), 800.0);
    }

    #[test]
    fn lf_dominates_l1() {
        let c = ctx();
        for (m, t, p) in [(10, 0, 1), (50, 8, 4), (500, 64, 16)] {
            assert!(c.lf(m, t, p) >= c.l1(m, p));
        }
    }

    #[test]
    fn alpha_and_gamma() {
        assert!((alpha() - 3.56).abs() < 5e-3);
        assert_eq!(gamma_k(1), 1.0);
        let expected = 1.0 / (8.0 + 4.0 * 2f64.sqrt()).sqrt();
        assert!((gamma_k(2) - expected).abs() < 1e-15);
    }

    #[test]
    fn f1_requires_block_multiple() {
        assert!(matches!(
            ctx().f1(100, 5, 4),
            Err(Error::NotBlockMultiple { t: 5, p: 4 })
        ));
        assert!(ctx().f_sing(100, 6, 4).is_err());
        assert!(ctx().gamma(100, 6, 4).is_err());
    }

    #[test]
    fn f1_base_case_is_lf() {
        let c = ctx();
        assert_eq!(c.f1(100, 0, 4).unwrap(), c.lf(100, 0, 4));
        assert!(c.f1(100, 0, 4).unwrap() >= c.l1(100, 4));
    }

    #[test]
    fn context_rejects_meaningless_sizes() {
        assert!(BoundContext::new(3, 4).is_err());
        assert!(BoundContext::with_params(10, 2, 0.5, 1.0).is_err());
        assert!(BoundContext::with_params(10, 2, 1e-16, 0.0).is_err());
        // eps * L1 >= 1 for a huge d1
        assert!(BoundContext::with_params(10, 2, 1e-3, 100.0).is_err());
        let c = BoundContext::with_params(100, 1, 1e-3, 1.0).unwrap();
        assert!(c.ensure_meaningful(1).is_ok());
        assert!(c.ensure_meaningful(50).is_err());
    }

    #[test]
    fn check_outcome_nan_fails() {
        assert!(!CheckOutcome::new(f64::NAN, 1.0).passed);
        assert!(!CheckOutcome::new(f64::INFINITY, 1.0).passed);
        assert!(CheckOutcome::new(0.5, 1.0).margin() > 0.0);
    }
}
