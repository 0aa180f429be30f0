//! Single steps of classical Gram–Schmidt against an existing basis `u`.
//!
//! * [`cgs2_step`]: one column, projected out twice, normalized after each pass.
//! * [`block_cgs_step`]: one panel, projected out once, then `local_qr`.
//! * [`block_cgs2_step`]: two chained [`block_cgs_step`]s, the second one
//!   applied to the orthonormal factor of the first.
//!
//! Every step returns factors with `b = u·s + q·r` up to roundoff.

use crate::error::{Error, Result};
use crate::local_qr::local_qr;
use crate::matrix::{norm2, upper_triangular_inverse, MatRef, Matrix};
use crate::scalar::Scalar;
use crate::spectral::spectral_norm;

/// Result of [`cgs2_step`].
#[derive(Clone, Debug, PartialEq)]
pub struct Cgs2Step<T> {
    /// New unit vector (m×1).
    pub q: Matrix<T>,
    /// `r₂·r₁ ≥ 0`.
    pub r: T,
    /// Coefficients against `u` (t×1).
    pub s: Matrix<T>,
    /// Norm after the first projection.
    pub r1: T,
    /// Norm after the second projection (of an already unit vector).
    pub r2: T,
}

/// Result of a block step: `q` (m×p), upper-triangular `r` (p×p) and the
/// coefficient block `s` (t×p).
#[derive(Clone, Debug, PartialEq)]
pub struct BlockStep<T> {
    pub q: Matrix<T>,
    pub r: Matrix<T>,
    pub s: Matrix<T>,
}

/// Triangular factors of the two passes of [`block_cgs2_step`], kept for the
/// stability-assumption checks.
#[derive(Clone, Debug, PartialEq)]
pub struct ReorthAudit<T> {
    pub r1: Matrix<T>,
    pub r2: Matrix<T>,
    /// `‖R₂⁻¹‖₂`, infinite if `R₂` is singular.
    pub r2_inv_norm: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockCgs2Step<T> {
    pub step: BlockStep<T>,
    pub audit: ReorthAudit<T>,
}

fn check_step_shapes<T>(u: MatRef<'_, T>, b: MatRef<'_, T>) -> Result<()>
where
    T: Scalar,
{
    if u.rows() != b.rows() {
        return Err(Error::DimensionMismatch {
            op: "gram-schmidt step",
            left_rows: u.rows(),
            left_cols: u.cols(),
            right_rows: b.rows(),
            right_cols: b.cols(),
        });
    }
    if u.cols() == 0 || b.cols() == 0 {
        return Err(Error::Shape("basis and panel need at least one column".into()));
    }
    if u.cols() + b.cols() > u.rows() {
        return Err(Error::Shape(format!(
            "t + p = {} exceeds m = {}",
            u.cols() + b.cols(),
            u.rows()
        )));
    }
    Ok(())
}

/// `y = b − u·(uᵀb)`, returning `(uᵀb, y)`.
fn project_out<T: Scalar>(u: MatRef<'_, T>, b: MatRef<'_, T>) -> Result<(Matrix<T>, Matrix<T>)> {
    let s = u.tr_matmul(b)?;
    let us = u.matmul(s.view())?;
    let y = b.sub(us.view())?;
    Ok((s, y))
}

/// One step of CGS2 for a single column `b` (m×1).
pub fn cgs2_step<'a, 'b, T: Scalar>(
    u: impl Into<MatRef<'a, T>>,
    b: impl Into<MatRef<'b, T>>,
) -> Result<Cgs2Step<T>> {
    let (u, b) = (u.into(), b.into());
    check_step_shapes(u, b)?;
    if b.cols() != 1 {
        return Err(Error::Shape(format!("cgs2_step takes one column, got {}", b.cols())));
    }
    let (s1, y1) = project_out(u, b)?;
    let r1 = norm2(y1.as_slice());
    if r1 == T::zero() {
        return Err(Error::Breakdown { pass: 1 });
    }
    let q1 = y1.map(|v| v / r1);

    let (s2, y2) = project_out(u, q1.view())?;
    let r2 = norm2(y2.as_slice());
    if r2 == T::zero() {
        return Err(Error::Breakdown { pass: 2 });
    }
    let q = y2.map(|v| v / r2);

    let s = Matrix::from_parts(
        s1.rows(),
        1,
        s1.as_slice()
            .iter()
            .zip(s2.as_slice())
            .map(|(&a, &c)| a + c * r1)
            .collect(),
    );
    Ok(Cgs2Step {
        q,
        r: r2 * r1,
        s,
        r1,
        r2,
    })
}

/// One step of block CGS: `S̄ = uᵀb`, `Ȳ = b − uS̄`, `(Q̄, R̄) = local_qr(Ȳ)`.
pub fn block_cgs_step<'a, 'b, T: Scalar>(
    u: impl Into<MatRef<'a, T>>,
    b: impl Into<MatRef<'b, T>>,
) -> Result<BlockStep<T>> {
    let (u, b) = (u.into(), b.into());
    check_step_shapes(u, b)?;
    let (s, y) = project_out(u, b)?;
    let f = local_qr(&y)?;
    Ok(BlockStep { q: f.q, r: f.r, s })
}

/// One step of block CGS2:
///
/// ```text
/// (Q₁, R₁, S₁) = block_cgs_step(u, b)
/// (Q_B, R₂, S₂) = block_cgs_step(u, Q₁)
/// S_B = S₁ + S₂R₁,  R_B = R₂R₁
/// ```
pub fn block_cgs2_step<'a, 'b, T: Scalar>(
    u: impl Into<MatRef<'a, T>>,
    b: impl Into<MatRef<'b, T>>,
) -> Result<BlockCgs2Step<T>> {
    let (u, b) = (u.into(), b.into());
    let first = block_cgs_step(u, b)?;
    let second = block_cgs_step(u, first.q.view())?;
    let s = first
        .s
        .view()
        .add(second.s.view().matmul(first.r.view())?.view())?;
    let r = second.r.view().matmul(first.r.view())?;
    let r2_inv_norm = spectral_norm(&upper_triangular_inverse(second.r.view())?)?;
    Ok(BlockCgs2Step {
        step: BlockStep { q: second.q, r, s },
        audit: ReorthAudit {
            r1: first.r,
            r2: second.r,
            r2_inv_norm,
        },
    })
}
