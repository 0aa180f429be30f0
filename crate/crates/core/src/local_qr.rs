//! Panel QR kernel used inside every block step.
//!
//! Householder thin QR for panels of two or more columns; plain
//! normalization `r = ‖b‖₂, q = b / r` for a single column, so that the
//! block algorithm with unit widths reproduces the vector algorithm exactly.
//! The triangular factor always has a nonnegative diagonal.

use crate::bounds::BoundContext;
use crate::error::{Error, Result};
use crate::matrix::{norm2, MatRef, Matrix};
use crate::scalar::Scalar;
use crate::spectral::spectral_norm;

/// `q` (m×p, near left-orthogonal) and `r` (p×p upper triangular with
/// nonnegative diagonal).
#[derive(Clone, Debug, PartialEq)]
pub struct LocalQr<T> {
    pub q: Matrix<T>,
    pub r: Matrix<T>,
}

/// `L₁(m, p)` under `ctx`'s calibration constant.
pub fn l1_bound(m: usize, p: usize, ctx: &BoundContext) -> f64 {
    ctx.l1(m, p)
}

/// Factors the panel `b`.
///
/// Fails with [`Error::RankDeficient`] when the smallest diagonal of `r` is
/// not above `m·ε·‖b‖₂` (for a single column: when it is zero).
pub fn local_qr<'a, T: Scalar>(b: impl Into<MatRef<'a, T>>) -> Result<LocalQr<T>> {
    let b = b.into();
    let (m, p) = b.shape();
    if p == 0 || m < p {
        return Err(Error::Shape(format!(
            "local_qr needs rows >= cols >= 1, got {m}x{p}"
        )));
    }
    let eps = T::unit_roundoff().to_f64_lossy();
    let l1 = BoundContext::with_params(m, p, eps, 1.0)
        .map(|ctx| ctx.l1(m, p))
        .map_err(|_| Error::PanelTooLarge {
            m,
            p,
            value: eps * m as f64 * (p as f64).powf(1.5),
        })?;
    debug_assert!(eps * l1 < 1.0);

    if p == 1 {
        return normalize(b);
    }
    householder(b)
}

fn normalize<T: Scalar>(b: MatRef<'_, T>) -> Result<LocalQr<T>> {
    let r = norm2(b.col(0));
    if r == T::zero() || !r.is_finite() {
        return Err(Error::RankDeficient {
            index: 0,
            magnitude: r.to_f64_lossy(),
            threshold: 0.0,
        });
    }
    let q = b.to_owned().map(|v| v / r);
    Ok(LocalQr {
        q,
        r: Matrix::from_parts(1, 1, vec![r]),
    })
}

fn householder<T: Scalar>(b: MatRef<'_, T>) -> Result<LocalQr<T>> {
    let (m, p) = b.shape();
    let mut w = b.to_owned();
    let mut tau = vec![T::zero(); p];

    for j in 0..p {
        // Reflector annihilating w[j+1.., j]; v = (1, w[j+1.., j]) afterwards.
        let x0 = w[(j, j)];
        let tail_norm = norm2(&w.col(j)[j + 1..]);
        if tail_norm == T::zero() {
            continue;
        }
        let beta = -x0.hypot(tail_norm).copysign(x0);
        tau[j] = (beta - x0) / beta;
        let scale = T::one() / (x0 - beta);
        for v in &mut w.col_mut(j)[j + 1..] {
            *v = *v * scale;
        }
        w[(j, j)] = beta;
        for c in j + 1..p {
            apply_reflector(&mut w, j, c, tau[j]);
        }
    }

    let mut r = Matrix::zeros(p, p);
    for j in 0..p {
        for i in 0..=j {
            r[(i, j)] = w[(i, j)];
        }
    }

    // q = H₀H₁…H_{p−1}[I_p; 0], applying reflectors from the last one back.
    let mut q = Matrix::zeros(m, p);
    for j in 0..p {
        q[(j, j)] = T::one();
    }
    for j in (0..p).rev() {
        if tau[j] == T::zero() {
            continue;
        }
        for c in j..p {
            let mut s = q[(j, c)];
            for i in j + 1..m {
                s = s + w[(i, j)] * q[(i, c)];
            }
            let f = tau[j] * s;
            q[(j, c)] = q[(j, c)] - f;
            for i in j + 1..m {
                q[(i, c)] = q[(i, c)] - f * w[(i, j)];
            }
        }
    }

    for j in 0..p {
        if r[(j, j)] < T::zero() {
            for c in j..p {
                r[(j, c)] = -r[(j, c)];
            }
            for v in q.col_mut(j) {
                *v = -*v;
            }
        }
    }

    let (index, smallest) = (0..p)
        .map(|j| (j, r[(j, j)]))
        .fold((0, T::infinity()), |best, cur| if cur.1 < best.1 { cur } else { best });
    let threshold = T::from_usize_lossy(m) * T::unit_roundoff() * spectral_norm(b)?;
    if !(smallest > threshold) {
        return Err(Error::RankDeficient {
            index,
            magnitude: smallest.to_f64_lossy(),
            threshold: threshold.to_f64_lossy(),
        });
    }
    Ok(LocalQr { q, r })
}

/// `w[j.., c] ← (I − τvvᵀ) w[j.., c]` with `v = (1, w[j+1.., j])`.
fn apply_reflector<T: Scalar>(w: &mut Matrix<T>, j: usize, c: usize, tau: T) {
    let m = w.rows();
    let mut s = w[(j, c)];
    for i in j + 1..m {
        s = s + w[(i, j)] * w[(i, c)];
    }
    let f = tau * s;
    w[(j, c)] = w[(j, c)] - f;
    for i in j + 1..m {
        let vij = w[(i, j)];
        w[(i, c)] = w[(i, c)] - f * vij;
    }
}
