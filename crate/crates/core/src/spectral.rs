//! Singular values and the spectral norm.
//!
//! Desk-scale matrices go through Householder bidiagonalization followed by
//! implicitly shifted QR on the bidiagonal (Golub–Kahan–Reinsch, values
//! only). Matrices whose smaller dimension exceeds
//! [`POWER_ITERATION_THRESHOLD`] use power iteration on `aᵀa`, which is also
//! the fallback when the bidiagonal QR fails to converge.

use crate::error::{Error, Result};
use crate::matrix::{norm2, MatRef, Matrix};
use crate::scalar::Scalar;

/// Above this `min(m, n)` the spectral norm is computed by power iteration.
pub const POWER_ITERATION_THRESHOLD: usize = 512;
pub const POWER_ITERATION_TOL: f64 = 1e-10;
pub const POWER_ITERATION_MAX_ITERS: usize = 10_000;

const QR_SWEEPS_PER_VALUE: usize = 75;

/// Largest singular value of `a`.
///
/// Returns `+inf` when `a` holds non-finite entries, which is how singular
/// triangular factors surface through [`crate::upper_triangular_inverse`].
pub fn spectral_norm<'a, T: Scalar>(a: impl Into<MatRef<'a, T>>) -> Result<T> {
    let a = a.into();
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::Empty);
    }
    if !a.is_finite() {
        return Ok(T::infinity());
    }
    if a.rows().min(a.cols()) > POWER_ITERATION_THRESHOLD {
        return power_iteration(a);
    }
    match singular_values(a) {
        Ok(sv) => Ok(sv[0]),
        Err(Error::NoConvergence { .. }) => power_iteration(a),
        Err(e) => Err(e),
    }
}

/// All singular values of `a`, largest first.
pub fn singular_values<'a, T: Scalar>(a: impl Into<MatRef<'a, T>>) -> Result<Vec<T>> {
    let a = a.into();
    if a.rows() == 0 || a.cols() == 0 {
        return Err(Error::Empty);
    }
    if !a.is_finite() {
        return Err(Error::NonFinite { row: 0, col: 0 });
    }
    // The reduction below wants rows >= cols.
    let mut work = if a.rows() >= a.cols() {
        a.to_owned()
    } else {
        a.to_owned().transpose()
    };
    let mut sv = golub_kahan_reinsch(&mut work)?;
    sv.sort_by(|x, y| y.partial_cmp(x).expect("finite singular values"));
    Ok(sv)
}

/// `σ_max / σ_min`; infinite when the smallest singular value is zero.
pub fn condition_number<'a, T: Scalar>(a: impl Into<MatRef<'a, T>>) -> Result<T> {
    let sv = singular_values(a)?;
    let smin = *sv.last().expect("nonempty");
    Ok(if smin == T::zero() {
        T::infinity()
    } else {
        sv[0] / smin
    })
}

fn sign<T: Scalar>(magnitude: T, of: T) -> T {
    if of >= T::zero() {
        magnitude.abs()
    } else {
        -magnitude.abs()
    }
}

fn golub_kahan_reinsch<T: Scalar>(a: &mut Matrix<T>) -> Result<Vec<T>> {
    let (m, n) = a.shape();
    let zero = T::zero();
    let one = T::one();
    let two = one + one;
    let mut w = vec![zero; n];
    let mut rv1 = vec![zero; n];
    let (mut g, mut scale, mut anorm) = (zero, zero, zero);

    // Householder reduction to upper bidiagonal form: w holds the diagonal,
    // rv1 the superdiagonal (rv1[0] = 0).
    for i in 0..n {
        let l = i + 1;
        rv1[i] = scale * g;
        g = zero;
        scale = zero;
        let mut s = zero;
        if i < m {
            for k in i..m {
                scale = scale + a[(k, i)].abs();
            }
            if scale != zero {
                for k in i..m {
                    a[(k, i)] = a[(k, i)] / scale;
                    s = s + a[(k, i)] * a[(k, i)];
                }
                let f = a[(i, i)];
                g = -sign(s.sqrt(), f);
                let h = f * g - s;
                a[(i, i)] = f - g;
                for j in l..n {
                    let mut s = zero;
                    for k in i..m {
                        s = s + a[(k, i)] * a[(k, j)];
                    }
                    let f = s / h;
                    for k in i..m {
                        a[(k, j)] = a[(k, j)] + f * a[(k, i)];
                    }
                }
            }
        }
        w[i] = scale * g;
        g = zero;
        scale = zero;
        s = zero;
        if i < m && i + 1 != n {
            for k in l..n {
                scale = scale + a[(i, k)].abs();
            }
            if scale != zero {
                for k in l..n {
                    a[(i, k)] = a[(i, k)] / scale;
                    s = s + a[(i, k)] * a[(i, k)];
                }
                let f = a[(i, l)];
                g = -sign(s.sqrt(), f);
                let h = f * g - s;
                a[(i, l)] = f - g;
                for k in l..n {
                    rv1[k] = a[(i, k)] / h;
                }
                for j in l..m {
                    let mut s = zero;
                    for k in l..n {
                        s = s + a[(j, k)] * a[(i, k)];
                    }
                    for k in l..n {
                        a[(j, k)] = a[(j, k)] + s * rv1[k];
                    }
                }
            }
        }
        anorm = anorm.max(w[i].abs() + rv1[i].abs());
    }

    // Diagonalize the bidiagonal form.
    for k in (0..n).rev() {
        let mut its = 0;
        loop {
            let mut cancel = true;
            let mut l = k;
            loop {
                if rv1[l].abs() + anorm == anorm {
                    cancel = false;
                    break;
                }
                // rv1[0] is zero, so the test above always stops at l = 0.
                if w[l - 1].abs() + anorm == anorm {
                    break;
                }
                l -= 1;
            }
            if cancel {
                // w[l - 1] is negligible: chase rv1[l] off the bidiagonal.
                let (mut c, mut s) = (zero, one);
                for i in l..=k {
                    let f = s * rv1[i];
                    rv1[i] = c * rv1[i];
                    if f.abs() + anorm == anorm {
                        break;
                    }
                    let g = w[i];
                    let h = f.hypot(g);
                    w[i] = h;
                    c = g / h;
                    s = -f / h;
                }
            }
            let z = w[k];
            if l == k {
                if z < zero {
                    w[k] = -z;
                }
                break;
            }
            its += 1;
            if its > QR_SWEEPS_PER_VALUE {
                return Err(Error::NoConvergence { iterations: its });
            }
            // Wilkinson-style shift from the trailing 2x2.
            let mut x = w[l];
            let nm = k - 1;
            let mut y = w[nm];
            let mut g = rv1[nm];
            let mut h = rv1[k];
            let mut f = ((y - z) * (y + z) + (g - h) * (g + h)) / (two * h * y);
            g = f.hypot(one);
            f = ((x - z) * (x + z) + h * ((y / (f + sign(g, f))) - h)) / x;
            let (mut c, mut s) = (one, one);
            for j in l..=nm {
                let i = j + 1;
                g = rv1[i];
                y = w[i];
                h = s * g;
                g = c * g;
                let mut z = f.hypot(h);
                rv1[j] = z;
                c = f / z;
                s = h / z;
                f = x * c + g * s;
                g = g * c - x * s;
                h = y * s;
                y = y * c;
                z = f.hypot(h);
                w[j] = z;
                if z != zero {
                    c = f / z;
                    s = h / z;
                }
                f = c * g + s * y;
                x = c * y - s * g;
            }
            rv1[l] = zero;
            rv1[k] = f;
            w[k] = x;
        }
    }
    Ok(w)
}

fn power_iteration<T: Scalar>(a: MatRef<'_, T>) -> Result<T> {
    let n = a.cols();
    let tol = T::from_f64_lossy(POWER_ITERATION_TOL);
    // Deterministic, non-symmetric start so it is unlikely to be orthogonal
    // to the dominant right singular vector.
    let start: Vec<T> = (0..n)
        .map(|i| T::one() + T::from_usize_lossy(i % 7) / T::from_usize_lossy(13))
        .collect();
    let nrm = norm2(&start);
    let mut x = Matrix::from_parts(n, 1, start.iter().map(|&v| v / nrm).collect());
    let mut estimate = T::zero();
    for _ in 0..POWER_ITERATION_MAX_ITERS {
        let ax = a.matmul(x.view())?;
        let sigma = norm2(ax.as_slice());
        if sigma == T::zero() {
            return Ok(T::zero());
        }
        let z = a.tr_matmul(ax.view())?;
        let zn = norm2(z.as_slice());
        if zn == T::zero() {
            return Ok(sigma);
        }
        x = z.scale(T::one() / zn);
        if (sigma - estimate).abs() <= tol * sigma {
            return Ok(sigma);
        }
        estimate = sigma;
    }
    Err(Error::NoConvergence {
        iterations: POWER_ITERATION_MAX_ITERS,
    })
}
