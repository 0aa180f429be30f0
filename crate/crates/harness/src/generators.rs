//! Test matrices with controlled conditioning.

use bgs::{local_qr, Matrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{HarnessError, Result};

/// Seeded m×n matrix of independent standard normal entries, filled in
/// column-major order from a ChaCha8 stream.
pub fn gaussian(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Matrix<f64> {
    let data = (0..m * n).map(|_| StandardNormal.sample(rng)).collect();
    Matrix::from_col_major(m, n, data).expect("length matches shape")
}

/// Orthonormal factor of the Householder QR of a Gaussian matrix.
pub fn random_orthonormal(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Result<Matrix<f64>> {
    Ok(local_qr(&gaussian(rng, m, n))?.q)
}

/// Singular values `1, κ^{-1/(n-1)}, …, 1/κ`.
pub fn geometric_spectrum(n: usize, kappa: f64) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n)
        .map(|i| kappa.powf(-(i as f64) / (n - 1) as f64))
        .collect()
}

/// `A = U·Σ·Vᵀ` with `U` (m×n) and `V` (n×n) random orthonormal and `Σ`
/// geometric from 1 down to `1/kappa`.
pub fn gen_svd_spectrum(m: usize, n: usize, kappa: f64, seed: u64) -> Result<Matrix<f64>> {
    if n == 0 || n > m {
        return Err(HarnessError::Config(format!(
            "svd-spectrum needs 1 <= n <= m, got m={m}, n={n}"
        )));
    }
    if !(kappa >= 1.0) || !kappa.is_finite() {
        return Err(HarnessError::Config(format!("kappa must be >= 1, got {kappa}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_orthonormal(&mut rng, m, n)?;
    let v = random_orthonormal(&mut rng, n, n)?;
    let sigma = geometric_spectrum(n, kappa);
    let us = Matrix::from_fn(m, n, |i, j| u[(i, j)] * sigma[j]);
    Ok(us.view().matmul(v.transpose().view())?)
}

/// Läuchli matrix: a row of ones above `eps_val·I_n`.
pub fn gen_lauchli(n: usize, eps_val: f64) -> Result<Matrix<f64>> {
    if n == 0 || !(eps_val > 0.0) || !eps_val.is_finite() {
        return Err(HarnessError::Config(format!(
            "lauchli needs n >= 1 and eps > 0, got n={n}, eps={eps_val}"
        )));
    }
    Ok(Matrix::from_fn(n + 1, n, |i, j| {
        if i == 0 {
            1.0
        } else if i == j + 1 {
            eps_val
        } else {
            0.0
        }
    }))
}

/// `a[i][j] = 1/(i + j + 1)` (0-based), the leading m×n part of the Hilbert
/// matrix.
pub fn gen_hilbert_like(m: usize, n: usize) -> Result<Matrix<f64>> {
    if n == 0 || n > m {
        return Err(HarnessError::Config(format!(
            "hilbert-like needs 1 <= n <= m, got m={m}, n={n}"
        )));
    }
    Ok(Matrix::from_fn(m, n, |i, j| 1.0 / (i + j + 1) as f64))
}
