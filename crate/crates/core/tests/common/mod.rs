#![allow(dead_code)]

use bgs::Matrix;
use nalgebra::DMatrix;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const EPS: f64 = f64::EPSILON / 2.0;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Matrix<f64> {
    let data: Vec<f64> = (0..m * n).map(|_| StandardNormal.sample(rng)).collect();
    Matrix::from_col_major(m, n, data).unwrap()
}

pub fn to_na(a: &Matrix<f64>) -> DMatrix<f64> {
    DMatrix::from_column_slice(a.rows(), a.cols(), a.as_slice())
}

pub fn from_na(a: &DMatrix<f64>) -> Matrix<f64> {
    Matrix::from_col_major(a.nrows(), a.ncols(), a.as_slice().to_vec()).unwrap()
}

/// Orthonormal m×n from nalgebra's Householder QR of a Gaussian matrix.
pub fn orthonormal(rng: &mut ChaCha8Rng, m: usize, n: usize) -> Matrix<f64> {
    let g = to_na(&gaussian(rng, m, n));
    from_na(&g.qr().q())
}

/// `U·diag(σ)·Vᵀ` with σ geometric from 1 down to 1/kappa.
pub fn graded(rng: &mut ChaCha8Rng, m: usize, n: usize, kappa: f64) -> Matrix<f64> {
    let u = to_na(&orthonormal(rng, m, n));
    let v = to_na(&orthonormal(rng, n, n));
    let sigma = DMatrix::from_fn(n, n, |i, j| {
        if i != j {
            0.0
        } else if n == 1 {
            1.0
        } else {
            kappa.powf(-(i as f64) / (n - 1) as f64)
        }
    });
    from_na(&(u * sigma * v.transpose()))
}

/// Largest singular value through the symmetric eigensolver on `aᵀa`.
pub fn eig_norm(a: &Matrix<f64>) -> f64 {
    let a = to_na(a);
    let g = a.transpose() * &a;
    g.symmetric_eigen()
        .eigenvalues
        .iter()
        .cloned()
        .fold(0.0f64, f64::max)
        .sqrt()
}

/// Spectral norm from nalgebra's SVD.
pub fn na_norm(a: &Matrix<f64>) -> f64 {
    to_na(a).svd(false, false).singular_values.max()
}

pub fn na_defect(q: &Matrix<f64>) -> f64 {
    let q = to_na(q);
    let n = q.ncols();
    na_svd_max(&(DMatrix::identity(n, n) - q.transpose() * &q))
}

pub fn na_svd_max(a: &DMatrix<f64>) -> f64 {
    a.clone().svd(false, false).singular_values.max()
}

pub fn sub(a: &Matrix<f64>, b: &Matrix<f64>) -> Matrix<f64> {
    a.view().sub(b.view()).unwrap()
}
