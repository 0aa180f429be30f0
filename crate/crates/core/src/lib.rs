//! Reorthogonalized classical Gram–Schmidt QR factorizations (CGS2 and
//! block CGS2) together with the computable error bounds and stability
//! assumptions that certify them.
//!
//! Everything is generic over [`Scalar`] (`f32` or `f64`); the `*64` and
//! `*32` aliases name the common instantiations.
//!
//! ```
//! use bgs::{bcgs2, orthogonality_defect, BlockPartition, Matrix64};
//!
//! let a = Matrix64::from_fn(40, 12, |i, j| 1.0 / (i + j + 1) as f64 + (i == j) as u8 as f64);
//! let trace = bcgs2(&a, &BlockPartition::uniform(12, 4).unwrap()).unwrap();
//! assert!(orthogonality_defect(trace.q()).unwrap() < 1e-13);
//! ```

pub mod bounds;
pub mod diagnostics;
pub mod drivers;
pub mod error;
pub mod kernels;
pub mod local_qr;
pub mod matrix;
pub mod mtx;
pub mod partition;
pub mod scalar;
pub mod spectral;

pub use bounds::{check_assumptions, gamma_k, AssumptionVerdict, BoundContext, CheckOutcome};
pub use diagnostics::{orthogonality_defect, relative_residual, RelativeResidual};
pub use drivers::{bcgs, bcgs2, cgs, cgs2, householder, mgs, BlockRecord, FactorizationTrace};
pub use error::{Error, Result};
pub use kernels::{
    block_cgs2_step, block_cgs_step, cgs2_step, BlockCgs2Step, BlockStep, Cgs2Step, ReorthAudit,
};
pub use local_qr::{local_qr, LocalQr};
pub use matrix::{matmul, norm2, upper_triangular_inverse, MatRef, Matrix, QRFactorization};
pub use mtx::{read_matrix_market, write_matrix_market};
pub use partition::BlockPartition;
pub use scalar::Scalar;
pub use spectral::{condition_number, singular_values, spectral_norm};

pub type Matrix64 = Matrix<f64>;
pub type Matrix32 = Matrix<f32>;
pub type QRFactorization64 = QRFactorization<f64>;
pub type QRFactorization32 = QRFactorization<f32>;
pub type FactorizationTrace64 = FactorizationTrace<f64>;
pub type FactorizationTrace32 = FactorizationTrace<f32>;
