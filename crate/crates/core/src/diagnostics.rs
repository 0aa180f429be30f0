//! The two output contracts of a QR factorization: loss of orthogonality
//! and relative backward residual, both in the spectral norm.

use crate::error::{Error, Result};
use crate::matrix::{MatRef, Matrix, QRFactorization};
use crate::scalar::Scalar;
use crate::spectral::spectral_norm;

/// `‖I − qᵀq‖₂`.
pub fn orthogonality_defect<'a, T: Scalar>(q: impl Into<MatRef<'a, T>>) -> Result<T> {
    let q = q.into();
    if q.rows() < q.cols() {
        return Err(Error::Shape(format!(
            "orthogonality defect needs rows >= cols, got {}x{}",
            q.rows(),
            q.cols()
        )));
    }
    let gram = q.tr_matmul(q)?;
    let n = q.cols();
    let deviation = Matrix::from_fn(n, n, |i, j| {
        let id = if i == j { T::one() } else { T::zero() };
        id - gram[(i, j)]
    });
    spectral_norm(&deviation)
}

/// Relative residual `‖a − qr‖₂ / ‖a‖₂`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RelativeResidual<T> {
    pub value: T,
    /// `a` was identically zero; `value` is 0 by convention.
    pub zero_input: bool,
}

pub fn relative_residual<T: Scalar>(
    a: &Matrix<T>,
    f: &QRFactorization<T>,
) -> Result<RelativeResidual<T>> {
    let qr = f.q.view().matmul(f.r.view())?;
    let diff = a.view().sub(qr.view())?;
    let anorm = spectral_norm(a)?;
    if anorm == T::zero() {
        return Ok(RelativeResidual {
            value: T::zero(),
            zero_input: true,
        });
    }
    Ok(RelativeResidual {
        value: spectral_norm(&diff)? / anorm,
        zero_input: false,
    })
}
