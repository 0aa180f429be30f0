//! Dense column-major matrices and the handful of kernels the factorizations need.
//!
//! Every reduction runs in ascending index order so results are bitwise
//! reproducible from run to run.

use std::fmt;
use std::ops::{Index, IndexMut, Range};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Dense real matrix stored column by column.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

/// Borrowed view of a contiguous range of columns of a [`Matrix`].
///
/// Column ranges of column-major storage are contiguous, so the view is just
/// a slice plus a shape.
#[derive(Clone, Copy)]
pub struct MatRef<'a, T> {
    rows: usize,
    cols: usize,
    data: &'a [T],
}

impl<T: Scalar> Matrix<T> {
    /// All-zero matrix. Zero-sized shapes are allowed for preallocation.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    /// Builds a matrix from column-major data, rejecting empty shapes,
    /// length mismatches and non-finite entries.
    pub fn from_col_major(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty);
        }
        if data.len() != rows * cols {
            return Err(Error::DataLength {
                rows,
                cols,
                len: data.len(),
            });
        }
        if let Some(pos) = data.iter().position(|x| !x.is_finite()) {
            return Err(Error::NonFinite {
                row: pos % rows,
                col: pos / rows,
            });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a list of rows. Convenient for literals.
    pub fn from_rows<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != ncols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        let mut data = Vec::with_capacity(nrows * ncols);
        for j in 0..ncols {
            data.extend(rows.iter().map(|r| r.as_ref()[j]));
        }
        Self::from_col_major(nrows, ncols, data)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for j in 0..cols {
            for i in 0..rows {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub(crate) fn from_parts(rows: usize, cols: usize, data: Vec<T>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Column-major entries.
    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    pub fn col(&self, j: usize) -> &[T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn col_mut(&mut self, j: usize) -> &mut [T] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn view(&self) -> MatRef<'_, T> {
        MatRef {
            rows: self.rows,
            cols: self.cols,
            data: &self.data,
        }
    }

    /// View of columns `range` (e.g. one block of a partition).
    pub fn columns(&self, range: Range<usize>) -> MatRef<'_, T> {
        self.view().columns(range)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.cols).all(|j| (j + 1..self.rows).all(|i| self[(i, j)] == T::zero()))
    }

    /// Copies `src` into the block whose top-left corner is `(row, col)`.
    pub fn set_block(&mut self, row: usize, col: usize, src: MatRef<'_, T>) {
        assert!(row + src.rows <= self.rows && col + src.cols <= self.cols);
        for j in 0..src.cols {
            let dst = &mut self.col_mut(col + j)[row..row + src.rows];
            dst.copy_from_slice(src.col(j));
        }
    }

    /// Copy of the block `rows x cols`.
    pub fn block(&self, rows: Range<usize>, cols: Range<usize>) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| {
            self[(rows.start + i, cols.start + j)]
        })
    }

    pub fn scale(&self, s: T) -> Self {
        Self::from_parts(
            self.rows,
            self.cols,
            self.data.iter().map(|&x| x * s).collect(),
        )
    }

    pub fn map(&self, f: impl Fn(T) -> T) -> Self {
        Self::from_parts(self.rows, self.cols, self.data.iter().map(|&x| f(x)).collect())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;

    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[j * self.rows + i]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[j * self.rows + i]
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{:>12.5?} ", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<'a, T: Scalar> From<&'a Matrix<T>> for MatRef<'a, T> {
    fn from(m: &'a Matrix<T>) -> Self {
        m.view()
    }
}

impl<'a, T: Scalar> MatRef<'a, T> {
    /// Wraps a column-major slice.
    pub fn new(rows: usize, cols: usize, data: &'a [T]) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DataLength {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn as_slice(&self) -> &'a [T] {
        self.data
    }

    pub fn col(&self, j: usize) -> &'a [T] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[j * self.rows + i]
    }

    pub fn columns(&self, range: Range<usize>) -> MatRef<'a, T> {
        assert!(range.end <= self.cols, "column range out of bounds");
        MatRef {
            rows: self.rows,
            cols: range.len(),
            data: &self.data[range.start * self.rows..range.end * self.rows],
        }
    }

    pub fn to_owned(&self) -> Matrix<T> {
        Matrix::from_parts(self.rows, self.cols, self.data.to_vec())
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// `self * rhs`, accumulated column by column in ascending inner index.
    /// Each sum starts from its first product, so a one-term sum is that
    /// product exactly.
    pub fn matmul(&self, rhs: MatRef<'_, T>) -> Result<Matrix<T>> {
        if self.cols != rhs.rows {
            return Err(mismatch("matmul", self.shape(), rhs.shape()));
        }
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for j in 0..rhs.cols {
            let dst = out.col_mut(j);
            for l in 0..self.cols {
                let s = rhs.get(l, j);
                if l == 0 {
                    for (d, &a) in dst.iter_mut().zip(self.col(l)) {
                        *d = a * s;
                    }
                } else {
                    for (d, &a) in dst.iter_mut().zip(self.col(l)) {
                        *d = *d + a * s;
                    }
                }
            }
        }
        Ok(out)
    }

    /// `selfᵀ * rhs` without forming the transpose; each entry is an
    /// ascending-order dot product.
    pub fn tr_matmul(&self, rhs: MatRef<'_, T>) -> Result<Matrix<T>> {
        if self.rows != rhs.rows {
            return Err(mismatch("tr_matmul", self.shape(), rhs.shape()));
        }
        Ok(Matrix::from_fn(self.cols, rhs.cols, |i, j| {
            dot(self.col(i), rhs.col(j))
        }))
    }

    /// Elementwise `self - rhs`.
    pub fn sub(&self, rhs: MatRef<'_, T>) -> Result<Matrix<T>> {
        if self.shape() != rhs.shape() {
            return Err(mismatch("sub", self.shape(), rhs.shape()));
        }
        Ok(Matrix::from_parts(
            self.rows,
            self.cols,
            self.data.iter().zip(rhs.data).map(|(&a, &b)| a - b).collect(),
        ))
    }

    pub fn add(&self, rhs: MatRef<'_, T>) -> Result<Matrix<T>> {
        if self.shape() != rhs.shape() {
            return Err(mismatch("add", self.shape(), rhs.shape()));
        }
        Ok(Matrix::from_parts(
            self.rows,
            self.cols,
            self.data.iter().zip(rhs.data).map(|(&a, &b)| a + b).collect(),
        ))
    }
}

fn mismatch(op: &'static str, left: (usize, usize), right: (usize, usize)) -> Error {
    Error::DimensionMismatch {
        op,
        left_rows: left.0,
        left_cols: left.1,
        right_rows: right.0,
        right_cols: right.1,
    }
}

/// Matrix product `a * b`; see [`MatRef::matmul`] for the summation order.
pub fn matmul<T: Scalar>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    a.view().matmul(b.view())
}

pub(crate) fn dot<T: Scalar>(x: &[T], y: &[T]) -> T {
    let mut terms = x.iter().zip(y).map(|(&a, &b)| a * b);
    match terms.next() {
        Some(first) => terms.fold(first, |acc, v| acc + v),
        None => T::zero(),
    }
}

/// Euclidean norm of a vector.
///
/// Plain sum of squares, with a rescaled second pass only when that sum
/// overflows or underflows.
pub fn norm2<T: Scalar>(x: &[T]) -> T {
    let ss = dot(x, x);
    let tiny = T::min_positive_value() / T::epsilon();
    if ss.is_finite() && ss >= tiny {
        return ss.sqrt();
    }
    let scale = x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    if scale == T::zero() || !scale.is_finite() {
        return scale;
    }
    let ss = x
        .iter()
        .fold(T::zero(), |acc, &v| acc + (v / scale) * (v / scale));
    scale * ss.sqrt()
}

/// Thin QR factorization: `q` is m×n with (near) orthonormal columns, `r` is
/// n×n upper triangular.
#[derive(Clone, Debug, PartialEq)]
pub struct QRFactorization<T> {
    pub q: Matrix<T>,
    pub r: Matrix<T>,
}

impl<T: Scalar> QRFactorization<T> {
    /// Pairs the factors, checking shapes and writing exact zeros below the
    /// diagonal of `r`.
    pub fn new(q: Matrix<T>, mut r: Matrix<T>) -> Result<Self> {
        if r.rows() != r.cols() || q.cols() != r.rows() {
            return Err(mismatch("qr factors", q.shape(), r.shape()));
        }
        for j in 0..r.cols() {
            for i in j + 1..r.rows() {
                r[(i, j)] = T::zero();
            }
        }
        Ok(Self { q, r })
    }

    /// `q * r`.
    pub fn reconstruct(&self) -> Matrix<T> {
        self.q
            .view()
            .matmul(self.r.view())
            .expect("factor shapes checked on construction")
    }
}

/// Inverse of an upper-triangular matrix by back substitution against the
/// identity. A zero pivot yields infinite or NaN entries rather than an error.
pub fn upper_triangular_inverse<T: Scalar>(r: MatRef<'_, T>) -> Result<Matrix<T>> {
    let n = r.rows();
    if r.cols() != n {
        return Err(Error::Shape(format!(
            "triangular inverse needs a square matrix, got {}x{}",
            r.rows(),
            r.cols()
        )));
    }
    let mut inv = Matrix::zeros(n, n);
    for j in 0..n {
        for i in (0..=j).rev() {
            let mut acc = if i == j { T::one() } else { T::zero() };
            for k in i + 1..=j {
                acc = acc - r.get(i, k) * inv[(k, j)];
            }
            inv[(i, j)] = acc / r.get(i, i);
        }
    }
    Ok(inv)
}
