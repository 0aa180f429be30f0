//! Full factorizations built from the step kernels.
//!
//! [`cgs2`] and [`bcgs2`] are the reorthogonalized methods; [`cgs`], [`mgs`]
//! and [`bcgs`] are one-pass baselines, and [`householder`] is a reference
//! factorization through the panel kernel. All of them return the same
//! [`FactorizationTrace`] so experiments can treat them uniformly.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::kernels::{block_cgs2_step, block_cgs_step, cgs2_step, BlockStep};
use crate::local_qr::local_qr;
use crate::matrix::{dot, norm2, upper_triangular_inverse, MatRef, Matrix, QRFactorization};
use crate::partition::BlockPartition;
use crate::scalar::Scalar;
use crate::spectral::spectral_norm;

/// Quantities recorded after block `index` has been appended.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockRecord<T> {
    /// 1-based block index `k`.
    pub index: usize,
    /// Columns before this block, `t_{k−1}`.
    pub t_prev: usize,
    pub width: usize,
    /// `‖A_k‖₂`.
    pub block_norm: T,
    /// `‖R_kk⁻¹‖₂`.
    pub r_kk_inv_norm: T,
    /// `‖R₂⁻¹‖₂` of the second pass; `None` for the first block and for
    /// one-pass methods.
    pub r2_inv_norm: Option<T>,
    /// `‖I − Q̂_kᵀQ̂_k‖₂` for the prefix ending at this block.
    pub running_defect: T,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorizationTrace<T> {
    pub factorization: QRFactorization<T>,
    pub per_block: Vec<BlockRecord<T>>,
    pub partition: BlockPartition,
}

impl<T: Scalar> FactorizationTrace<T> {
    pub fn q(&self) -> &Matrix<T> {
        &self.factorization.q
    }

    pub fn r(&self) -> &Matrix<T> {
        &self.factorization.r
    }

    /// Defect of the full `Q`.
    pub fn final_defect(&self) -> T {
        self.per_block
            .last()
            .map(|rec| rec.running_defect)
            .expect("a trace has at least one block")
    }
}

/// CGS2 (one column at a time, two projections per column).
pub fn cgs2<T: Scalar>(a: &Matrix<T>) -> Result<FactorizationTrace<T>> {
    let partition = BlockPartition::singletons(a.cols())?;
    drive(a, partition, Label::Column, |u, b| {
        let st = cgs2_step(u, b)?;
        let r2_inv = one_by_one_inv_norm(st.r2)?;
        Ok((
            BlockStep {
                q: st.q,
                r: Matrix::from_parts(1, 1, vec![st.r]),
                s: st.s,
            },
            Some(r2_inv),
        ))
    })
}

/// BCGS2 over the given partition.
pub fn bcgs2<T: Scalar>(a: &Matrix<T>, blocks: &BlockPartition) -> Result<FactorizationTrace<T>> {
    drive(a, blocks.clone(), Label::Block, |u, b| {
        let st = block_cgs2_step(u, b)?;
        Ok((st.step, Some(st.audit.r2_inv_norm)))
    })
}

/// One-pass classical Gram–Schmidt.
pub fn cgs<T: Scalar>(a: &Matrix<T>) -> Result<FactorizationTrace<T>> {
    let partition = BlockPartition::singletons(a.cols())?;
    drive(a, partition, Label::Column, |u, b| Ok((block_cgs_step(u, b)?, None)))
}

/// One-pass block classical Gram–Schmidt.
pub fn bcgs<T: Scalar>(a: &Matrix<T>, blocks: &BlockPartition) -> Result<FactorizationTrace<T>> {
    drive(a, blocks.clone(), Label::Block, |u, b| Ok((block_cgs_step(u, b)?, None)))
}

/// Modified Gram–Schmidt: the column is updated after each projection.
pub fn mgs<T: Scalar>(a: &Matrix<T>) -> Result<FactorizationTrace<T>> {
    let partition = BlockPartition::singletons(a.cols())?;
    drive(a, partition, Label::Column, |u, b| {
        let mut v = b.to_owned();
        let mut s = Matrix::zeros(u.cols(), 1);
        for i in 0..u.cols() {
            let qi = u.col(i);
            let rij = dot(qi, v.col(0));
            s[(i, 0)] = rij;
            for (x, &q) in v.col_mut(0).iter_mut().zip(qi) {
                *x = *x - rij * q;
            }
        }
        let r = norm2(v.col(0));
        if r == T::zero() || !r.is_finite() {
            return Err(Error::Breakdown { pass: 1 });
        }
        Ok((
            BlockStep {
                q: v.map(|x| x / r),
                r: Matrix::from_parts(1, 1, vec![r]),
                s,
            },
            None,
        ))
    })
}

/// Householder QR of the whole matrix as a single panel.
pub fn householder<T: Scalar>(a: &Matrix<T>) -> Result<FactorizationTrace<T>> {
    check_input(a)?;
    let partition = BlockPartition::new(vec![a.cols()])?;
    let f = local_qr(a).map_err(|e| Error::BlockBreakdown {
        block: 1,
        source: Box::new(e),
    })?;
    let mut recorder = Recorder::new(a.cols());
    let rec = recorder.record(a.view(), &f.q, &f.r, 0..a.cols(), 1, None)?;
    Ok(FactorizationTrace {
        factorization: QRFactorization::new(f.q, f.r)?,
        per_block: vec![rec],
        partition,
    })
}

#[derive(Clone, Copy)]
enum Label {
    Column,
    Block,
}

impl Label {
    fn wrap(self, k: usize, e: Error) -> Error {
        match self {
            Label::Column => Error::ColumnBreakdown {
                column: k,
                source: Box::new(e),
            },
            Label::Block => Error::BlockBreakdown {
                block: k,
                source: Box::new(e),
            },
        }
    }
}

fn check_input<T: Scalar>(a: &Matrix<T>) -> Result<()> {
    if a.cols() == 0 || a.rows() < a.cols() {
        return Err(Error::Shape(format!(
            "factorization needs rows >= cols >= 1, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        let idx = a.as_slice().iter().position(|v| !v.is_finite()).unwrap_or(0);
        return Err(Error::NonFinite {
            row: idx % a.rows(),
            col: idx / a.rows(),
        });
    }
    Ok(())
}

fn one_by_one_inv_norm<T: Scalar>(r: T) -> Result<T> {
    let m = Matrix::from_parts(1, 1, vec![r]);
    spectral_norm(&upper_triangular_inverse(m.view())?)
}

type StepOutput<T> = (BlockStep<T>, Option<T>);

/// First block by `local_qr`, then `step(Q̂, A_k)` for every later block with
/// the bordered update `R ← [[R, S], [0, R_kk]]`.
fn drive<T, F>(
    a: &Matrix<T>,
    partition: BlockPartition,
    label: Label,
    mut step: F,
) -> Result<FactorizationTrace<T>>
where
    T: Scalar,
    F: FnMut(MatRef<'_, T>, MatRef<'_, T>) -> Result<StepOutput<T>>,
{
    check_input(a)?;
    partition.check_columns(a.cols())?;
    let (m, n) = a.shape();
    let mut q = Matrix::zeros(m, n);
    let mut r = Matrix::zeros(n, n);
    let mut recorder = Recorder::new(n);
    let mut per_block = Vec::with_capacity(partition.len());

    for (i, cols) in partition.ranges().enumerate() {
        let k = i + 1;
        let t = cols.start;
        let ak = a.columns(cols.clone());
        let (st, r2_inv) = if k == 1 {
            let f = local_qr(ak).map_err(|e| label.wrap(k, e))?;
            (
                BlockStep {
                    q: f.q,
                    r: f.r,
                    s: Matrix::zeros(0, cols.len()),
                },
                None,
            )
        } else {
            step(q.columns(0..t), ak).map_err(|e| label.wrap(k, e))?
        };
        q.set_block(0, t, st.q.view());
        if t > 0 {
            r.set_block(0, t, st.s.view());
        }
        r.set_block(t, t, st.r.view());
        per_block.push(recorder.record(ak, &q, &st.r, cols, k, r2_inv)?);
    }

    Ok(FactorizationTrace {
        factorization: QRFactorization::new(q, r)?,
        per_block,
        partition,
    })
}

/// Keeps `QᵀQ` up to date one block at a time so that the running defect of
/// each prefix costs one panel product plus one small SVD.
struct Recorder<T> {
    gram: Matrix<T>,
}

impl<T: Scalar> Recorder<T> {
    fn new(n: usize) -> Self {
        Self {
            gram: Matrix::zeros(n, n),
        }
    }

    /// `q` holds at least the columns `0..cols.end`.
    fn record(
        &mut self,
        ak: MatRef<'_, T>,
        q: &Matrix<T>,
        r_kk: &Matrix<T>,
        cols: Range<usize>,
        index: usize,
        r2_inv_norm: Option<T>,
    ) -> Result<BlockRecord<T>> {
        let end = cols.end;
        for j in cols.clone() {
            for i in 0..=j {
                let g = dot(q.col(i), q.col(j));
                self.gram[(i, j)] = g;
                self.gram[(j, i)] = g;
            }
        }
        let deviation = Matrix::from_fn(end, end, |i, j| {
            let id = if i == j { T::one() } else { T::zero() };
            id - self.gram[(i, j)]
        });
        Ok(BlockRecord {
            index,
            t_prev: cols.start,
            width: end - cols.start,
            block_norm: spectral_norm(ak)?,
            r_kk_inv_norm: spectral_norm(&upper_triangular_inverse(r_kk.view())?)?,
            r2_inv_norm,
            running_defect: spectral_norm(&deviation)?,
        })
    }
}
