use std::ops::Range;

use crate::error::{Error, Result};

/// Widths `(p₁, …, p_s)` of the contiguous column panels.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockPartition {
    widths: Vec<usize>,
}

impl BlockPartition {
    pub fn new(widths: Vec<usize>) -> Result<Self> {
        if widths.is_empty() {
            return Err(Error::InvalidPartition("no blocks".into()));
        }
        if let Some(k) = widths.iter().position(|&w| w == 0) {
            return Err(Error::InvalidPartition(format!("block {} has width 0", k + 1)));
        }
        Ok(Self { widths })
    }

    /// `n` columns in blocks of `p`, the last one possibly narrower.
    pub fn uniform(n: usize, p: usize) -> Result<Self> {
        if n == 0 || p == 0 {
            return Err(Error::InvalidPartition(format!(
                "cannot split {n} columns into blocks of {p}"
            )));
        }
        let mut widths = vec![p; n / p];
        if n % p != 0 {
            widths.push(n % p);
        }
        Self::new(widths)
    }

    /// `s` blocks of width `⌈n/s⌉`, the last one possibly narrower.
    pub fn with_block_count(n: usize, s: usize) -> Result<Self> {
        if s == 0 || s > n {
            return Err(Error::InvalidPartition(format!(
                "cannot split {n} columns into {s} blocks"
            )));
        }
        Self::uniform(n, n.div_ceil(s))
    }

    /// One column per block.
    pub fn singletons(n: usize) -> Result<Self> {
        Self::uniform(n, 1)
    }

    pub fn widths(&self) -> &[usize] {
        &self.widths
    }

    pub fn len(&self) -> usize {
        self.widths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.widths.is_empty()
    }

    pub fn total(&self) -> usize {
        self.widths.iter().sum()
    }

    pub fn max_width(&self) -> usize {
        self.widths.iter().copied().max().unwrap_or(0)
    }

    /// Column ranges of the blocks, in order.
    pub fn ranges(&self) -> impl Iterator<Item = Range<usize>> + '_ {
        self.widths.iter().scan(0, |start, &w| {
            let r = *start..*start + w;
            *start += w;
            Some(r)
        })
    }

    pub(crate) fn check_columns(&self, n: usize) -> Result<()> {
        if self.total() != n {
            return Err(Error::InvalidPartition(format!(
                "widths sum to {} but the matrix has {n} columns",
                self.total()
            )));
        }
        Ok(())
    }
}
