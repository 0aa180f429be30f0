use thiserror::Error;

/// Errors raised by the dense substrate, the panel kernel and the drivers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    DimensionMismatch {
        op: &'static str,
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error("data length {len} does not match a {rows}x{cols} matrix")]
    DataLength { rows: usize, cols: usize, len: usize },

    #[error("matrix has no entries")]
    Empty,

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("invalid shape: {0}")]
    Shape(String),

    #[error("invalid block partition: {0}")]
    InvalidPartition(String),

    /// A diagonal of the panel's triangular factor fell below the rank threshold.
    #[error("panel is numerically rank deficient: |r[{index}][{index}]| = {magnitude:e} <= threshold {threshold:e}")]
    RankDeficient {
        index: usize,
        magnitude: f64,
        threshold: f64,
    },

    /// One of the two normalizations of a single-vector reorthogonalized step hit zero.
    #[error("normalization {pass} of the reorthogonalized step produced a zero vector; b lies in the span of the basis to working precision")]
    Breakdown { pass: u8 },

    #[error("breakdown at column {column}: {source}")]
    ColumnBreakdown {
        column: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("breakdown at block {block}: {source}")]
    BlockBreakdown {
        block: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("panel too large for the local QR contract: eps * L1({m}, {p}) = {value:e} is not below 1")]
    PanelTooLarge { m: usize, p: usize, value: f64 },

    #[error("singular value iteration did not converge; the power-iteration fallback also failed after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("t = {t} is not a multiple of the block width p = {p}")]
    NotBlockMultiple { t: usize, p: usize },

    #[error("invalid bound context: {0}")]
    BoundContext(String),

    #[error("I/O error: {0}")]
    Io(String),

    #[error("MatrixMarket parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
