use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Numerical(#[from] bgs::Error),

    #[error("trial {trial} ({method}): {source}")]
    Breakdown {
        trial: usize,
        method: String,
        #[source]
        source: bgs::Error,
    },

    #[error("trial {trial} ({method}): assumption failure at {detail}")]
    Assumption {
        trial: usize,
        method: String,
        block: usize,
        detail: String,
    },

    #[error("trial {trial} ({method}): {quantity} {value:e} exceeds its bound {bound:e}")]
    ContractViolation {
        trial: usize,
        method: String,
        quantity: &'static str,
        value: f64,
        bound: f64,
    },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("malformed report: {0}")]
    Report(String),
}

impl HarnessError {
    /// Process exit status for the CLI: 2 for an assumption failure under
    /// the strict policy, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Assumption { .. } => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = HarnessError> = std::result::Result<T, E>;
