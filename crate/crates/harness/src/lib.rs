//! Experiment engine for the Gram–Schmidt QR family: seeded test matrices,
//! trial execution with the assumption policy, and CSV / plot-data output.

pub mod config;
pub mod error;
pub mod experiment;
pub mod generators;
pub mod report;

pub use config::{Blocking, ExperimentConfig, Generator, Method, Policy};
pub use error::{HarnessError, Result};
pub use experiment::{run, thread_cap, trial_matrix, THREADS_ENV};
pub use generators::{gen_hilbert_like, gen_lauchli, gen_svd_spectrum};
pub use report::{emit_csv, emit_plotdata, read_csv, write_csv, write_plotdata, ReportRow};
