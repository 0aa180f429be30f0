use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use bgs::{BlockPartition, FactorizationTrace, Matrix};

use crate::error::{HarnessError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Cgs,
    Mgs,
    Cgs2,
    Bcgs,
    Bcgs2,
    Householder,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Cgs,
        Method::Mgs,
        Method::Cgs2,
        Method::Bcgs,
        Method::Bcgs2,
        Method::Householder,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Cgs => "cgs",
            Method::Mgs => "mgs",
            Method::Cgs2 => "cgs2",
            Method::Bcgs => "bcgs",
            Method::Bcgs2 => "bcgs2",
            Method::Householder => "householder",
        }
    }

    /// Consumes a block partition.
    pub fn is_blocked(self) -> bool {
        matches!(self, Method::Bcgs | Method::Bcgs2)
    }

    /// Has the two-pass structure the assumption checks are stated for.
    pub fn is_reorthogonalized(self) -> bool {
        matches!(self, Method::Cgs2 | Method::Bcgs2)
    }

    pub fn factor(
        self,
        a: &Matrix<f64>,
        blocks: Option<&BlockPartition>,
    ) -> bgs::Result<FactorizationTrace<f64>> {
        let need = || {
            blocks.ok_or_else(|| {
                bgs::Error::InvalidPartition(format!("{} needs a block partition", self.name()))
            })
        };
        match self {
            Method::Cgs => bgs::cgs(a),
            Method::Mgs => bgs::mgs(a),
            Method::Cgs2 => bgs::cgs2(a),
            Method::Bcgs => bgs::bcgs(a, need()?),
            Method::Bcgs2 => bgs::bcgs2(a, need()?),
            Method::Householder => bgs::householder(a),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| HarnessError::Config(format!("unknown method {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Generator {
    /// Random singular vectors, geometric spectrum down to `1/kappa`.
    SvdSpectrum,
    Lauchli { eps: f64 },
    HilbertLike,
    File(PathBuf),
}

impl Generator {
    pub fn name(&self) -> &'static str {
        match self {
            Generator::SvdSpectrum => "svd",
            Generator::Lauchli { .. } => "lauchli",
            Generator::HilbertLike => "hilbert",
            Generator::File(_) => "file",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Policy {
    /// A block whose two assumption checks both fail aborts the run.
    Strict,
    /// Failures are recorded in the report and the run continues.
    #[default]
    Warn,
}

impl FromStr for Policy {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "strict" => Ok(Policy::Strict),
            "warn" => Ok(Policy::Warn),
            other => Err(HarnessError::Config(format!("unknown policy {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Blocking {
    /// Width `p`, the last block possibly narrower.
    Width(usize),
    Explicit(BlockPartition),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub method: Method,
    pub m: usize,
    pub n: usize,
    pub blocking: Option<Blocking>,
    pub generator: Generator,
    /// Target condition number (used by the svd-spectrum generator).
    pub kappa: f64,
    /// Trial `i` draws its matrix from seed `seed + i`.
    pub seed: u64,
    pub policy: Policy,
    pub trials: usize,
    /// Record wall-clock time of each factorization.
    pub timing: bool,
    /// Fail the trial if a reorthogonalized run whose assumptions hold
    /// exceeds ten times its orthogonality or residual bound.
    pub verify_bounds: bool,
}

impl ExperimentConfig {
    pub fn new(method: Method, m: usize, n: usize, generator: Generator) -> Self {
        Self {
            method,
            m,
            n,
            blocking: None,
            generator,
            kappa: 1.0,
            seed: 0,
            policy: Policy::Warn,
            trials: 1,
            timing: true,
            verify_bounds: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.n > self.m {
            return Err(HarnessError::Config(format!(
                "need 1 <= n <= m, got m={}, n={}",
                self.m, self.n
            )));
        }
        if !(self.kappa >= 1.0) || !self.kappa.is_finite() {
            return Err(HarnessError::Config(format!("kappa must be >= 1, got {}", self.kappa)));
        }
        if self.trials == 0 {
            return Err(HarnessError::Config("trials must be >= 1".into()));
        }
        if let Generator::Lauchli { .. } = self.generator {
            if self.m != self.n + 1 {
                return Err(HarnessError::Config(format!(
                    "a lauchli matrix with n={} has m={} rows, not {}",
                    self.n,
                    self.n + 1,
                    self.m
                )));
            }
        }
        match (&self.blocking, self.method.is_blocked()) {
            (Some(_), false) => Err(HarnessError::Config(format!(
                "method {} does not take a block partition",
                self.method
            ))),
            (None, true) => Err(HarnessError::Config(format!(
                "method {} needs a block width or partition",
                self.method
            ))),
            _ => self.partition().map(|_| ()),
        }
    }

    /// The partition a blocked method will use, or `None` otherwise.
    pub fn partition(&self) -> Result<Option<BlockPartition>> {
        let blocks = match &self.blocking {
            None => return Ok(None),
            Some(Blocking::Width(p)) => BlockPartition::uniform(self.n, *p)?,
            Some(Blocking::Explicit(b)) => b.clone(),
        };
        if blocks.total() != self.n {
            return Err(HarnessError::Config(format!(
                "block widths sum to {} but n = {}",
                blocks.total(),
                self.n
            )));
        }
        Ok(Some(blocks))
    }
}
