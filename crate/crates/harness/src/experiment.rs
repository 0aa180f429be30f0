use std::time::Instant;

use bgs::{
    check_assumptions, condition_number, read_matrix_market, relative_residual, BlockPartition,
    BoundContext, Matrix,
};
use rayon::prelude::*;

use crate::config::{ExperimentConfig, Generator, Policy};
use crate::error::{HarnessError, Result};
use crate::generators::{gen_hilbert_like, gen_lauchli, gen_svd_spectrum};
use crate::report::ReportRow;

/// Environment variable capping the number of trials run concurrently.
pub const THREADS_ENV: &str = "BGS_THREADS";

/// Worker count from [`THREADS_ENV`]; `None` when unset or unparsable.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .filter(|&n: &usize| n > 0)
}

/// Runs every trial of `config` and returns one row per trial, ordered by
/// trial index. The first failing trial (in index order) decides the error.
pub fn run(config: &ExperimentConfig) -> Result<Vec<ReportRow>> {
    let file_matrix = load_file(config)?;
    config.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = thread_cap() {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
    let results: Vec<Result<ReportRow>> = pool.install(|| {
        (0..config.trials)
            .into_par_iter()
            .map(|trial| run_trial(config, trial, file_matrix.as_ref()))
            .collect()
    });
    results.into_iter().collect()
}

fn load_file(config: &ExperimentConfig) -> Result<Option<Matrix<f64>>> {
    let Generator::File(path) = &config.generator else {
        return Ok(None);
    };
    let a: Matrix<f64> = read_matrix_market(path)?;
    if a.shape() != (config.m, config.n) {
        return Err(HarnessError::Config(format!(
            "{} holds a {}x{} matrix but the configuration says {}x{}",
            path.display(),
            a.rows(),
            a.cols(),
            config.m,
            config.n
        )));
    }
    Ok(Some(a))
}

/// The input matrix of trial `trial`.
pub fn trial_matrix(config: &ExperimentConfig, trial: usize) -> Result<Matrix<f64>> {
    match &config.generator {
        Generator::SvdSpectrum => gen_svd_spectrum(
            config.m,
            config.n,
            config.kappa,
            config.seed.wrapping_add(trial as u64),
        ),
        Generator::Lauchli { eps } => gen_lauchli(config.n, *eps),
        Generator::HilbertLike => gen_hilbert_like(config.m, config.n),
        Generator::File(_) => Ok(load_file(config)?.expect("file generator")),
    }
}

fn run_trial(
    config: &ExperimentConfig,
    trial: usize,
    file_matrix: Option<&Matrix<f64>>,
) -> Result<ReportRow> {
    let a = match file_matrix {
        Some(a) => a.clone(),
        None => trial_matrix(config, trial)?,
    };
    let method = config.method;
    let blocks = config.partition()?;
    let (m, n) = a.shape();

    let start = Instant::now();
    let p = match (&blocks, method) {
        (Some(b), _) => b.max_width(),
        (None, crate::Method::Householder) => n,
        (None, _) => 1,
    };
    let trace = match method.factor(&a, blocks.as_ref()) {
        Ok(trace) => trace,
        Err(source) => {
            if config.policy == Policy::Strict && method.is_reorthogonalized() {
                strict_prefix_check(config, trial, &a, blocks.as_ref(), p, &source)?;
            }
            return Err(HarnessError::Breakdown {
                trial,
                method: method.to_string(),
                source,
            });
        }
    };
    let elapsed = start.elapsed().as_secs_f64();

    let defect = trace.final_defect();
    let rel_residual = relative_residual(&a, &trace.factorization)?.value;

    let assumptions_passed = if method.is_reorthogonalized() {
        let ctx = BoundContext::new(m, p)?;
        let verdicts = check_assumptions(&trace, &ctx)?;
        let failed = verdicts.iter().find(|v| !v.either_passed);
        if let (Some(v), Policy::Strict) = (failed, config.policy) {
            return Err(HarnessError::Assumption {
                trial,
                method: method.to_string(),
                block: v.block_index,
                detail: v.describe(),
            });
        }
        let passed = failed.is_none();
        if passed && config.verify_bounds {
            let s = trace.per_block.len();
            let checks = [
                ("orthogonality defect", defect, 10.0 * ctx.orthogonality_bound(s)),
                ("relative residual", rel_residual, 10.0 * ctx.residual_bound(s)),
            ];
            for (quantity, value, bound) in checks {
                if !(value <= bound) {
                    return Err(HarnessError::ContractViolation {
                        trial,
                        method: method.to_string(),
                        quantity,
                        value,
                        bound,
                    });
                }
            }
        }
        Some(passed)
    } else {
        None
    };

    Ok(ReportRow {
        trial,
        method,
        generator: config.generator.name().to_string(),
        m,
        n,
        p,
        kappa_target: matches!(config.generator, Generator::SvdSpectrum).then_some(config.kappa),
        kappa_measured: condition_number(&a)?,
        defect,
        rel_residual,
        assumptions_passed,
        wall_time_seconds: config.timing.then_some(elapsed),
    })
}

/// A breakdown at block `k` can follow blocks that already failed both
/// assumptions. Blocks are processed in order, so the first `k − 1` blocks
/// factor identically on their own; under the strict policy the earliest
/// failing block among them is reported instead of the breakdown.
fn strict_prefix_check(
    config: &ExperimentConfig,
    trial: usize,
    a: &Matrix<f64>,
    blocks: Option<&BlockPartition>,
    p: usize,
    source: &bgs::Error,
) -> Result<()> {
    let k = match *source {
        bgs::Error::BlockBreakdown { block, .. } => block,
        bgs::Error::ColumnBreakdown { column, .. } => column,
        _ => return Ok(()),
    };
    if k < 3 {
        return Ok(());
    }
    let widths = match blocks {
        Some(b) => b.widths()[..k - 1].to_vec(),
        None => vec![1; k - 1],
    };
    let prefix = BlockPartition::new(widths)?;
    let head = a.columns(0..prefix.total()).to_owned();
    let Ok(trace) = config.method.factor(&head, Some(&prefix).filter(|_| blocks.is_some())) else {
        return Ok(());
    };
    let verdicts = check_assumptions(&trace, &BoundContext::new(a.rows(), p)?)?;
    match verdicts.iter().find(|v| !v.either_passed) {
        Some(v) => Err(HarnessError::Assumption {
            trial,
            method: config.method.to_string(),
            block: v.block_index,
            detail: v.describe(),
        }),
        None => Ok(()),
    }
}
