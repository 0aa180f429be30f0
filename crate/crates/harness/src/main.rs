use std::path::PathBuf;
use std::process::ExitCode;

use bgs::BlockPartition;
use bgs_harness::{
    emit_csv, emit_plotdata, run, Blocking, ExperimentConfig, Generator, HarnessError, Method,
    Policy, ReportRow,
};
use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, ValueEnum)]
enum GenArg {
    Svd,
    Lauchli,
    Hilbert,
    File,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PolicyArg {
    Strict,
    Warn,
}

/// Factor test matrices with Gram–Schmidt variants and report loss of
/// orthogonality and residuals.
///
/// Exit status: 0 on success, 2 when a block fails both stability
/// assumptions under the strict policy, 1 on numerical breakdown or any
/// other error.
#[derive(Debug, Parser)]
#[command(name = "factor", version)]
struct Cli {
    /// Comma-separated list of cgs, mgs, cgs2, bcgs, bcgs2, householder.
    #[arg(long, value_delimiter = ',', required = true, value_parser = parse_method)]
    method: Vec<Method>,

    /// Rows (derived from the input for lauchli and file).
    #[arg(long)]
    m: Option<usize>,

    /// Columns (derived from the input file when omitted).
    #[arg(long)]
    n: Option<usize>,

    /// Block width for bcgs and bcgs2.
    #[arg(long, conflicts_with = "blocks")]
    block: Option<usize>,

    /// Explicit block widths, e.g. 4,4,2.
    #[arg(long, value_delimiter = ',')]
    blocks: Option<Vec<usize>>,

    #[arg(long = "gen", value_enum, default_value = "svd")]
    generator: GenArg,

    /// Target condition number(s) for the svd generator.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    kappa: Vec<f64>,

    /// Diagonal value of the Läuchli matrix.
    #[arg(long, default_value_t = 1e-8)]
    lauchli_eps: f64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    #[arg(long, value_enum, default_value = "warn")]
    policy: PolicyArg,

    #[arg(long, default_value_t = 1)]
    trials: usize,

    #[arg(long)]
    csv: PathBuf,

    /// Also write (kappa, defect) series per method.
    #[arg(long)]
    plot: Option<PathBuf>,

    /// MatrixMarket input for --gen file.
    #[arg(long)]
    input: Option<PathBuf>,

    /// Leave the wall-time column empty so reports are reproducible byte for byte.
    #[arg(long)]
    no_timing: bool,

    /// Fail when a reorthogonalized run with passing assumptions exceeds
    /// ten times its error bounds.
    #[arg(long)]
    verify_bounds: bool,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: HarnessError| e.to_string())
}

fn configs(cli: &Cli) -> Result<Vec<ExperimentConfig>, HarnessError> {
    let config_err = |msg: &str| Err(HarnessError::Config(msg.into()));
    let (generator, m, n) = match cli.generator {
        GenArg::Svd | GenArg::Hilbert => {
            let (Some(m), Some(n)) = (cli.m, cli.n) else {
                return config_err("--m and --n are required for this generator");
            };
            let g = if matches!(cli.generator, GenArg::Svd) {
                Generator::SvdSpectrum
            } else {
                Generator::HilbertLike
            };
            (g, m, n)
        }
        GenArg::Lauchli => {
            let Some(n) = cli.n else {
                return config_err("--n is required for the lauchli generator");
            };
            (Generator::Lauchli { eps: cli.lauchli_eps }, cli.m.unwrap_or(n + 1), n)
        }
        GenArg::File => {
            let Some(path) = &cli.input else {
                return config_err("--gen file needs --input PATH.mtx");
            };
            let a: bgs::Matrix<f64> = bgs::read_matrix_market(path)?;
            let (m, n) = (cli.m.unwrap_or(a.rows()), cli.n.unwrap_or(a.cols()));
            (Generator::File(path.clone()), m, n)
        }
    };
    if cli.input.is_some() && !matches!(cli.generator, GenArg::File) {
        return config_err("--input is only used with --gen file");
    }

    let blocking = match (&cli.block, &cli.blocks) {
        (Some(p), _) => Some(Blocking::Width(*p)),
        (None, Some(w)) => Some(Blocking::Explicit(BlockPartition::new(w.clone())?)),
        (None, None) => None,
    };
    if blocking.is_some() && !cli.method.iter().any(|m| m.is_blocked()) {
        return config_err("block sizes given but no blocked method (bcgs, bcgs2) requested");
    }

    let kappas: &[f64] = if matches!(generator, Generator::SvdSpectrum) {
        &cli.kappa
    } else {
        &cli.kappa[..1]
    };
    let mut out = Vec::new();
    for &method in &cli.method {
        for &kappa in kappas {
            let mut c = ExperimentConfig::new(method, m, n, generator.clone());
            c.kappa = kappa;
            c.seed = cli.seed;
            c.trials = cli.trials;
            c.timing = !cli.no_timing;
            c.verify_bounds = cli.verify_bounds;
            c.policy = match cli.policy {
                PolicyArg::Strict => Policy::Strict,
                PolicyArg::Warn => Policy::Warn,
            };
            if method.is_blocked() {
                c.blocking = blocking.clone();
            }
            c.validate()?;
            out.push(c);
        }
    }
    Ok(out)
}

fn execute(cli: &Cli) -> Result<(), HarnessError> {
    let mut rows: Vec<ReportRow> = Vec::new();
    for config in configs(cli)? {
        let batch = run(&config)?;
        let worst = batch.iter().map(|r| r.defect).fold(0.0, f64::max);
        let failed = batch
            .iter()
            .filter(|r| r.assumptions_passed == Some(false))
            .count();
        println!(
            "{:<11} m={} n={} kappa={:.1e} trials={} max_defect={:.3e} assumption_failures={}",
            config.method,
            config.m,
            config.n,
            config.kappa,
            batch.len(),
            worst,
            failed
        );
        rows.extend(batch);
    }
    emit_csv(&rows, &cli.csv)?;
    if let Some(plot) = &cli.plot {
        emit_plotdata(&rows, plot)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
