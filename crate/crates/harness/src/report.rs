//! Report rows and their CSV and plot-data serializations.
//!
//! Floats are written with 17 significant digits, enough for every binary64
//! value to parse back exactly. Missing values are written as `na`.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::config::Method;
use crate::error::{HarnessError, Result};

pub const CSV_HEADER: [&str; 12] = [
    "trial",
    "method",
    "generator",
    "m",
    "n",
    "p",
    "kappa_target",
    "kappa_measured",
    "defect",
    "rel_residual",
    "assumptions_passed",
    "wall_time_seconds",
];

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub trial: usize,
    pub method: Method,
    pub generator: String,
    pub m: usize,
    pub n: usize,
    /// Widest block (1 for column methods, n for Householder).
    pub p: usize,
    pub kappa_target: Option<f64>,
    pub kappa_measured: f64,
    /// `‖I − QᵀQ‖₂`.
    pub defect: f64,
    /// `‖A − QR‖₂ / ‖A‖₂`.
    pub rel_residual: f64,
    /// `None` for methods the assumption checks do not apply to.
    pub assumptions_passed: Option<bool>,
    pub wall_time_seconds: Option<f64>,
}

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

fn opt_float(v: Option<f64>) -> String {
    v.map_or_else(|| "na".into(), float)
}

impl ReportRow {
    fn record(&self) -> [String; 12] {
        [
            self.trial.to_string(),
            self.method.to_string(),
            self.generator.clone(),
            self.m.to_string(),
            self.n.to_string(),
            self.p.to_string(),
            opt_float(self.kappa_target),
            float(self.kappa_measured),
            float(self.defect),
            float(self.rel_residual),
            match self.assumptions_passed {
                Some(true) => "true".into(),
                Some(false) => "false".into(),
                None => "na".into(),
            },
            opt_float(self.wall_time_seconds),
        ]
    }
}

pub fn write_csv<W: Write>(rows: &[ReportRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for row in rows {
        w.write_record(row.record())?;
    }
    w.flush().map_err(|e| HarnessError::Io {
        path: "<csv>".into(),
        source: e,
    })?;
    Ok(())
}

pub fn emit_csv(rows: &[ReportRow], path: impl AsRef<Path>) -> Result<()> {
    write_csv(rows, create(path.as_ref())?)
}

fn bad(line: usize, what: &str, value: &str) -> HarnessError {
    HarnessError::Report(format!("record {line}: bad {what} {value:?}"))
}

fn parse<T: std::str::FromStr>(line: usize, what: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| bad(line, what, v))
}

fn parse_opt(line: usize, what: &str, v: &str) -> Result<Option<f64>> {
    if v == "na" {
        Ok(None)
    } else {
        parse(line, what, v).map(Some)
    }
}

/// Parses a report written by [`write_csv`].
pub fn read_csv<R: std::io::Read>(input: R) -> Result<Vec<ReportRow>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers()?.clone();
    if header.iter().ne(CSV_HEADER) {
        return Err(HarnessError::Report(format!("unexpected header {header:?}")));
    }
    let mut rows = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec?;
        let line = i + 1;
        let f = |k: usize| rec.get(k).unwrap_or("");
        rows.push(ReportRow {
            trial: parse(line, "trial", f(0))?,
            method: f(1).parse()?,
            generator: f(2).to_string(),
            m: parse(line, "m", f(3))?,
            n: parse(line, "n", f(4))?,
            p: parse(line, "p", f(5))?,
            kappa_target: parse_opt(line, "kappa_target", f(6))?,
            kappa_measured: parse(line, "kappa_measured", f(7))?,
            defect: parse(line, "defect", f(8))?,
            rel_residual: parse(line, "rel_residual", f(9))?,
            assumptions_passed: match f(10) {
                "true" => Some(true),
                "false" => Some(false),
                "na" => None,
                other => return Err(bad(line, "assumptions_passed", other)),
            },
            wall_time_seconds: parse_opt(line, "wall_time_seconds", f(11))?,
        });
    }
    Ok(rows)
}

/// `(kappa_measured, defect)` pairs, one series per method in order of first
/// appearance, sorted by condition number; series are separated by two blank
/// lines.
pub fn write_plotdata<W: Write>(rows: &[ReportRow], mut out: W) -> std::io::Result<()> {
    let mut methods: Vec<Method> = Vec::new();
    for r in rows {
        if !methods.contains(&r.method) {
            methods.push(r.method);
        }
    }
    for (i, method) in methods.iter().enumerate() {
        if i > 0 {
            writeln!(out)?;
            writeln!(out)?;
        }
        writeln!(out, "# {method}")?;
        writeln!(out, "# kappa_measured defect")?;
        let mut pts: Vec<(f64, f64)> = rows
            .iter()
            .filter(|r| r.method == *method)
            .map(|r| (r.kappa_measured, r.defect))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (k, d) in pts {
            writeln!(out, "{} {}", float(k), float(d))?;
        }
    }
    out.flush()
}

pub fn emit_plotdata(rows: &[ReportRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    write_plotdata(rows, create(path)?).map_err(|e| io_err(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| io_err(path, e))
}

fn io_err(path: &Path, source: std::io::Error) -> HarnessError {
    HarnessError::Io {
        path: path.display().to_string(),
        source,
    }
}
