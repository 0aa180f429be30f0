//! MatrixMarket text I/O for dense real matrices.
//!
//! Reading accepts `array` and `coordinate` storage with `general` or
//! `symmetric` structure. Writing always emits
//! `%%MatrixMarket matrix array real general` with 17 significant digits,
//! enough to round-trip binary64 exactly.

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Scalar;

pub const ARRAY_HEADER: &str = "%%MatrixMarket matrix array real general";

#[derive(Clone, Copy, PartialEq)]
enum Storage {
    Array,
    Coordinate,
}

pub fn read_matrix_market<T: Scalar>(path: impl AsRef<Path>) -> Result<Matrix<T>> {
    let text = fs::read_to_string(path)?;
    parse_matrix_market(&text)
}

pub fn parse_matrix_market<T: Scalar>(text: &str) -> Result<Matrix<T>> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));
    let (_, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty file".into(),
    })?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(Error::Parse {
            line: 1,
            msg: format!("not a MatrixMarket matrix header: {header:?}"),
        });
    }
    let storage = match tokens[2].as_str() {
        "array" => Storage::Array,
        "coordinate" => Storage::Coordinate,
        other => return Err(parse_err(1, format!("unsupported storage {other:?}"))),
    };
    if tokens[3] != "real" && tokens[3] != "integer" {
        return Err(parse_err(1, format!("unsupported field {:?}", tokens[3])));
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        other => return Err(parse_err(1, format!("unsupported symmetry {other:?}"))),
    };

    let mut body = lines.filter(|(_, l)| !l.is_empty() && !l.starts_with('%'));
    let (size_line, size) = body
        .next()
        .ok_or_else(|| parse_err(2, "missing size line".into()))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(size_line, format!("bad size {t:?}"))))
        .collect::<Result<_>>()?;
    let expected = if storage == Storage::Array { 2 } else { 3 };
    if dims.len() != expected {
        return Err(parse_err(size_line, format!("expected {expected} size fields")));
    }
    let (rows, cols) = (dims[0], dims[1]);
    if symmetric && rows != cols {
        return Err(parse_err(size_line, "symmetric matrix must be square".into()));
    }
    let mut m = Matrix::<T>::zeros(rows, cols);

    match storage {
        Storage::Array => {
            // Column-major; symmetric files list only the lower triangle.
            let mut slots = (0..cols).flat_map(|j| {
                let start = if symmetric { j } else { 0 };
                (start..rows).map(move |i| (i, j))
            });
            for (line, l) in body {
                let v = parse_value::<T>(line, l)?;
                let (i, j) = slots
                    .next()
                    .ok_or_else(|| parse_err(line, "too many entries".into()))?;
                m[(i, j)] = v;
                if symmetric {
                    m[(j, i)] = v;
                }
            }
            if slots.next().is_some() {
                return Err(parse_err(size_line, "too few entries".into()));
            }
        }
        Storage::Coordinate => {
            let nnz = dims[2];
            let mut seen = 0;
            for (line, l) in body {
                let f: Vec<&str> = l.split_whitespace().collect();
                if f.len() != 3 {
                    return Err(parse_err(line, "expected `row col value`".into()));
                }
                let idx = |t: &str, bound: usize| -> Result<usize> {
                    match t.parse::<usize>() {
                        Ok(k) if (1..=bound).contains(&k) => Ok(k - 1),
                        _ => Err(parse_err(line, format!("index {t:?} out of range"))),
                    }
                };
                let (i, j) = (idx(f[0], rows)?, idx(f[1], cols)?);
                let v = parse_value::<T>(line, f[2])?;
                m[(i, j)] = v;
                if symmetric {
                    m[(j, i)] = v;
                }
                seen += 1;
            }
            if seen != nnz {
                return Err(parse_err(
                    size_line,
                    format!("declared {nnz} entries, found {seen}"),
                ));
            }
        }
    }
    Matrix::from_col_major(rows, cols, m.into_vec())
}

fn parse_value<T: Scalar>(line: usize, tok: &str) -> Result<T> {
    let v: f64 = tok
        .trim()
        .parse()
        .map_err(|_| parse_err(line, format!("bad number {tok:?}")))?;
    if !v.is_finite() {
        return Err(parse_err(line, format!("non-finite value {tok:?}")));
    }
    Ok(T::from_f64_lossy(v))
}

fn parse_err(line: usize, msg: String) -> Error {
    Error::Parse { line, msg }
}

pub fn write_matrix_market<T: Scalar>(m: &Matrix<T>, path: impl AsRef<Path>) -> Result<()> {
    let mut out = std::io::BufWriter::new(fs::File::create(path)?);
    out.write_all(to_matrix_market_string(m).as_bytes())?;
    out.flush()?;
    Ok(())
}

pub fn to_matrix_market_string<T: Scalar>(m: &Matrix<T>) -> String {
    let mut s = String::with_capacity(24 * m.rows() * m.cols() + 64);
    s.push_str(ARRAY_HEADER);
    s.push('\n');
    s.push_str(&format!("{} {}\n", m.rows(), m.cols()));
    for &v in m.as_slice() {
        s.push_str(&format!("{:.16e}\n", v.to_f64_lossy()));
    }
    s
}
