//! Plain-text matrix and signal files.
//!
//! A matrix file starts with `m n` on one line followed by `m` lines of `n`
//! whitespace-separated decimals. A signal file starts with `n` followed by
//! one line of `n` decimals. Values are written in shortest round-trip form,
//! so writing and re-reading is lossless.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::model::{SensingMatrix, SparseSignal};
use crate::scalar::Real;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty())
}

fn parse_values<T: Real>(line_no: usize, line: &str, expected: usize) -> Result<Vec<T>> {
    let values = line
        .split_whitespace()
        .map(|tok| {
            tok.parse::<T>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("not a number: {tok:?}"),
            })
        })
        .collect::<Result<Vec<T>>>()?;
    if values.len() != expected {
        return Err(Error::Parse {
            line: line_no,
            message: format!("expected {expected} values, found {}", values.len()),
        });
    }
    Ok(values)
}

fn parse_dims(line_no: usize, line: &str, count: usize) -> Result<Vec<usize>> {
    let dims = line
        .split_whitespace()
        .map(|tok| {
            tok.parse::<usize>().map_err(|_| Error::Parse {
                line: line_no,
                message: format!("not a dimension: {tok:?}"),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    if dims.len() != count {
        return Err(Error::Parse {
            line: line_no,
            message: format!("expected {count} dimension(s), found {}", dims.len()),
        });
    }
    Ok(dims)
}

pub fn parse_matrix<T: Real>(text: &str) -> Result<Matrix<T>> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty matrix file".into(),
    })?;
    let dims = parse_dims(line_no, header, 2)?;
    let (m, n) = (dims[0], dims[1]);
    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let (line_no, line) = lines.next().ok_or(Error::Parse {
            line: line_no + rows.len() + 1,
            message: format!("expected {m} rows, found {}", rows.len()),
        })?;
        rows.push(parse_values::<T>(line_no, line, n)?);
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(Error::Parse {
            line: line_no,
            message: "trailing content after matrix rows".into(),
        });
    }
    Matrix::from_rows(&rows)
}

pub fn parse_signal<T: Real>(text: &str) -> Result<SparseSignal<T>> {
    let mut lines = content_lines(text);
    let (line_no, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "empty signal file".into(),
    })?;
    let n = parse_dims(line_no, header, 1)?[0];
    let values = if n == 0 {
        Vec::new()
    } else {
        let (line_no, line) = lines.next().ok_or(Error::Parse {
            line: line_no + 1,
            message: "missing signal values".into(),
        })?;
        parse_values::<T>(line_no, line, n)?
    };
    if let Some((line_no, _)) = lines.next() {
        return Err(Error::Parse {
            line: line_no,
            message: "trailing content after signal values".into(),
        });
    }
    SparseSignal::from_values(values)
}

fn join<T: Real>(values: impl IntoIterator<Item = T>) -> String {
    let mut s = String::new();
    for (k, v) in values.into_iter().enumerate() {
        if k > 0 {
            s.push(' ');
        }
        // Normalize -0 so files do not depend on the sign of zero.
        let v = if v == T::zero() { T::zero() } else { v };
        write!(s, "{v}").expect("write to string");
    }
    s
}

pub fn format_matrix<T: Real>(m: &Matrix<T>) -> String {
    let mut out = format!("{} {}\n", m.nrows(), m.ncols());
    for i in 0..m.nrows() {
        out.push_str(&join(m.row(i)));
        out.push('\n');
    }
    out
}

pub fn format_signal<T: Real>(x: &SparseSignal<T>) -> String {
    format!("{}\n{}\n", x.len(), join(x.values().iter().copied()))
}

pub fn read_sensing_matrix<T: Real>(path: &Path) -> Result<SensingMatrix<T>> {
    SensingMatrix::new(parse_matrix(&std::fs::read_to_string(path)?)?)
}

pub fn read_signal<T: Real>(path: &Path) -> Result<SparseSignal<T>> {
    parse_signal(&std::fs::read_to_string(path)?)
}

pub fn write_matrix<T: Real>(path: &Path, m: &Matrix<T>) -> Result<()> {
    std::fs::write(path, format_matrix(m))?;
    Ok(())
}

pub fn write_signal<T: Real>(path: &Path, x: &SparseSignal<T>) -> Result<()> {
    std::fs::write(path, format_signal(x))?;
    Ok(())
}
