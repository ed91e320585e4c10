//! Plain-text matrix files.
//!
//! ```text
//! # optional comment lines
//! m n
//! re11 im11 re12 im12 ... re1n im1n
//! ...
//! rem1 imm1 ...            rem_n imm_n
//! ```
//!
//! The header holds two positive decimal integers. Each of the following `m`
//! lines holds `2n` decimal floats, real and imaginary parts interleaved.
//! Lines whose first non-blank character is `#` are comments; blank lines
//! are ignored. The writer uses the shortest decimal form that parses back
//! to the same `f64`, so a write/read cycle is bit-exact.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use thiserror::Error;

use crate::linalg::ComplexMatrix;

#[derive(Debug, Error)]
pub enum MatrixFileError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<MatrixFileError>,
    },
}

fn parse_err(line: usize, message: impl Into<String>) -> MatrixFileError {
    MatrixFileError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses the text format described in the module docs.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix, MatrixFileError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines
        .next()
        .ok_or_else(|| parse_err(text.lines().count().max(1), "missing header `m n`"))?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    if dims.len() != 2 {
        return Err(parse_err(header_line, "header must be `m n`"));
    }
    let parse_dim = |s: &str| -> Result<usize, MatrixFileError> {
        match s.parse::<usize>() {
            Ok(v) if v > 0 => Ok(v),
            _ => Err(parse_err(
                header_line,
                format!("dimension `{s}` is not a positive integer"),
            )),
        }
    };
    let rows = parse_dim(dims[0])?;
    let cols = parse_dim(dims[1])?;

    let mut data = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| parse_err(header_line, format!("expected {rows} rows, found {r}")))?;
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 * cols {
            return Err(parse_err(
                line_no,
                format!("expected {} numbers, found {}", 2 * cols, fields.len()),
            ));
        }
        for pair in fields.chunks(2) {
            let part = |s: &str| -> Result<f64, MatrixFileError> {
                let v: f64 = s
                    .parse()
                    .map_err(|_| parse_err(line_no, format!("`{s}` is not a number")))?;
                if !v.is_finite() {
                    return Err(parse_err(line_no, format!("non-finite value `{s}`")));
                }
                Ok(v)
            };
            let re = part(pair[0])?;
            let im = part(pair[1])?;
            data.push(Complex64::new(re, im));
        }
    }
    if let Some((line_no, _)) = lines.next() {
        return Err(parse_err(line_no, format!("unexpected data after {rows} rows")));
    }
    ComplexMatrix::new(rows, cols, data).map_err(|e| parse_err(header_line, e.to_string()))
}

/// Shorter of the plain and exponent renderings; both parse back exactly.
fn shortest(x: f64) -> String {
    let plain = x.to_string();
    let exp = format!("{x:e}");
    if exp.len() < plain.len() {
        exp
    } else {
        plain
    }
}

/// Renders a matrix in the text format.
pub fn serialize_matrix(a: &ComplexMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", a.rows(), a.cols());
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            let z = a[(i, j)];
            if j > 0 {
                out.push(' ');
            }
            let _ = write!(out, "{} {}", shortest(z.re), shortest(z.im));
        }
        out.push('\n');
    }
    out
}

/// A matrix together with the file it came from.
#[derive(Debug, Clone)]
pub struct MatrixFile {
    pub path: PathBuf,
    pub matrix: ComplexMatrix,
}

impl MatrixFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, MatrixFileError> {
        let path = path.as_ref().to_path_buf();
        let text = fs::read_to_string(&path).map_err(|source| MatrixFileError::Io {
            path: path.clone(),
            source,
        })?;
        let matrix = parse_matrix(&text).map_err(|e| MatrixFileError::InFile {
            path: path.clone(),
            source: Box::new(e),
        })?;
        Ok(Self { path, matrix })
    }

    pub fn save(path: impl AsRef<Path>, matrix: &ComplexMatrix) -> Result<(), MatrixFileError> {
        let path = path.as_ref();
        fs::write(path, serialize_matrix(matrix)).map_err(|source| MatrixFileError::Io {
            path: path.to_path_buf(),
            source,
        })
    }
}
