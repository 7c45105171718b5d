//! Plain-text interchange format for matrices and vectors.
//!
//! Layout: an optional single header line (free-form, e.g. the
//! `sat-reduction k t` tag or an instance parameter line), then a line
//! `rows cols`, then one whitespace-separated row per line. Entries are
//! written with 17 significant digits so doubles round-trip exactly.
//! Vectors are stored as `dim x 1` matrices.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

pub fn write_matrix<W: Write>(w: &mut W, m: &Matrix, header: Option<&str>) -> Result<()> {
    if let Some(h) = header {
        writeln!(w, "{h}")?;
    }
    writeln!(w, "{} {}", m.rows(), m.cols())?;
    for i in 0..m.rows() {
        let line: Vec<String> = m.row(i).iter().map(|x| format_entry(*x)).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn write_vector<W: Write>(w: &mut W, v: &Vector, header: Option<&str>) -> Result<()> {
    if let Some(h) = header {
        writeln!(w, "{h}")?;
    }
    writeln!(w, "{} 1", v.dim())?;
    for i in 0..v.dim() {
        writeln!(w, "{}", format_entry(v.get(i)))?;
    }
    Ok(())
}

/// Reads a matrix, skipping at most one leading header line.
pub fn read_matrix<R: BufRead>(r: &mut R) -> Result<Matrix> {
    Ok(read_matrix_with_header(r)?.1)
}

/// Reads a matrix and returns the header line, if one preceded the
/// dimension line.
pub fn read_matrix_with_header<R: BufRead>(r: &mut R) -> Result<(Option<String>, Matrix)> {
    let mut lines = LineReader::new(r);
    let first = lines
        .next_nonblank()?
        .ok_or_else(|| parse_err(0, "empty input, expected `rows cols`"))?;
    let (header, dims_line, dims_no) = match parse_dims(&first.1) {
        Some(d) => (None, d, first.0),
        None => {
            let second = lines
                .next_nonblank()?
                .ok_or_else(|| parse_err(first.0, "header without a `rows cols` line"))?;
            let dims = parse_dims(&second.1)
                .ok_or_else(|| parse_err(second.0, "expected `rows cols`"))?;
            (Some(first.1.clone()), dims, second.0)
        }
    };
    let (rows, cols) = dims_line;
    if rows == 0 || cols == 0 {
        return Err(parse_err(dims_no, "dimensions must be positive"));
    }
    let mut entries = Vec::with_capacity(rows * cols);
    for _ in 0..rows {
        let (no, line) = lines
            .next_nonblank()?
            .ok_or_else(|| parse_err(dims_no, format!("expected {rows} data rows")))?;
        let row: std::result::Result<Vec<f64>, _> =
            line.split_whitespace().map(|t| t.parse::<f64>()).collect();
        let row = row.map_err(|e| parse_err(no, format!("bad entry: {e}")))?;
        if row.len() != cols {
            return Err(parse_err(no, format!("expected {cols} entries, got {}", row.len())));
        }
        entries.extend(row);
    }
    let m = Matrix::new(rows, cols, entries)?;
    Ok((header, m))
}

pub fn read_vector<R: BufRead>(r: &mut R) -> Result<Vector> {
    Ok(read_vector_with_header(r)?.1)
}

pub fn read_vector_with_header<R: BufRead>(r: &mut R) -> Result<(Option<String>, Vector)> {
    let (header, m) = read_matrix_with_header(r)?;
    if m.cols() != 1 {
        return Err(Error::ShapeMismatch {
            context: "vector file",
            expected: "1 column".into(),
            got: format!("{}", m.cols()),
        });
    }
    Ok((header, m.column(0)))
}

/// Reads a vector that must hold integers exactly.
pub fn read_int_vector<R: BufRead>(r: &mut R) -> Result<Vec<i64>> {
    let v = read_vector(r)?;
    v.as_slice()
        .iter()
        .map(|&x| {
            if x.fract() == 0.0 && x.abs() < 2f64.powi(53) {
                Ok(x as i64)
            } else {
                Err(Error::InvalidParameter(format!("entry {x} is not an integer")))
            }
        })
        .collect()
}

pub fn write_int_vector<W: Write>(w: &mut W, v: &[i64], header: Option<&str>) -> Result<()> {
    if let Some(h) = header {
        writeln!(w, "{h}")?;
    }
    writeln!(w, "{} 1", v.len())?;
    for x in v {
        writeln!(w, "{x}")?;
    }
    Ok(())
}

fn format_entry(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_dims(line: &str) -> Option<(usize, usize)> {
    let mut it = line.split_whitespace();
    let rows = it.next()?.parse::<usize>().ok()?;
    let cols = it.next()?.parse::<usize>().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some((rows, cols))
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

struct LineReader<'a, R: BufRead> {
    inner: &'a mut R,
    line_no: usize,
}

impl<'a, R: BufRead> LineReader<'a, R> {
    fn new(inner: &'a mut R) -> Self {
        Self { inner, line_no: 0 }
    }

    fn next_nonblank(&mut self) -> Result<Option<(usize, String)>> {
        loop {
            let mut buf = String::new();
            let n = self.inner.read_line(&mut buf)?;
            if n == 0 {
                return Ok(None);
            }
            self.line_no += 1;
            let trimmed = buf.trim();
            if !trimmed.is_empty() {
                return Ok(Some((self.line_no, trimmed.to_string())));
            }
        }
    }
}
