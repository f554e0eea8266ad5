//! Plain-text matrix format.
//!
//! ```text
//! dims 2 2
//! 0.5+0j 0+0j 0+0j 0.5+0j
//! ...
//! ```
//!
//! The first line lists the subsystem dimensions; the following `d` lines
//! hold `d` whitespace-separated entries `re+imj` (or `re-imj`). Blank
//! lines and lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix};

pub fn write_matrix_text(rho: &DensityMatrix) -> String {
    let mut out = String::from("dims");
    for d in rho.dims() {
        write!(out, " {d}").unwrap();
    }
    out.push('\n');
    let m = rho.matrix();
    for i in 0..m.rows() {
        let row: Vec<String> = (0..m.cols()).map(|j| format_entry(m[(i, j)])).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn format_entry(z: Complex64) -> String {
    let sign = if z.im.is_sign_negative() { '-' } else { '+' };
    format!("{}{}{}j", z.re, sign, z.im.abs())
}

fn parse_entry(tok: &str) -> Result<Complex64> {
    let err = || Error::Parse(format!("invalid matrix entry '{tok}'"));
    let Some(body) = tok.strip_suffix('j') else {
        return tok.parse::<f64>().map(|r| Complex64::new(r, 0.0)).map_err(|_| err());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => {
            let re = body[..i].parse::<f64>().map_err(|_| err())?;
            let im = body[i..].parse::<f64>().map_err(|_| err())?;
            Ok(Complex64::new(re, im))
        }
        None => body.parse::<f64>().map(|im| Complex64::new(0.0, im)).map_err(|_| err()),
    }
}

pub fn parse_matrix_text(text: &str) -> Result<DensityMatrix> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let mut words = header.split_whitespace();
    if words.next() != Some("dims") {
        return Err(Error::Parse("first line must start with 'dims'".into()));
    }
    let dims = words
        .map(|w| w.parse::<usize>().ok().filter(|&d| d >= 1))
        .collect::<Option<Vec<_>>>()
        .filter(|d| !d.is_empty())
        .ok_or_else(|| Error::Parse(format!("invalid dims line '{header}'")))?;
    let d: usize = dims.iter().product();
    let mut rows = Vec::with_capacity(d);
    for line in lines {
        let row = line.split_whitespace().map(parse_entry).collect::<Result<Vec<_>>>()?;
        if row.len() != d {
            return Err(Error::Parse(format!("row has {} entries, expected {d}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != d {
        return Err(Error::Parse(format!("found {} rows, expected {d}", rows.len())));
    }
    DensityMatrix::new(ComplexMatrix::from_rows(&rows)?, dims)
}

pub fn read_matrix_file(path: &Path) -> Result<DensityMatrix> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix_text(&text)
}
