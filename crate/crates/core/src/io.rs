//! Text matrix format: a header line `n` (or `rows cols`), then one row per
//! line of whitespace-separated integers or `p/q` rationals. Blank lines and
//! lines starting with `#` are ignored.

use std::path::Path;

use crate::error::{Error, Result};
use crate::matrix::MatQ;
use crate::rat::{parse_rat, Rat};

pub fn parse_matrix(text: &str) -> Result<MatQ> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines.next().ok_or_else(|| Error::Parse("empty matrix file".into()))?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse(format!("bad dimension `{t}`"))))
        .collect::<Result<_>>()?;
    let (rows, cols) = match dims.as_slice() {
        [n] => (*n, *n),
        [r, c] => (*r, *c),
        _ => return Err(Error::Parse(format!("bad header `{header}`"))),
    };
    let mut entries: Vec<Rat> = Vec::with_capacity(rows * cols);
    for i in 0..rows {
        let line = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("expected {rows} rows, found {i}")))?;
        let row: Vec<Rat> = line.split_whitespace().map(parse_rat).collect::<Result<_>>()?;
        if row.len() != cols {
            return Err(Error::Parse(format!("row {} has {} entries, expected {cols}", i + 1, row.len())));
        }
        entries.extend(row);
    }
    if let Some(extra) = lines.next() {
        return Err(Error::Parse(format!("unexpected trailing line `{extra}`")));
    }
    MatQ::new(rows, cols, entries)
}

pub fn format_matrix(a: &MatQ) -> String {
    let mut out = if a.is_square() {
        format!("{}\n", a.rows())
    } else {
        format!("{} {}\n", a.rows(), a.cols())
    };
    out.push_str(&a.to_string());
    out
}

pub fn read_matrix_file(path: impl AsRef<Path>) -> Result<MatQ> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_matrix(&text)
}
