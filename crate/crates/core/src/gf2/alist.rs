//! The alist text format for sparse binary matrices.
//!
//! Layout, one group per line:
//! ```text
//! n m                      (columns = bits, rows = checks)
//! max_col_deg max_row_deg
//! column degrees           (n integers)
//! row degrees              (m integers)
//! n lines of 1-based row indices, one per column
//! m lines of 1-based column indices, one per row
//! ```
//! Index lists carry exactly `degree` entries; a 0 entry is rejected
//! (indices are 1-based).

use super::code::ParityCheckMatrix;
use crate::{Error, Result};
use std::fs;
use std::path::Path;

/// Parses an alist document into a parity-check matrix.
pub fn read_alist_str(text: &str) -> Result<ParityCheckMatrix> {
    // an empty line is a valid index list for a degree-0 row or column
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));

    let mut next_ints = |expected: Option<usize>| -> Result<(usize, Vec<usize>)> {
        let (line_no, line) = lines
            .next()
            .ok_or_else(|| Error::parse(0, "unexpected end of file"))?;
        let mut out = Vec::new();
        for tok in line.split_whitespace() {
            let v: usize = tok
                .parse()
                .map_err(|_| Error::parse(line_no, format!("not an integer: {tok:?}")))?;
            out.push(v);
        }
        if let Some(n) = expected {
            if out.len() != n {
                return Err(Error::parse(
                    line_no,
                    format!("expected {n} integers, found {}", out.len()),
                ));
            }
        }
        Ok((line_no, out))
    };

    let (line_no, header) = next_ints(Some(2))?;
    let (n, m) = (header[0], header[1]);
    if n == 0 || m == 0 {
        return Err(Error::parse(line_no, "matrix dimensions must be positive"));
    }
    let (_, maxdeg) = next_ints(Some(2))?;
    let (max_col, max_row) = (maxdeg[0], maxdeg[1]);
    let (line_no, col_deg) = next_ints(Some(n))?;
    if col_deg.iter().any(|&d| d > max_col) {
        return Err(Error::parse(line_no, "column degree exceeds stated maximum"));
    }
    let (line_no, row_deg) = next_ints(Some(m))?;
    if row_deg.iter().any(|&d| d > max_row) {
        return Err(Error::parse(line_no, "row degree exceeds stated maximum"));
    }

    let mut cols: Vec<Vec<usize>> = Vec::with_capacity(n);
    for deg in col_deg.iter().copied() {
        let (line_no, idx) = next_ints(Some(deg))?;
        for &r in &idx {
            if r == 0 || r > m {
                return Err(Error::parse(
                    line_no,
                    format!("row index {r} out of range 1..={m}"),
                ));
            }
        }
        cols.push(idx.iter().map(|&r| r - 1).collect());
    }

    let mut rows: Vec<Vec<usize>> = Vec::with_capacity(m);
    for deg in row_deg.iter().copied() {
        let (line_no, idx) = next_ints(Some(deg))?;
        for &c in &idx {
            if c == 0 || c > n {
                return Err(Error::parse(
                    line_no,
                    format!("column index {c} out of range 1..={n}"),
                ));
            }
        }
        rows.push(idx.iter().map(|&c| c - 1).collect());
    }

    // the two halves must describe the same matrix
    let mut from_cols: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (c, col) in cols.iter().enumerate() {
        for &r in col {
            from_cols[r].push(c);
        }
    }
    for (r, (a, b)) in from_cols.iter().zip(rows.iter()).enumerate() {
        let mut b = b.clone();
        b.sort_unstable();
        if *a != b {
            return Err(Error::parse(
                0,
                format!("row {} disagrees between column and row index lists", r + 1),
            ));
        }
    }

    ParityCheckMatrix::from_row_supports(n, &rows)
}

/// Serializes a parity-check matrix as alist text.
pub fn write_alist_string(h: &ParityCheckMatrix) -> String {
    let n = h.n();
    let m = h.m_rows();
    let row_supports: Vec<Vec<usize>> = h.rows().iter().map(|r| r.support()).collect();
    let mut col_supports: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (r, support) in row_supports.iter().enumerate() {
        for &c in support {
            col_supports[c].push(r);
        }
    }
    let max_col = col_supports.iter().map(Vec::len).max().unwrap_or(0);
    let max_row = row_supports.iter().map(Vec::len).max().unwrap_or(0);

    let join = |v: &[usize], offset: usize| {
        v.iter()
            .map(|x| (x + offset).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };

    let mut out = String::new();
    out.push_str(&format!("{n} {m}\n{max_col} {max_row}\n"));
    out.push_str(&join(
        &col_supports.iter().map(Vec::len).collect::<Vec<_>>(),
        0,
    ));
    out.push('\n');
    out.push_str(&join(
        &row_supports.iter().map(Vec::len).collect::<Vec<_>>(),
        0,
    ));
    out.push('\n');
    for col in &col_supports {
        out.push_str(&join(col, 1));
        out.push('\n');
    }
    for row in &row_supports {
        out.push_str(&join(row, 1));
        out.push('\n');
    }
    out
}

/// Reads an alist file from disk.
pub fn read_alist(path: impl AsRef<Path>) -> Result<ParityCheckMatrix> {
    read_alist_str(&fs::read_to_string(path)?)
}

/// Writes an alist file to disk.
pub fn write_alist(path: impl AsRef<Path>, h: &ParityCheckMatrix) -> Result<()> {
    fs::write(path, write_alist_string(h))?;
    Ok(())
}
