//! The alist sparse-matrix format.
//!
//! ```text
//! n m                    columns, rows
//! max_col_deg max_row_deg
//! col degrees (n values)
//! row degrees (m values)
//! n lines: 1-based row indices of each column
//! m lines: 1-based column indices of each row
//! ```
//!
//! Adjacency lines may be padded with zeros; the emitter never pads.

use std::fmt::Write as _;

use crate::error::{Error, ParseErrorKind, Result};
use crate::gf2::{BinaryMatrix, BitVector};

struct Lines<'a> {
    lines: Vec<&'a str>,
    next: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            lines: text.lines().collect(),
            next: 0,
        }
    }

    /// 1-based number of the line most recently taken.
    fn line_no(&self) -> usize {
        self.next
    }

    fn take(&mut self) -> Option<&'a str> {
        let l = self.lines.get(self.next).copied();
        self.next += 1;
        l
    }

    fn numbers(&mut self, what: &str, kind: ParseErrorKind) -> Result<Vec<usize>> {
        let line = self.take().ok_or_else(|| {
            Error::parse(self.line_no(), ParseErrorKind::UnexpectedEof, format!("missing {what}"))
        })?;
        line.split_whitespace()
            .map(|tok| {
                tok.parse::<usize>().map_err(|_| {
                    Error::parse(
                        self.line_no(),
                        kind.clone(),
                        format!("`{tok}` is not a nonnegative integer in {what}"),
                    )
                })
            })
            .collect()
    }
}

fn expect_len(values: &[usize], want: usize, line: usize, what: &str) -> Result<()> {
    if values.len() != want {
        return Err(Error::parse(
            line,
            ParseErrorKind::MalformedHeader,
            format!("{what}: expected {want} values, found {}", values.len()),
        ));
    }
    Ok(())
}

/// Reads one adjacency line: nonzero 1-based indices below `bound`, exactly
/// `degree` of them, no repeats. A missing trailing line reads as empty.
fn adjacency(lines: &mut Lines<'_>, degree: usize, bound: usize, what: &str) -> Result<Vec<usize>> {
    let raw = if lines.next >= lines.lines.len() && degree == 0 {
        lines.next += 1;
        Vec::new()
    } else {
        lines.numbers(what, ParseErrorKind::IndexOutOfRange)?
    };
    let line = lines.line_no();
    let mut out: Vec<usize> = Vec::with_capacity(degree);
    for idx in raw.into_iter().filter(|&i| i != 0) {
        if idx > bound {
            return Err(Error::parse(
                line,
                ParseErrorKind::IndexOutOfRange,
                format!("{what}: index {idx} exceeds {bound}"),
            ));
        }
        if out.contains(&(idx - 1)) {
            return Err(Error::parse(
                line,
                ParseErrorKind::Inconsistent,
                format!("{what}: index {idx} repeated"),
            ));
        }
        out.push(idx - 1);
    }
    if out.len() != degree {
        return Err(Error::parse(
            line,
            ParseErrorKind::DegreeMismatch,
            format!("{what}: declared degree {degree}, listed {}", out.len()),
        ));
    }
    Ok(out)
}

pub fn parse_alist(text: &str) -> Result<BinaryMatrix> {
    let mut lines = Lines::new(text);
    let dims = lines.numbers("dimensions", ParseErrorKind::MalformedHeader)?;
    expect_len(&dims, 2, 1, "dimensions")?;
    let (n, m) = (dims[0], dims[1]);
    let maxes = lines.numbers("maximum degrees", ParseErrorKind::MalformedHeader)?;
    expect_len(&maxes, 2, 2, "maximum degrees")?;
    let col_deg = lines.numbers("column degrees", ParseErrorKind::MalformedHeader)?;
    expect_len(&col_deg, n, 3, "column degrees")?;
    let row_deg = lines.numbers("row degrees", ParseErrorKind::MalformedHeader)?;
    expect_len(&row_deg, m, 4, "row degrees")?;
    if col_deg.iter().copied().max().unwrap_or(0) != maxes[0]
        || row_deg.iter().copied().max().unwrap_or(0) != maxes[1]
    {
        return Err(Error::parse(
            2,
            ParseErrorKind::DegreeMismatch,
            "maximum degrees disagree with the degree lists",
        ));
    }
    if col_deg.iter().sum::<usize>() != row_deg.iter().sum::<usize>() {
        return Err(Error::parse(
            4,
            ParseErrorKind::DegreeMismatch,
            "column and row degree totals differ",
        ));
    }

    let mut h = BinaryMatrix::zeros(m, n);
    for (c, &deg) in col_deg.iter().enumerate() {
        for r in adjacency(&mut lines, deg, m, &format!("column {}", c + 1))? {
            h.set(r, c, true);
        }
    }
    for (r, &deg) in row_deg.iter().enumerate() {
        let listed = adjacency(&mut lines, deg, n, &format!("row {}", r + 1))?;
        let mut want = BitVector::zeros(n);
        for c in listed {
            want.set(c, true);
        }
        if &want != h.row(r) {
            return Err(Error::parse(
                lines.line_no(),
                ParseErrorKind::Inconsistent,
                format!("row {} disagrees with the column lists", r + 1),
            ));
        }
    }
    while let Some(extra) = lines.take() {
        if !extra.trim().is_empty() {
            return Err(Error::parse(
                lines.line_no(),
                ParseErrorKind::TrailingData,
                "unexpected content after the row lists",
            ));
        }
    }
    Ok(h)
}

fn join(values: impl Iterator<Item = usize>) -> String {
    let mut s = String::new();
    for (i, v) in values.enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{v}").unwrap();
    }
    s
}

/// Canonical alist: no padding, ascending indices, newline-terminated.
pub fn emit_alist(h: &BinaryMatrix) -> String {
    let cols = h.columns();
    let col_deg: Vec<usize> = cols.iter().map(BitVector::weight).collect();
    let row_deg: Vec<usize> = h.row_vectors().iter().map(BitVector::weight).collect();
    let mut out = String::new();
    writeln!(out, "{} {}", h.cols(), h.rows()).unwrap();
    writeln!(
        out,
        "{} {}",
        col_deg.iter().max().unwrap_or(&0),
        row_deg.iter().max().unwrap_or(&0)
    )
    .unwrap();
    writeln!(out, "{}", join(col_deg.iter().copied())).unwrap();
    writeln!(out, "{}", join(row_deg.iter().copied())).unwrap();
    for c in &cols {
        writeln!(out, "{}", join(c.ones().map(|r| r + 1))).unwrap();
    }
    for r in h.row_vectors() {
        writeln!(out, "{}", join(r.ones().map(|c| c + 1))).unwrap();
    }
    out
}
