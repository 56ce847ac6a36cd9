//! Dense text matrices: one row per line of `0`/`1` characters. Blank lines
//! and lines starting with `#` are ignored.

use crate::error::{Error, ParseErrorKind, Result};
use crate::gf2::{BinaryMatrix, BitVector};

pub fn parse_dense(text: &str) -> Result<BinaryMatrix> {
    let mut rows = Vec::new();
    let mut cols: Option<usize> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = BitVector::from_str01(line).ok_or_else(|| {
            Error::parse(
                i + 1,
                ParseErrorKind::BadCharacter,
                "rows may only contain '0' and '1'",
            )
        })?;
        match cols {
            Some(c) if c != row.len() => {
                return Err(Error::parse(
                    i + 1,
                    ParseErrorKind::RaggedRow,
                    format!("row has {} entries, expected {c}", row.len()),
                ))
            }
            _ => cols = Some(row.len()),
        }
        rows.push(row);
    }
    Ok(BinaryMatrix::from_rows(cols.unwrap_or(0), rows))
}

pub fn emit_dense(h: &BinaryMatrix) -> String {
    let mut out = String::with_capacity(h.rows() * (h.cols() + 1));
    for r in h.row_vectors() {
        out.push_str(&r.to_string());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_emit() {
        let text = "# identity\n100\n010\n\n001\n";
        let h = parse_dense(text).unwrap();
        assert_eq!(h, BinaryMatrix::identity(3));
        assert_eq!(emit_dense(&h), "100\n010\n001\n");
    }

    #[test]
    fn errors_name_lines() {
        match parse_dense("101\n1x1\n") {
            Err(Error::Parse { line: 2, kind: ParseErrorKind::BadCharacter, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_dense("101\n\n11\n") {
            Err(Error::Parse { line: 3, kind: ParseErrorKind::RaggedRow, .. }) => {}
            other => panic!("{other:?}"),
        }
    }
}
