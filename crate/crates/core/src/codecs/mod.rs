//! Matrix file formats and the built-in code catalog.

pub mod alist;
pub mod catalog;
pub mod dense;

pub use alist::{emit_alist, parse_alist};
pub use catalog::{catalog, CatalogEntry, CATALOG_NAMES};
pub use dense::{emit_dense, parse_dense};

use crate::error::Result;
use crate::gf2::BinaryMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFormat {
    Alist,
    Dense,
}

/// Guesses the format from the first non-comment line: alist headers hold
/// two whitespace-separated numbers, dense rows have no whitespace.
pub fn detect_format(text: &str) -> MatrixFormat {
    let first = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty() && !l.starts_with('#'));
    match first {
        Some(l) if l.contains(char::is_whitespace) => MatrixFormat::Alist,
        _ => MatrixFormat::Dense,
    }
}

pub fn parse_matrix(text: &str) -> Result<BinaryMatrix> {
    match detect_format(text) {
        MatrixFormat::Alist => parse_alist(text),
        MatrixFormat::Dense => parse_dense(text),
    }
}
