use thiserror::Error;

use crate::gf2::BinaryMatrix;

pub type Result<T> = std::result::Result<T, Error>;

/// Reason an alist or dense-text matrix failed to parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    MalformedHeader,
    IndexOutOfRange,
    DegreeMismatch,
    /// Column and row adjacency lists disagree.
    Inconsistent,
    BadCharacter,
    RaggedRow,
    UnexpectedEof,
    TrailingData,
}

impl std::fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ParseErrorKind::MalformedHeader => "malformed header",
            ParseErrorKind::IndexOutOfRange => "index out of range",
            ParseErrorKind::DegreeMismatch => "degree mismatch",
            ParseErrorKind::Inconsistent => "inconsistent adjacency",
            ParseErrorKind::BadCharacter => "bad character",
            ParseErrorKind::RaggedRow => "ragged row",
            ParseErrorKind::UnexpectedEof => "unexpected end of input",
            ParseErrorKind::TrailingData => "trailing data",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("budget exceeded: {what} needs {needed}, limit is {limit}")]
    Budget {
        what: &'static str,
        needed: String,
        limit: String,
    },

    #[error("column index {index} out of range for {cols} columns")]
    IndexOutOfRange { index: usize, cols: usize },

    #[error("line {line}: {kind}: {detail}")]
    Parse {
        line: usize,
        kind: ParseErrorKind,
        detail: String,
    },

    #[error("unknown code name `{0}`")]
    UnknownCode(String),

    #[error("`{0}` only carries parameters, no matrix")]
    ParametersOnly(String),

    #[error("repair cap of {cap} rows exceeded")]
    CapExceeded {
        cap: usize,
        partial: Box<BinaryMatrix>,
    },

    #[error("column subset {subset:?} lies on a codeword support and can never be repaired")]
    Unrepairable { subset: Vec<usize> },

    #[error("no success after {0} attempts")]
    AttemptsExhausted(usize),

    #[error("no qualifying matrix with at most {max_rows} rows")]
    NotFound { max_rows: usize },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(line: usize, kind: ParseErrorKind, detail: impl Into<String>) -> Self {
        Error::Parse {
            line,
            kind,
            detail: detail.into(),
        }
    }
}
