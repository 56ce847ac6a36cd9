use rand::Rng;

use super::{BinaryMatrix, BitVector};
use crate::error::{Error, Result};

/// Default cap on the dimension of any exhaustively enumerated space
/// (2^24 vectors).
pub const DEFAULT_ENUM_DIM: u32 = 24;

/// Uniform element of the row space of `basis`, zero vector included.
///
/// The rows of `basis` must be independent; each is then included with
/// probability one half and the sum is uniform over the span.
pub fn sample_codeword<R: Rng + ?Sized>(basis: &BinaryMatrix, rng: &mut R) -> BitVector {
    let mut v = BitVector::zeros(basis.cols());
    let mut bits = 0u64;
    for (i, row) in basis.row_vectors().iter().enumerate() {
        if i % 64 == 0 {
            bits = rng.gen();
        }
        if (bits >> (i % 64)) & 1 == 1 {
            v.xor_assign(row);
        }
    }
    v
}

/// Every vector of the row space of `basis`, in binary reflected Gray code
/// order: consecutive outputs differ by exactly one basis row.
pub struct RowspaceIter<'a> {
    basis: &'a BinaryMatrix,
    current: BitVector,
    step: u64,
    total: u64,
}

impl Iterator for RowspaceIter<'_> {
    type Item = BitVector;

    fn next(&mut self) -> Option<BitVector> {
        if self.step == self.total {
            return None;
        }
        if self.step > 0 {
            let flip = self.step.trailing_zeros() as usize;
            self.current.xor_assign(self.basis.row(flip));
        }
        self.step += 1;
        Some(self.current.clone())
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.step) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for RowspaceIter<'_> {}

/// Enumerates all `2^rows` elements of the span of an independent `basis`.
///
/// Fails with a budget error when `basis.rows() > max_dim` rather than
/// truncating.
pub fn enumerate_rowspace(basis: &BinaryMatrix, max_dim: u32) -> Result<RowspaceIter<'_>> {
    let dim = basis.rows();
    if dim > max_dim as usize || dim >= 64 {
        return Err(Error::Budget {
            what: "row space enumeration",
            needed: format!("2^{dim} vectors"),
            limit: format!("2^{max_dim}"),
        });
    }
    Ok(RowspaceIter {
        basis,
        current: BitVector::zeros(basis.cols()),
        step: 0,
        total: 1u64 << dim,
    })
}
