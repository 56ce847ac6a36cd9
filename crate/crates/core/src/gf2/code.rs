use serde::Serialize;

use super::{enumerate_rowspace, nullspace_basis, rank, BinaryMatrix, Echelon};
use crate::error::{Error, Result};

/// What is known about a code's minimum distance.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "d", rename_all = "snake_case")]
pub enum Distance {
    /// Verified exact minimum distance.
    Exact(usize),
    /// Asserted lower bound, not verified.
    AtLeast(usize),
    Unknown,
}

impl Distance {
    /// Largest `a` for which every `a` columns of a parity-check matrix are
    /// known to be independent (`d - 1`), if any bound is available.
    pub fn max_independent_columns(&self) -> Option<usize> {
        match *self {
            Distance::Exact(d) | Distance::AtLeast(d) => Some(d.saturating_sub(1)),
            Distance::Unknown => None,
        }
    }
}

/// Binary `[n, k]` linear code held as a basis of its dual.
#[derive(Clone, Debug)]
pub struct LinearCode {
    n: usize,
    k: usize,
    dual_basis: BinaryMatrix,
    distance: Distance,
}

impl LinearCode {
    /// Builds a code from any parity-check matrix; dependent rows are dropped.
    pub fn from_parity_check(h: &BinaryMatrix, distance: Distance) -> Result<Self> {
        let n = h.cols();
        if n == 0 {
            return Err(Error::domain("code length must be positive"));
        }
        let mut ech = Echelon::new(n);
        let rows = h
            .row_vectors()
            .iter()
            .filter(|r| ech.insert(r))
            .cloned()
            .collect::<Vec<_>>();
        let dual_basis = BinaryMatrix::from_rows(n, rows);
        Self::from_dual_basis(dual_basis, distance)
    }

    /// Builds a code from a generator matrix (rows spanning the code).
    pub fn from_generator(g: &BinaryMatrix, distance: Distance) -> Result<Self> {
        Self::from_parity_check(&nullspace_basis(g), distance)
    }

    /// `dual_basis` must have independent rows.
    pub fn from_dual_basis(dual_basis: BinaryMatrix, distance: Distance) -> Result<Self> {
        let n = dual_basis.cols();
        if n == 0 {
            return Err(Error::domain("code length must be positive"));
        }
        if rank(&dual_basis) != dual_basis.rows() {
            return Err(Error::domain("dual basis rows are not independent"));
        }
        let k = n - dual_basis.rows();
        if let Distance::Exact(d) = distance {
            if k >= 1 && !(1..=n).contains(&d) {
                return Err(Error::domain(format!("exact distance {d} outside 1..={n}")));
            }
        }
        Ok(LinearCode {
            n,
            k,
            dual_basis,
            distance,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Dual dimension `n - k`.
    pub fn redundancy(&self) -> usize {
        self.n - self.k
    }

    pub fn dual_basis(&self) -> &BinaryMatrix {
        &self.dual_basis
    }

    pub fn distance(&self) -> Distance {
        self.distance
    }

    pub fn with_distance(mut self, distance: Distance) -> Self {
        self.distance = distance;
        self
    }

    /// A basis of the code itself.
    pub fn generator(&self) -> BinaryMatrix {
        nullspace_basis(&self.dual_basis)
    }

    /// Whether `h` is a parity-check matrix of this code: every row is a dual
    /// codeword and the rows span the whole dual.
    pub fn is_parity_check(&self, h: &BinaryMatrix) -> bool {
        if h.cols() != self.n {
            return false;
        }
        let mut span = Echelon::new(self.n);
        for r in self.dual_basis.row_vectors() {
            span.insert(r);
        }
        h.row_vectors().iter().all(|r| span.contains(r)) && rank(h) == self.redundancy()
    }
}

/// Minimum nonzero weight of the code, by Gray-code enumeration of all
/// `2^k` codewords.
pub fn minimum_distance(code: &LinearCode, max_dim: u32) -> Result<usize> {
    if code.k() == 0 {
        return Err(Error::domain("minimum distance undefined for k = 0"));
    }
    // A zero column of H means the matching unit vector is a codeword.
    let cols = code.dual_basis().columns();
    if cols.iter().any(|c| c.is_zero()) {
        return Ok(1);
    }
    let g = code.generator();
    let best = enumerate_rowspace(&g, max_dim)?
        .skip(1)
        .map(|c| c.weight())
        .min()
        .expect("k >= 1 gives a nonzero codeword");
    Ok(best)
}
