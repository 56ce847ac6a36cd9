use super::{BinaryMatrix, BitVector};

/// Incrementally maintained echelon basis of a row space.
///
/// Vectors are reduced against the stored basis in insertion order; every
/// stored vector is zero at the pivots of all vectors inserted before it, so a
/// single forward pass fully reduces a query.
#[derive(Clone, Debug)]
pub struct Echelon {
    len: usize,
    basis: Vec<(usize, BitVector)>,
}

impl Echelon {
    pub fn new(len: usize) -> Self {
        Echelon {
            len,
            basis: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn reduce(&self, v: &BitVector) -> BitVector {
        debug_assert_eq!(v.len(), self.len);
        let mut v = v.clone();
        for (pivot, b) in &self.basis {
            if v.get(*pivot) {
                v.xor_assign(b);
            }
        }
        v
    }

    pub fn contains(&self, v: &BitVector) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the spanned space. Returns `true` if the rank grew.
    pub fn insert(&mut self, v: &BitVector) -> bool {
        let r = self.reduce(v);
        match r.first_one() {
            Some(p) => {
                self.basis.push((p, r));
                true
            }
            None => false,
        }
    }
}

/// Dimension of the row space of `m`.
pub fn rank(m: &BinaryMatrix) -> usize {
    let mut e = Echelon::new(m.cols());
    for row in m.row_vectors() {
        e.insert(row);
        if e.rank() == m.cols() {
            break;
        }
    }
    e.rank()
}

/// Reduced row echelon form of a copy of `m`: the nonzero rows together with
/// their pivot columns, pivots strictly increasing.
fn rref(m: &BinaryMatrix) -> Vec<(usize, BitVector)> {
    let mut rows: Vec<BitVector> = m.row_vectors().to_vec();
    let mut pivots = Vec::new();
    let mut next = 0;
    for col in 0..m.cols() {
        if next == rows.len() {
            break;
        }
        let Some(found) = (next..rows.len()).find(|&r| rows[r].get(col)) else {
            continue;
        };
        rows.swap(next, found);
        let pivot_row = rows[next].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != next && row.get(col) {
                row.xor_assign(&pivot_row);
            }
        }
        pivots.push(col);
        next += 1;
    }
    rows.truncate(next);
    pivots.into_iter().zip(rows).collect()
}

/// Basis of `{x : m x^T = 0}` as the rows of a `(cols - rank) x cols` matrix.
pub fn nullspace_basis(m: &BinaryMatrix) -> BinaryMatrix {
    let cols = m.cols();
    let reduced = rref(m);
    let mut is_pivot = vec![false; cols];
    for (p, _) in &reduced {
        is_pivot[*p] = true;
    }
    let basis = (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut x = BitVector::unit(cols, f);
            for (p, row) in &reduced {
                if row.get(f) {
                    x.set(*p, true);
                }
            }
            x
        })
        .collect();
    BinaryMatrix::from_rows(cols, basis)
}
