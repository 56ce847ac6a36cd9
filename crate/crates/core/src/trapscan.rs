//! Trapping-set detection.
//!
//! A set `S` of columns of `H` is an `(|S|, w)`-trapping set when the XOR of
//! those columns has weight `w`. A matrix satisfies a [`TrapProfile`] `(a, b)`
//! when no column subset with `1 <= |S| <= a` has odd-row count below `b`.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::combin::{subsets_up_to, RevolvingDoor};
use crate::error::{Error, Result};
use crate::gf2::{enumerate_rowspace, BinaryMatrix, BitVector, Distance, LinearCode};

/// Default subset count above which a scan attaches a cost warning.
pub const DEFAULT_SCAN_WARN: u128 = 50_000_000;

/// The `(a, b)` pair: column subsets of size up to `a` must see at least `b`
/// odd rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TrapProfile {
    pub a: usize,
    pub b: usize,
}

impl TrapProfile {
    pub fn new(a: usize, b: usize) -> Result<Self> {
        if a == 0 {
            return Err(Error::domain("trap profile needs a >= 1"));
        }
        Ok(TrapProfile { a, b })
    }

    /// Rejects `a >= d` when the code's distance is known exactly.
    pub fn check_against(&self, code: &LinearCode) -> Result<()> {
        if self.a > code.n() {
            return Err(Error::domain(format!(
                "a = {} exceeds code length {}",
                self.a,
                code.n()
            )));
        }
        if let Distance::Exact(d) = code.distance() {
            if self.a + 1 > d {
                return Err(Error::domain(format!(
                    "a = {} must be at most d - 1 = {}",
                    self.a,
                    d - 1
                )));
            }
        }
        Ok(())
    }
}

/// Which subset sizes a scan covers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeRange {
    /// Every size from 1 to `a`.
    Collective,
    /// Size exactly `a`.
    Exactly,
}

impl SizeRange {
    fn sizes(self, a: usize) -> std::ops::RangeInclusive<usize> {
        match self {
            SizeRange::Collective => 1..=a,
            SizeRange::Exactly => a..=a,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanOptions {
    pub sizes: SizeRange,
    /// Stop once at least this many violations are known.
    pub cap: Option<usize>,
    pub warn_threshold: u128,
    pub parallel: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            sizes: SizeRange::Collective,
            cap: None,
            warn_threshold: DEFAULT_SCAN_WARN,
            parallel: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub subset: Vec<usize>,
    pub odd_count: usize,
}

/// Shortlex order on subsets: by size, then lexicographically.
pub fn shortlex(a: &[usize], b: &[usize]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

#[derive(Clone, Debug, Serialize)]
pub struct TrapReport {
    pub profile: TrapProfile,
    pub violations: Vec<Violation>,
    pub scanned_subsets: u128,
    pub clean: bool,
    /// Set when a cap stopped the scan before it covered every subset.
    pub truncated: bool,
    pub cap: Option<usize>,
    pub warnings: Vec<String>,
}

fn check_indices(cols: usize, subset: &[usize]) -> Result<()> {
    match subset.iter().find(|&&i| i >= cols) {
        Some(&index) => Err(Error::IndexOutOfRange { index, cols }),
        None => Ok(()),
    }
}

/// Number of odd-weight rows of `H` restricted to the columns in `subset`.
pub fn odd_row_count(h: &BinaryMatrix, subset: &[usize]) -> Result<usize> {
    if subset.is_empty() {
        return Err(Error::domain("column subset must be nonempty"));
    }
    check_indices(h.cols(), subset)?;
    let mut mask = BitVector::zeros(h.cols());
    for &c in subset {
        mask.flip(c);
    }
    Ok(h.row_vectors().iter().filter(|r| r.dot(&mask)).count())
}

/// Visits every `size`-subset whose largest element is `top`, carrying the
/// running column XOR through revolving-door steps.
fn walk_block<F: FnMut(&[usize], usize)>(
    columns: &[BitVector],
    size: usize,
    top: usize,
    mut visit: F,
) {
    let mut rd = RevolvingDoor::new(top, size - 1);
    let mut acc = columns[top].clone();
    for &c in rd.current() {
        acc.xor_assign(&columns[c]);
    }
    let mut subset = Vec::with_capacity(size);
    loop {
        subset.clear();
        subset.extend_from_slice(rd.current());
        subset.push(top);
        visit(&subset, acc.weight());
        match rd.advance() {
            Some((out, inn)) => {
                acc.xor_assign(&columns[out]);
                acc.xor_assign(&columns[inn]);
            }
            None => break,
        }
    }
}

fn blocks(cols: usize, sizes: std::ops::RangeInclusive<usize>) -> Vec<(usize, usize)> {
    sizes
        .filter(|&s| s <= cols)
        .flat_map(|s| (s - 1..cols).map(move |top| (s, top)))
        .collect()
}

fn block_violations(columns: &[BitVector], size: usize, top: usize, b: usize) -> Vec<Violation> {
    let mut out = Vec::new();
    walk_block(columns, size, top, |s, w| {
        if w < b {
            out.push(Violation {
                subset: s.to_vec(),
                odd_count: w,
            });
        }
    });
    out
}

// Blocks per deterministic round when a cap is set.
const CAP_ROUND: usize = 64;

/// Scans `H` for every trapping set forbidden by `profile`.
pub fn scan(h: &BinaryMatrix, profile: TrapProfile) -> TrapReport {
    scan_with(h, profile, &ScanOptions::default())
}

/// Scans with explicit options. Results do not depend on `parallel`.
pub fn scan_with(h: &BinaryMatrix, profile: TrapProfile, opts: &ScanOptions) -> TrapReport {
    let cols = h.cols();
    let total: u128 = match opts.sizes {
        SizeRange::Collective => subsets_up_to(cols, profile.a),
        SizeRange::Exactly if profile.a <= cols => {
            crate::combin::binomial_u128(cols as u64, profile.a as u64).unwrap_or(u128::MAX)
        }
        SizeRange::Exactly => 0,
    };
    let mut warnings = Vec::new();
    if profile.a > cols {
        warnings.push(format!(
            "a = {} exceeds the {cols} available columns; larger sizes skipped",
            profile.a
        ));
    }
    if total > opts.warn_threshold {
        warnings.push(format!(
            "scanning {total} subsets exceeds the warning threshold {}",
            opts.warn_threshold
        ));
    }
    if profile.b == 0 {
        return TrapReport {
            profile,
            violations: Vec::new(),
            scanned_subsets: 0,
            clean: true,
            truncated: false,
            cap: opts.cap,
            warnings,
        };
    }

    let columns = h.columns();
    let work = blocks(cols, opts.sizes.sizes(profile.a));
    let run = |chunk: &[(usize, usize)]| -> Vec<Vec<Violation>> {
        if opts.parallel {
            chunk
                .par_iter()
                .map(|&(s, top)| block_violations(&columns, s, top, profile.b))
                .collect()
        } else {
            chunk
                .iter()
                .map(|&(s, top)| block_violations(&columns, s, top, profile.b))
                .collect()
        }
    };

    let mut violations = Vec::new();
    let mut scanned: u128 = 0;
    let mut truncated = false;
    match opts.cap {
        None => {
            violations = run(&work).into_iter().flatten().collect();
            scanned = total;
        }
        Some(cap) => {
            for (i, chunk) in work.chunks(CAP_ROUND).enumerate() {
                for v in run(chunk) {
                    violations.extend(v);
                }
                scanned += chunk
                    .iter()
                    .map(|&(s, top)| {
                        crate::combin::binomial_u128(top as u64, s as u64 - 1).unwrap_or(u128::MAX)
                    })
                    .fold(0u128, u128::saturating_add);
                if violations.len() >= cap {
                    truncated = (i + 1) * CAP_ROUND < work.len();
                    break;
                }
            }
        }
    }
    violations.sort_by(|x, y| shortlex(&x.subset, &y.subset));
    if let Some(cap) = opts.cap {
        if violations.len() > cap {
            violations.truncate(cap);
            truncated = true;
        }
    }
    TrapReport {
        profile,
        clean: violations.is_empty(),
        violations,
        scanned_subsets: scanned,
        truncated,
        cap: opts.cap,
        warnings,
    }
}

/// Total shortfall `sum_S max(0, b - odd(S))` over all subsets `1 <= |S| <= a`.
pub fn deficiency_mass(h: &BinaryMatrix, profile: TrapProfile) -> u128 {
    if profile.b == 0 {
        return 0;
    }
    let columns = h.columns();
    blocks(h.cols(), SizeRange::Collective.sizes(profile.a))
        .par_iter()
        .map(|&(s, top)| {
            let mut mass = 0u128;
            walk_block(&columns, s, top, |_, w| {
                mass += profile.b.saturating_sub(w) as u128;
            });
            mass
        })
        .sum()
}

/// First forbidden subset in shortlex order, found by a depth-first walk that
/// extends the running XOR by one column per visited subset.
pub fn first_deficient(h: &BinaryMatrix, profile: TrapProfile) -> Option<Violation> {
    first_deficient_columns(&h.columns(), h.cols(), profile)
}

pub(crate) fn first_deficient_columns(
    columns: &[BitVector],
    cols: usize,
    profile: TrapProfile,
) -> Option<Violation> {
    if profile.b == 0 {
        return None;
    }
    let rows = columns.first().map_or(0, BitVector::len);
    for size in 1..=profile.a.min(cols) {
        let mut stack: Vec<usize> = Vec::with_capacity(size);
        let mut acc: Vec<BitVector> = vec![BitVector::zeros(rows); size + 1];
        if let Some(v) = dfs_first(columns, cols, size, profile.b, 0, &mut stack, &mut acc) {
            return Some(v);
        }
    }
    None
}

fn dfs_first(
    columns: &[BitVector],
    cols: usize,
    size: usize,
    b: usize,
    from: usize,
    stack: &mut Vec<usize>,
    acc: &mut [BitVector],
) -> Option<Violation> {
    let depth = stack.len();
    let remaining = size - depth;
    for c in from..=cols - remaining {
        let mut next = acc[depth].clone();
        next.xor_assign(&columns[c]);
        stack.push(c);
        if remaining == 1 {
            let w = next.weight();
            if w < b {
                return Some(Violation {
                    subset: stack.clone(),
                    odd_count: w,
                });
            }
        } else {
            acc[depth + 1] = next;
            if let Some(v) = dfs_first(columns, cols, size, b, c + 1, stack, acc) {
                return Some(v);
            }
        }
        stack.pop();
    }
    None
}

/// Whether `M` is an orthogonal array of strength `s`: every `s` columns show
/// each of the `2^s` patterns exactly `rows / 2^s` times.
pub fn check_oa(m: &BinaryMatrix, s: usize) -> bool {
    if s == 0 {
        return true;
    }
    if s > m.cols() || s >= usize::BITS as usize {
        return false;
    }
    let patterns = 1usize << s;
    if m.rows() % patterns != 0 {
        return false;
    }
    let each = m.rows() / patterns;
    let mut rd = RevolvingDoor::new(m.cols(), s);
    let mut counts = vec![0usize; patterns];
    loop {
        counts.iter_mut().for_each(|c| *c = 0);
        let subset = rd.current();
        for row in m.row_vectors() {
            let pattern = subset
                .iter()
                .enumerate()
                .fold(0usize, |p, (i, &c)| p | ((row.get(c) as usize) << i));
            counts[pattern] += 1;
        }
        if counts.iter().any(|&c| c != each) {
            return false;
        }
        if rd.advance().is_none() {
            return true;
        }
    }
}

/// All `2^(n-k)` dual codewords of `code` stacked as rows.
pub fn full_dual_matrix(code: &LinearCode, max_dim: u32) -> Result<BinaryMatrix> {
    let rows: Vec<BitVector> = enumerate_rowspace(code.dual_basis(), max_dim)?.collect();
    Ok(BinaryMatrix::from_rows(code.n(), rows))
}
