//! Exhaustive trapping redundancy for tiny codes.
//!
//! For each row count from `n-k` upward, every selection of nonzero dual
//! codewords is tried in lexicographic order until one has full rank and no
//! forbidden trapping set. Zero rows are never selected: deleting one leaves
//! every odd-row count and the rank unchanged.

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::combin::{binomial, RevolvingDoorSubsets};
use crate::error::{Error, Result};
use crate::gf2::{enumerate_rowspace, rank, BinaryMatrix, BitVector, Echelon, LinearCode};
use crate::trapscan::{scan_with, ScanOptions, SizeRange, TrapProfile};

/// Largest dual dimension the oracle accepts.
pub const MAX_DUAL_DIM: usize = 12;

/// Default limit on `C(2^(n-k), rows)` at any one row count.
pub const DEFAULT_ORACLE_BUDGET: u128 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchMode {
    /// Sets of distinct nonzero dual codewords.
    Distinct,
    /// Selections with repetition allowed.
    Multiset,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchSpace {
    pub mode: SearchMode,
    pub sizes: SizeRange,
    pub candidates: usize,
    pub min_rows: usize,
    pub max_rows: usize,
    pub budget: u128,
    /// Selections per row count, up to and including the answer.
    pub selections_per_level: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleResult {
    pub value: usize,
    pub witness: BinaryMatrix,
    pub search_space: SearchSpace,
}

/// Minimum number of rows of a parity-check matrix for `code` with no
/// trapping set forbidden by `profile` at any size `1..=a`.
pub fn exact_collective(
    code: &LinearCode,
    profile: TrapProfile,
    max_rows: usize,
    mode: SearchMode,
    budget: u128,
) -> Result<OracleResult> {
    search(code, profile, SizeRange::Collective, max_rows, mode, budget)
}

/// As [`exact_collective`], but only subsets of size exactly `a` are checked.
pub fn exact_plain(
    code: &LinearCode,
    a: usize,
    b: usize,
    max_rows: usize,
    mode: SearchMode,
    budget: u128,
) -> Result<OracleResult> {
    search(code, TrapProfile::new(a, b)?, SizeRange::Exactly, max_rows, mode, budget)
}

fn selections(candidates: usize, rows: usize, mode: SearchMode) -> BigUint {
    match mode {
        SearchMode::Distinct => binomial(candidates as u64, rows as u64),
        SearchMode::Multiset if candidates == 0 => BigUint::from((rows == 0) as u8),
        SearchMode::Multiset => binomial((candidates + rows - 1) as u64, rows as u64),
    }
}

fn search(
    code: &LinearCode,
    profile: TrapProfile,
    sizes: SizeRange,
    max_rows: usize,
    mode: SearchMode,
    budget: u128,
) -> Result<OracleResult> {
    if profile.a > code.n() {
        return Err(Error::domain(format!(
            "a = {} exceeds code length {}",
            profile.a,
            code.n()
        )));
    }
    let m = code.redundancy();
    if m > MAX_DUAL_DIM {
        return Err(Error::Budget {
            what: "dual dimension",
            needed: m.to_string(),
            limit: MAX_DUAL_DIM.to_string(),
        });
    }
    let n = code.n();
    let mut candidates: Vec<BitVector> = enumerate_rowspace(code.dual_basis(), MAX_DUAL_DIM as u32)?
        .filter(|v| !v.is_zero())
        .collect();
    candidates.sort();

    let range = match sizes {
        SizeRange::Collective => 1..=profile.a,
        SizeRange::Exactly => profile.a..=profile.a,
    };
    let masks: Vec<BitVector> = range
        .flat_map(|s| RevolvingDoorSubsets::new(n, s))
        .map(|subset| {
            let mut mask = BitVector::zeros(n);
            subset.iter().for_each(|&c| mask.set(c, true));
            mask
        })
        .collect();
    let odd: Vec<Vec<u32>> = candidates
        .par_iter()
        .map(|c| {
            (0..masks.len() as u32)
                .filter(|&j| c.dot(&masks[j as usize]))
                .collect()
        })
        .collect();
    let mut last_odd = vec![None; masks.len()];
    for (i, list) in odd.iter().enumerate() {
        for &j in list {
            last_odd[j as usize] = Some(i);
        }
    }

    let mut space = SearchSpace {
        mode,
        sizes,
        candidates: candidates.len(),
        min_rows: m,
        max_rows,
        budget,
        selections_per_level: Vec::new(),
    };
    let ctx = Context {
        odd: &odd,
        last_odd: &last_odd,
        subsets: masks.len(),
        b: profile.b,
        m,
        n,
        candidates: &candidates,
        multiset: mode == SearchMode::Multiset,
    };
    for rows in m..=max_rows {
        // The gate is the same in both modes; the reported count is per mode.
        let gate = binomial(1u64 << m, rows as u64);
        if gate.to_u128().map_or(true, |c| c > budget) {
            return Err(Error::Budget {
                what: "oracle search size C(2^(n-k), rows)",
                needed: gate.to_string(),
                limit: budget.to_string(),
            });
        }
        space.selections_per_level.push(selections(candidates.len(), rows, mode).to_string());
        if let Some(chosen) = ctx.level(rows) {
            let witness = BinaryMatrix::from_rows(
                n,
                chosen.iter().map(|&i| candidates[i].clone()).collect(),
            );
            verify(code, &witness, profile, sizes);
            return Ok(OracleResult {
                value: rows,
                witness,
                search_space: space,
            });
        }
    }
    Err(Error::NotFound { max_rows })
}

/// Independent recheck of a witness with the general-purpose scanner.
fn verify(code: &LinearCode, h: &BinaryMatrix, profile: TrapProfile, sizes: SizeRange) {
    let opts = ScanOptions {
        sizes,
        ..ScanOptions::default()
    };
    assert_eq!(rank(h), code.redundancy(), "oracle witness lost rank");
    assert!(code.is_parity_check(h), "oracle witness is not a parity check");
    assert!(scan_with(h, profile, &opts).clean, "oracle witness has trapping sets");
}

struct Context<'a> {
    odd: &'a [Vec<u32>],
    /// Largest candidate index odd on each subset.
    last_odd: &'a [Option<usize>],
    subsets: usize,
    b: usize,
    m: usize,
    n: usize,
    candidates: &'a [BitVector],
    multiset: bool,
}

impl Context<'_> {
    /// Lexicographically first qualifying selection of `rows` candidates.
    fn level(&self, rows: usize) -> Option<Vec<usize>> {
        if rows == 0 {
            let clean = self.b == 0 || self.subsets == 0;
            return (clean && self.m == 0).then(Vec::new);
        }
        let root = State::new(self, rows);
        let end = root.cover_end(self.candidates.len());
        (0..end).into_par_iter().find_map_first(|first| {
            let mut st = State::new(self, rows);
            st.push(first);
            st.dfs(first).then(|| st.chosen.clone())
        })
    }
}

struct State<'a, 'c> {
    ctx: &'c Context<'a>,
    rows: usize,
    counts: Vec<u32>,
    /// `hist[c]` subsets have odd count `c` (counts at or above `b` pooled).
    hist: Vec<usize>,
    chosen: Vec<usize>,
    echelons: Vec<Echelon>,
}

impl<'a, 'c> State<'a, 'c> {
    fn new(ctx: &'c Context<'a>, rows: usize) -> Self {
        let mut hist = vec![0; ctx.b + 1];
        hist[0] = ctx.subsets;
        State {
            ctx,
            rows,
            counts: vec![0; ctx.subsets],
            hist,
            chosen: Vec::with_capacity(rows),
            echelons: vec![Echelon::new(ctx.n)],
        }
    }

    fn push(&mut self, i: usize) {
        let b = self.ctx.b as u32;
        for &s in &self.ctx.odd[i] {
            let c = self.counts[s as usize];
            if c < b {
                self.hist[c as usize] -= 1;
                self.hist[c as usize + 1] += 1;
            }
            self.counts[s as usize] = c + 1;
        }
        let mut e = self.echelons.last().expect("root echelon").clone();
        e.insert(&self.ctx.candidates[i]);
        self.echelons.push(e);
        self.chosen.push(i);
    }

    fn pop(&mut self) {
        let i = self.chosen.pop().expect("nonempty selection");
        self.echelons.pop();
        let b = self.ctx.b as u32;
        for &s in &self.ctx.odd[i] {
            let c = self.counts[s as usize] - 1;
            self.counts[s as usize] = c;
            if c < b {
                self.hist[c as usize + 1] -= 1;
                self.hist[c as usize] += 1;
            }
        }
    }

    /// Whether the remaining rows could still satisfy every subset and reach
    /// full rank. Each row raises any count or the rank by at most one.
    fn feasible(&self) -> bool {
        let remaining = self.rows - self.chosen.len();
        let rank = self.echelons.last().expect("root echelon").rank();
        if rank + remaining < self.ctx.m {
            return false;
        }
        let need = self.ctx.b.saturating_sub(remaining);
        self.hist[..need].iter().all(|&h| h == 0)
    }

    /// Candidates are taken in index order, so every subset still short of
    /// `b` needs an odd candidate at or after the next index.
    fn cover_end(&self, end: usize) -> usize {
        let b = self.ctx.b as u32;
        if self.hist[..self.ctx.b].iter().all(|&h| h == 0) {
            return end;
        }
        self.counts
            .iter()
            .zip(self.ctx.last_odd)
            .filter(|(&c, _)| c < b)
            .map(|(_, l)| l.map_or(0, |l| l + 1))
            .fold(end, usize::min)
    }

    fn dfs(&mut self, last: usize) -> bool {
        if !self.feasible() {
            return false;
        }
        let remaining = self.rows - self.chosen.len();
        if remaining == 0 {
            return true;
        }
        let total = self.ctx.candidates.len();
        let (start, end) = if self.ctx.multiset {
            (last, total)
        } else {
            (last + 1, (total + 1).saturating_sub(remaining))
        };
        let end = self.cover_end(end);
        for i in start..end {
            self.push(i);
            if self.dfs(i) {
                return true;
            }
            self.pop();
        }
        false
    }
}
