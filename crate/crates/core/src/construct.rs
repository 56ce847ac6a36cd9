//! Randomized parity-check constructions.
//!
//! Every row placed in a matrix here is a uniformly sampled codeword of the
//! dual code, drawn from a ChaCha8 stream seeded by the caller.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::combin::subsets_up_to;
use crate::error::{Error, Result};
use crate::gf2::{rank, sample_codeword, BinaryMatrix, BitVector, Echelon, LinearCode};
use crate::trapscan::{deficiency_mass, first_deficient, TrapProfile};

/// Default limit on `trials * subsets` work for [`estimate_z`].
pub const DEFAULT_ESTIMATE_BUDGET: u128 = 10_000_000_000;

/// Trials per ChaCha stream in [`estimate_z`].
pub const ESTIMATE_CHUNK: usize = 1024;

#[derive(Clone, Debug)]
pub struct ConstructionResult {
    pub matrix: BinaryMatrix,
    pub sampled_rows: usize,
    pub repair_rows_added: usize,
    pub attempts: usize,
    pub seed: u64,
}

impl ConstructionResult {
    pub fn metadata(&self) -> ConstructionMeta {
        ConstructionMeta {
            rows: self.matrix.rows(),
            cols: self.matrix.cols(),
            sampled_rows: self.sampled_rows,
            repair_rows_added: self.repair_rows_added,
            attempts: self.attempts,
            seed: self.seed,
        }
    }
}

/// The serializable part of a [`ConstructionResult`].
#[derive(Clone, Debug, Serialize)]
pub struct ConstructionMeta {
    pub rows: usize,
    pub cols: usize,
    pub sampled_rows: usize,
    pub repair_rows_added: usize,
    pub attempts: usize,
    pub seed: u64,
}

/// `4(n-k) + 4b * sum_{u<=a} C(n,u)`.
pub fn default_max_repair(code: &LinearCode, profile: TrapProfile) -> usize {
    let subsets = subsets_up_to(code.n(), profile.a);
    let cap = 4 * code.redundancy() as u128
        + (4 * profile.b as u128).saturating_mul(subsets);
    usize::try_from(cap).unwrap_or(usize::MAX)
}

fn check_inputs(code: &LinearCode, profile: TrapProfile) -> Result<()> {
    profile.check_against(code)?;
    if code.redundancy() == 0 {
        return Err(Error::domain(
            "the dual code is trivial, so no parity-check rows can be sampled",
        ));
    }
    Ok(())
}

fn subset_mask(n: usize, subset: &[usize]) -> BitVector {
    let mut mask = BitVector::zeros(n);
    for &c in subset {
        mask.set(c, true);
    }
    mask
}

/// Samples `t` dual codewords, then appends rows until the matrix has full
/// rank `n-k` and satisfies `profile`.
///
/// Rank completion draws codewords until one leaves the current row space.
/// Parity repair targets the shortlex-first deficient subset and draws
/// codewords until one has odd weight on it. Both conditions are rechecked
/// after every append.
pub fn sample_and_repair(
    code: &LinearCode,
    profile: TrapProfile,
    t: usize,
    seed: u64,
    max_repair: Option<usize>,
) -> Result<ConstructionResult> {
    check_inputs(code, profile)?;
    if t == 0 {
        return Err(Error::domain("t must be at least 1"));
    }
    let cap = max_repair.unwrap_or_else(|| default_max_repair(code, profile));
    let basis = code.dual_basis();
    let n = code.n();
    let m = code.redundancy();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = BinaryMatrix::empty(n);
    let mut echelon = Echelon::new(n);
    for _ in 0..t {
        let row = sample_codeword(basis, &mut rng);
        echelon.insert(&row);
        h.push_row(row);
    }

    let mut added = 0;
    loop {
        let row = if echelon.rank() < m {
            loop {
                let row = sample_codeword(basis, &mut rng);
                if !echelon.contains(&row) {
                    break row;
                }
            }
        } else if let Some(v) = first_deficient(&h, profile) {
            let mask = subset_mask(n, &v.subset);
            // Some dual codeword is odd on S iff some basis row is.
            if !basis.row_vectors().iter().any(|r| r.dot(&mask)) {
                return Err(Error::Unrepairable { subset: v.subset });
            }
            loop {
                let row = sample_codeword(basis, &mut rng);
                if row.dot(&mask) {
                    break row;
                }
            }
        } else {
            break;
        };
        if added == cap {
            return Err(Error::CapExceeded {
                cap,
                partial: Box::new(h),
            });
        }
        echelon.insert(&row);
        h.push_row(row);
        added += 1;
    }
    Ok(ConstructionResult {
        matrix: h,
        sampled_rows: t,
        repair_rows_added: added,
        attempts: 1,
        seed,
    })
}

/// Draws exactly `n-k` dual codewords per attempt and returns the first draw
/// that has full rank and satisfies `profile`.
pub fn las_vegas_minimal(
    code: &LinearCode,
    profile: TrapProfile,
    seed: u64,
    max_attempts: usize,
) -> Result<ConstructionResult> {
    check_inputs(code, profile)?;
    let basis = code.dual_basis();
    let m = code.redundancy();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 1..=max_attempts {
        let rows = (0..m).map(|_| sample_codeword(basis, &mut rng)).collect();
        let h = BinaryMatrix::from_rows(code.n(), rows);
        if rank(&h) == m && first_deficient(&h, profile).is_none() {
            return Ok(ConstructionResult {
                matrix: h,
                sampled_rows: m,
                repair_rows_added: 0,
                attempts: attempt,
                seed,
            });
        }
    }
    Err(Error::AttemptsExhausted(max_attempts))
}

/// Sample mean and standard error of `Z_t` over independent trials.
#[derive(Clone, Debug, Serialize)]
pub struct ZEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub trials: usize,
    pub seed: u64,
    /// Trials per stream; chunk `i` uses stream `i` of the seeded generator.
    pub chunk_size: usize,
}

/// `Z = (n-k - rank H) + sum_S max(0, b - odd(S))` for one matrix.
pub fn z_value(code: &LinearCode, h: &BinaryMatrix, profile: TrapProfile) -> u128 {
    (code.redundancy() - rank(h)) as u128 + deficiency_mass(h, profile)
}

/// Monte Carlo estimate of `E[Z_t]` for `t` uniform dual samples (`t = 0`
/// allowed). Trials run in parallel; sums are exact integers, so the result
/// does not depend on scheduling.
pub fn estimate_z(
    code: &LinearCode,
    profile: TrapProfile,
    t: usize,
    trials: usize,
    seed: u64,
    budget: u128,
) -> Result<ZEstimate> {
    profile.check_against(code)?;
    if trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    let per_trial = subsets_up_to(code.n(), profile.a).max(1);
    let work = per_trial.saturating_mul(trials as u128);
    if work > budget {
        return Err(Error::Budget {
            what: "Monte Carlo subset scans",
            needed: work.to_string(),
            limit: budget.to_string(),
        });
    }
    let basis = code.dual_basis();
    let chunks = trials.div_ceil(ESTIMATE_CHUNK);
    let (sum, sum_sq) = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let count = ESTIMATE_CHUNK.min(trials - chunk * ESTIMATE_CHUNK);
            let mut acc = (0u128, 0u128);
            for _ in 0..count {
                let rows = (0..t).map(|_| sample_codeword(basis, &mut rng)).collect();
                let z = z_value(code, &BinaryMatrix::from_rows(code.n(), rows), profile);
                acc.0 += z;
                acc.1 += z * z;
            }
            acc
        })
        .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1));
    let n = trials as f64;
    let mean = sum as f64 / n;
    let stderr = if trials > 1 {
        let var = (sum_sq as f64 - (sum as f64) * mean) / (n - 1.0);
        (var.max(0.0) / n).sqrt()
    } else {
        0.0
    };
    Ok(ZEstimate {
        mean,
        stderr,
        trials,
        seed,
        chunk_size: ESTIMATE_CHUNK,
    })
}
