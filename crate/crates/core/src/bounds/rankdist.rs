//! Rank distribution of uniformly random row samples from an `m`-dimensional
//! binary space, exactly and as certified upper bounds.

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::updown;
use crate::error::{Error, Result};

/// Gaussian binomial `[x, y]_2`: the number of `y`-dimensional subspaces of
/// an `x`-dimensional binary space.
pub fn gaussian_binomial(x: u64, y: u64) -> Result<BigUint> {
    if y > x {
        return Err(Error::domain(format!(
            "gaussian binomial [{x} {y}] needs x >= y"
        )));
    }
    let mut acc = BigUint::one();
    for i in 0..y {
        acc *= (BigUint::one() << (x - i)) - 1u32;
        acc /= (BigUint::one() << (i + 1)) - 1u32;
    }
    Ok(acc)
}

/// Numerators `N_r` with `P(rank = r) = N_r / 2^(t m)` for `r = 0..=min(t, m)`,
/// produced lazily.
///
/// `N_r = [m, r]_2 * prod_{i < r} (2^t - 2^i)`, stepped by
/// `N_{r+1} = N_r (2^(m-r) - 1)(2^t - 2^r) / (2^(r+1) - 1)`; the division is
/// exact because it already is for the Gaussian binomial factor.
fn rank_numerators(m: u64, t: u64) -> impl Iterator<Item = BigUint> {
    let top = m.min(t);
    let two_t = BigUint::one() << t;
    let mut next = Some(BigUint::one());
    (0..=top).map(move |r| {
        let cur = next.take().expect("numerator");
        if r < top {
            let mut n = &cur * ((BigUint::one() << (m - r)) - 1u32);
            n *= &two_t - (BigUint::one() << r);
            n /= (BigUint::one() << (r + 1)) - 1u32;
            next = Some(n);
        }
        cur
    })
}

/// Exact law of the rank of a `t x n` matrix whose rows are drawn
/// independently and uniformly from an `m`-dimensional space.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankDistribution {
    pub m: u64,
    pub t: u64,
    /// `probabilities[r] = P(rank = r)`.
    #[serde(serialize_with = "ser_ratios")]
    pub probabilities: Vec<BigRational>,
}

fn ser_ratios<S: serde::Serializer>(v: &[BigRational], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for r in v {
        seq.serialize_element(&r.to_string())?;
    }
    seq.end()
}

impl RankDistribution {
    pub fn probability(&self, r: usize) -> BigRational {
        self.probabilities
            .get(r)
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }
}

pub fn rank_distribution(m: u64, t: u64) -> RankDistribution {
    let probabilities = rank_numerators(m, t)
        .map(|n| super::dyadic(n, t * m))
        .collect();
    RankDistribution { m, t, probabilities }
}

/// Exact `E[m - rank(H_t)]`.
pub fn expected_deficiency_exact(m: u64, t: u64) -> BigRational {
    let num: BigUint = rank_numerators(m, t)
        .enumerate()
        .map(|(r, n)| n * (m - r as u64))
        .sum();
    super::dyadic(num, t * m)
}

/// Coranks summed explicitly by [`expected_deficiency_upper`]; the rest is
/// covered by a tail majorant.
pub const CORANK_CUTOFF: u64 = 64;

/// Certified upper bound on `E[m - rank(H_t)]`.
///
/// With `S = min(t, m)` and `L = max(t, m)`, the rank law is symmetric in
/// `(t, m)` and the shortfall `D = S - rank` satisfies
///
/// ```text
/// P(D = c) = [S, c]_2 * 2^(-L c) * prod_{i < S - c} (1 - 2^(i - L)),
/// ```
///
/// so `E[m - rank] = (m - S) + E[D]`. Terms `c <= CORANK_CUTOFF` are summed
/// with upward rounding. Beyond the cutoff `P(D = c) <= 4 * 2^(-c^2)`, since
/// `[S, c]_2 <= 2^(c S - c^2) / prod_{i >= 1} (1 - 2^-i)` and that product
/// exceeds 1/4; the tail `sum_{c > 64} 4 c 2^(-c^2)` is far below the
/// smallest subnormal, which is added in its place.
pub fn expected_deficiency_upper(m: u64, t: u64) -> f64 {
    let short = m.min(t);
    let long = m.max(t) as i64;
    let base = (m - short) as f64;
    if short == 0 {
        return base;
    }
    // keep[j] bounds prod_{i < j} (1 - 2^(i - L)) from above.
    let mut keep = Vec::with_capacity(short as usize + 1);
    keep.push(1.0f64);
    let mut acc = 1.0f64;
    for i in 0..short as i64 {
        let e = i - long;
        let factor = if e >= -52 { 1.0 - updown::pow2(e) } else { 1.0 };
        acc = updown::mul(acc, factor).min(1.0);
        keep.push(acc);
    }
    let mut sum = 0.0f64;
    let mut coef = 1.0f64;
    let cutoff = short.min(CORANK_CUTOFF);
    for c in 1..=cutoff {
        let i = (c - 1) as i64;
        // (2^(S-i) - 1) 2^-L / (2^(i+1) - 1)
        //   = 2^(S-i-L) (1 - 2^-(S-i)) / (2^(i+1) - 1)
        let e = short as i64 - i;
        let frac = if e <= 52 { 1.0 - updown::pow2(-e) } else { 1.0 };
        let factor = updown::div(
            updown::mul(updown::pow2(e - long), frac),
            updown::mersenne_lower(i + 1),
        );
        coef = updown::mul(coef, factor);
        let term = updown::mul(updown::mul(c as f64, coef), keep[(short - c) as usize]);
        sum = updown::add(sum, term);
    }
    if short > CORANK_CUTOFF {
        sum = updown::add(sum, updown::TINY);
    }
    updown::add(base, sum)
}
