//! Baseline bound obtained through the Lovász Local Lemma: `m + n - k - 1`
//! where `m` is the least positive integer with
//! `2^-m (C(n,a) - C(n-a,a)) sum_{j<b} C(m,j) <= 1/e`.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::{ArithMode, BoundFamily, BoundReport};
use crate::combin::binomial;
use crate::error::{Error, Result};
use crate::gf2::Distance;

/// Rational enclosure `lo <= e <= hi`, both with denominator `K!`.
struct EulerEnclosure {
    lo_num: BigUint,
    hi_num: BigUint,
    den: BigUint,
}

/// Partial sum of `1/j!` up to `j = terms`; the remainder is below
/// `1 / (terms! * terms)`.
fn euler_enclosure(terms: u64) -> EulerEnclosure {
    assert!(terms >= 1);
    let mut den = BigUint::one();
    for j in 1..=terms {
        den *= j;
    }
    // sum_{j<=K} K!/j!
    let mut lo_num = BigUint::zero();
    let mut falling = BigUint::one();
    for j in (0..=terms).rev() {
        lo_num += &falling;
        falling *= j.max(1);
    }
    // hi = lo + 1/(K! K) <= lo + 1/K!
    let hi_num = &lo_num + 1u32;
    EulerEnclosure {
        lo_num,
        hi_num,
        den,
    }
}

/// Terms giving an enclosure width of at most `2^-64`.
const INITIAL_TERMS: u64 = 21;
const MAX_M: u64 = 10_000_000;

/// Decides `x / 2^m <= 1/e`, i.e. `e x <= 2^m`, refining the enclosure of `e`
/// until it separates. Since `e` is irrational the loop ends for `x > 0`.
pub(crate) fn below_inverse_e(x: &BigUint, m: u64) -> bool {
    if x.is_zero() {
        return true;
    }
    let pow = BigUint::one() << m;
    let mut terms = INITIAL_TERMS;
    loop {
        let enc = euler_enclosure(terms);
        let rhs = &pow * &enc.den;
        if x * &enc.hi_num <= rhs {
            return true;
        }
        if x * &enc.lo_num > rhs {
            return false;
        }
        terms *= 2;
    }
}

/// Least positive `m` satisfying the local-lemma condition, plus the bound.
pub fn lll_bound(n: u64, k: u64, a: u64, b: u64, distance: Distance) -> Result<BoundReport> {
    if k > n {
        return Err(Error::domain(format!("k = {k} exceeds n = {n}")));
    }
    if a == 0 || a > n {
        return Err(Error::domain(format!("a = {a} must satisfy 1 <= a <= n")));
    }
    if b == 0 {
        return Err(Error::domain("the local-lemma bound needs b >= 1"));
    }
    let mut assumptions = Vec::new();
    match distance {
        Distance::Exact(d) | Distance::AtLeast(d) => {
            let limit = (d.saturating_sub(1) / 2) as u64;
            if a > limit {
                assumptions.push(format!(
                    "a = {a} exceeds floor((d-1)/2) = {limit}; the local-lemma argument does not cover it"
                ));
            } else if matches!(distance, Distance::AtLeast(_)) {
                assumptions.push(format!("d >= {d} asserted by user, not verified"));
            }
        }
        Distance::Unknown => {
            assumptions.push("a <= floor((d-1)/2) assumed; minimum distance unverified".into())
        }
    }
    let bad = binomial(n, a) - binomial(n - a, a).min(binomial(n, a));
    let mut m = 1u64;
    loop {
        let tail: BigUint = (0..b).map(|j| binomial(m, j)).sum();
        if below_inverse_e(&(&bad * tail), m) {
            break;
        }
        m += 1;
        if m > MAX_M {
            return Err(Error::Budget {
                what: "local-lemma m search",
                needed: format!("m > {MAX_M}"),
                limit: MAX_M.to_string(),
            });
        }
    }
    Ok(BoundReport {
        family: BoundFamily::Lll,
        n,
        k,
        a,
        b,
        value: m + (n - k) - 1,
        optimizer_t: None,
        lll_m: Some(m),
        mode: ArithMode::Exact,
        expectation_breakdown: None,
        assumptions,
    })
}
