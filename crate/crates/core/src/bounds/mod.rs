//! Upper bounds on collective trapping redundancy.
//!
//! Rows drawn uniformly from the dual are odd on any fixed set of at most
//! `d - 1` columns with probability 1/2, so the expected total repair work
//! after `t` samples is
//!
//! ```text
//! E[Z_t] = 2^-t sum_{u=1..a} C(n,u) sum_{i=1..b} i C(t, b-i)  +  E[n - k - rank(H_t)]
//! ```
//!
//! and `min_t (t + floor(E[Z_t]))` bounds the redundancy from above. Both
//! terms are available as exact rationals or as certified `f64` upper bounds.

mod lll;
mod rankdist;
pub mod updown;

pub use lll::lll_bound;
pub use rankdist::{
    expected_deficiency_exact, expected_deficiency_upper, gaussian_binomial, rank_distribution,
    RankDistribution, CORANK_CUTOFF,
};

use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::combin::binomial;
use crate::error::{Error, Result};
use crate::gf2::Distance;

/// Arithmetic used for expectations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArithMode {
    /// Arbitrary-precision rationals; exact.
    #[serde(rename = "exact-rational")]
    Exact,
    /// Upward-rounded floats; every expectation is an upper bound.
    #[serde(rename = "certified-float")]
    Certified,
    /// Exact while `t (n - k)` stays under the configured threshold.
    Auto,
}

impl fmt::Display for ArithMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ArithMode::Exact => "exact-rational",
            ArithMode::Certified => "certified-float",
            ArithMode::Auto => "auto",
        })
    }
}

/// Default ceiling on `t (n - k)`, the bit size of `2^(t (n-k))`, for exact work.
pub const DEFAULT_EXACT_BITS: u64 = 1 << 16;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct BoundConfig {
    pub mode: ArithMode,
    pub exact_threshold_bits: u64,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            mode: ArithMode::Auto,
            exact_threshold_bits: DEFAULT_EXACT_BITS,
        }
    }
}

impl BoundConfig {
    pub fn with_mode(mode: ArithMode) -> Self {
        BoundConfig {
            mode,
            ..Default::default()
        }
    }

    /// Resolves `Auto` for a computation of the given bit size.
    fn pick(&self, bits: u64) -> Result<ArithMode> {
        match self.mode {
            ArithMode::Exact if bits > self.exact_threshold_bits => Err(Error::Budget {
                what: "exact-rational evaluation",
                needed: format!("{bits} bits"),
                limit: format!("{} bits", self.exact_threshold_bits),
            }),
            ArithMode::Auto if bits > self.exact_threshold_bits => Ok(ArithMode::Certified),
            ArithMode::Auto => Ok(ArithMode::Exact),
            m => Ok(m),
        }
    }
}

/// `num / 2^exp` in lowest terms. Skips the generic gcd, which is very slow
/// at the sizes met by the exact rank law.
pub fn dyadic(num: BigUint, exp: u64) -> BigRational {
    let shift = num.trailing_zeros().unwrap_or(exp).min(exp);
    BigRational::new_raw(BigInt::from(num >> shift), BigInt::one() << (exp - shift))
}

/// `2^e` if the positive `d` is a power of two.
fn two_power(d: &BigInt) -> Option<u64> {
    let tz = d.trailing_zeros()?;
    (d.bits() == tz + 1).then_some(tz)
}

fn rational_add(x: &BigRational, y: &BigRational) -> BigRational {
    match (two_power(x.denom()), two_power(y.denom())) {
        (Some(e), Some(f)) if x.numer().sign() != Sign::Minus && y.numer().sign() != Sign::Minus => {
            let (hi, lo, diff) = if e >= f { (x, y, e - f) } else { (y, x, f - e) };
            let num = hi.numer().magnitude() + (lo.numer().magnitude() << diff);
            dyadic(num, e.max(f))
        }
        _ => x + y,
    }
}

/// An expectation: exact, or a certified upper bound.
#[derive(Clone, Debug, PartialEq)]
pub enum Quantity {
    Exact(BigRational),
    Upper(f64),
}

impl Quantity {
    pub fn zero() -> Self {
        Quantity::Exact(BigRational::zero())
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Quantity::Exact(q) => q.to_f64().unwrap_or(f64::INFINITY),
            Quantity::Upper(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Quantity::Exact(_))
    }

    /// Sum; exact only when both sides are.
    pub fn add(&self, other: &Quantity) -> Quantity {
        match (self, other) {
            (Quantity::Exact(x), Quantity::Exact(y)) => Quantity::Exact(rational_add(x, y)),
            _ => Quantity::Upper(updown::add(self.upper_f64(), other.upper_f64())),
        }
    }

    /// An `f64` that is `>=` the value.
    pub fn upper_f64(&self) -> f64 {
        match self {
            Quantity::Exact(q) => {
                if q.is_zero() {
                    return 0.0;
                }
                let num = q.numer().to_biguint().expect("nonnegative");
                let den = q.denom().to_biguint().expect("positive");
                // num/den <= ceil(num * 2^s / den) * 2^-s
                let s = 64 + den.bits() as i64 - num.bits() as i64;
                let s = s.max(0);
                let scaled = Integer::div_ceil(&(num << s as u64), &den);
                updown::big_scaled(&scaled, s)
            }
            Quantity::Upper(x) => *x,
        }
    }

    /// `floor` of the value (or of the upper bound), `None` if unbounded.
    pub fn floor(&self) -> Option<u64> {
        match self {
            Quantity::Exact(q) => q.floor().to_integer().to_u64(),
            Quantity::Upper(x) if x.is_finite() && *x < 1.8e19 => Some(x.floor() as u64),
            Quantity::Upper(_) => None,
        }
    }

    /// Whether the value is certainly `< 1`.
    pub fn below_one(&self) -> bool {
        match self {
            Quantity::Exact(q) => *q < BigRational::one(),
            Quantity::Upper(x) => *x < 1.0,
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Exact(q) => write!(f, "{q}"),
            Quantity::Upper(x) => write!(f, "<= {x:e}"),
        }
    }
}

impl Serialize for Quantity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(2))?;
        match self {
            Quantity::Exact(q) => {
                map.serialize_entry("exact", &q.to_string())?;
                map.serialize_entry("approx", &self.to_f64())?;
            }
            Quantity::Upper(x) => {
                map.serialize_entry("upper_bound", x)?;
                map.serialize_entry("approx", x)?;
            }
        }
        map.end()
    }
}

/// `sum_{u=1..a} C(n, u)`.
fn subset_count(n: u64, a: u64) -> BigUint {
    (1..=a).map(|u| binomial(n, u)).sum()
}

/// `sum_{i=1..b} i C(t, b - i)`; the `i = 0` term vanishes.
fn shortfall_weight(b: u64, t: u64) -> BigUint {
    (1..=b).map(|i| binomial(t, b - i) * i).sum()
}

/// `E[sum_M X_M]` after `t` samples: exact, or a certified upper bound.
pub fn expected_repair_mass(n: u64, a: u64, b: u64, t: u64, mode: ArithMode) -> Result<Quantity> {
    if a == 0 || a > n {
        return Err(Error::domain(format!("a = {a} must satisfy 1 <= a <= n = {n}")));
    }
    let num = subset_count(n, a) * shortfall_weight(b, t);
    Ok(match mode {
        ArithMode::Certified => Quantity::Upper(updown::big_scaled(&num, t as i64)),
        _ => Quantity::Exact(dyadic(num, t)),
    })
}

/// `E[(n - k) - rank(H_t)]` for a dual of dimension `m`.
pub fn expected_rank_deficiency(m: u64, t: u64, mode: ArithMode) -> Quantity {
    match mode {
        ArithMode::Certified => Quantity::Upper(expected_deficiency_upper(m, t)),
        _ => Quantity::Exact(expected_deficiency_exact(m, t)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundFamily {
    Theorem1,
    Lll,
}

#[derive(Clone, Debug, Serialize)]
pub struct ExpectationBreakdown {
    pub repair_mass: Quantity,
    pub rank_deficiency: Quantity,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub family: BoundFamily,
    pub n: u64,
    pub k: u64,
    pub a: u64,
    pub b: u64,
    pub value: u64,
    /// Number of sampled rows attaining the minimum.
    pub optimizer_t: Option<u64>,
    /// Sample count `m` solving the local-lemma condition.
    pub lll_m: Option<u64>,
    pub mode: ArithMode,
    pub expectation_breakdown: Option<ExpectationBreakdown>,
    pub assumptions: Vec<String>,
}

fn check_params(n: u64, k: u64, a: u64, distance: Distance) -> Result<Vec<String>> {
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    if k > n {
        return Err(Error::domain(format!("k = {k} exceeds n = {n}")));
    }
    if a == 0 || a > n {
        return Err(Error::domain(format!("a = {a} must satisfy 1 <= a <= n = {n}")));
    }
    let mut assumptions = Vec::new();
    match distance {
        Distance::Exact(d) => {
            if a + 1 > d as u64 {
                return Err(Error::domain(format!(
                    "a = {a} must be at most d - 1 = {}",
                    d.saturating_sub(1)
                )));
            }
        }
        Distance::AtLeast(d) => {
            if a + 1 > d as u64 {
                assumptions.push(format!(
                    "a = {a} <= d - 1 assumed; only d >= {d} was asserted"
                ));
            } else {
                assumptions.push(format!("a <= d - 1 from d >= {d} asserted by user"));
            }
        }
        Distance::Unknown => {
            assumptions.push("a <= d - 1 assumed; minimum distance unverified".into())
        }
    }
    Ok(assumptions)
}

struct Candidate {
    objective: Option<u64>,
    repair: Quantity,
    deficiency: Quantity,
    mode: ArithMode,
}

fn evaluate(n: u64, m: u64, a: u64, b: u64, t: u64, cfg: &BoundConfig) -> Result<Candidate> {
    let mode = cfg.pick(t.saturating_mul(m).max(t))?;
    let repair = expected_repair_mass(n, a, b, t, mode)?;
    let deficiency = expected_rank_deficiency(m, t, mode);
    let total = repair.add(&deficiency);
    Ok(Candidate {
        objective: total.floor().and_then(|f| f.checked_add(t)),
        repair,
        deficiency,
        mode,
    })
}

/// `min_{t >= 1} t + floor(E[Z_t])`.
///
/// `t = max(n - k, 1)` is evaluated first. Any other `t` is skipped when the
/// exact lower bound `t + (n-k-t)^+ + floor(repair mass)` already reaches the
/// best value (rank never exceeds `t`), and the scan stops at `t >= best`
/// because the objective is at least `t`. Ties go to the smallest `t`.
pub fn theorem1_bound(
    n: u64,
    k: u64,
    a: u64,
    b: u64,
    distance: Distance,
    cfg: &BoundConfig,
) -> Result<BoundReport> {
    let assumptions = check_params(n, k, a, distance)?;
    let m = n - k;
    let first = m.max(1);
    let mut best_t = first;
    let mut best = evaluate(n, m, a, b, first, cfg)?;
    let mut all_exact = best.mode == ArithMode::Exact;
    let weight = subset_count(n, a);
    let mut t = 1u64;
    loop {
        let bound = best.objective.unwrap_or(u64::MAX);
        if t >= bound {
            break;
        }
        if t != first {
            let floor_repair = (&weight * shortfall_weight(b, t)) >> t;
            let lower = floor_repair
                .to_u64()
                .and_then(|r| r.checked_add(t + m.saturating_sub(t)))
                .unwrap_or(u64::MAX);
            if lower < bound {
                let cand = evaluate(n, m, a, b, t, cfg)?;
                all_exact &= cand.mode == ArithMode::Exact;
                let better = match (cand.objective, best.objective) {
                    (Some(x), Some(y)) => x < y || (x == y && t < best_t),
                    (Some(_), None) => true,
                    _ => false,
                };
                if better {
                    best = cand;
                    best_t = t;
                }
            }
        }
        t += 1;
    }
    let value = best.objective.ok_or_else(|| Error::Budget {
        what: "theorem1 search",
        needed: "a finite objective".into(),
        limit: "u64".into(),
    })?;
    Ok(BoundReport {
        family: BoundFamily::Theorem1,
        n,
        k,
        a,
        b,
        value,
        optimizer_t: Some(best_t),
        lll_m: None,
        mode: if all_exact {
            ArithMode::Exact
        } else {
            ArithMode::Certified
        },
        expectation_breakdown: Some(ExpectationBreakdown {
            repair_mass: best.repair,
            rank_deficiency: best.deficiency,
        }),
        assumptions,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct Corollary2 {
    pub holds: bool,
    pub lhs: Quantity,
    pub mode: ArithMode,
    pub assumptions: Vec<String>,
}

/// Whether sampling exactly `n - k` rows already gives `E[Z_{n-k}] < 1`,
/// which pins the collective redundancy to `n - k`.
pub fn corollary2_check(
    n: u64,
    k: u64,
    a: u64,
    b: u64,
    distance: Distance,
    cfg: &BoundConfig,
) -> Result<Corollary2> {
    let assumptions = check_params(n, k, a, distance)?;
    let m = n - k;
    let mode = cfg.pick(m * m)?;
    let lhs = expected_repair_mass(n, a, b, m, mode)?.add(&expected_rank_deficiency(m, m, mode));
    Ok(Corollary2 {
        holds: lhs.below_one(),
        lhs,
        mode,
        assumptions,
    })
}

/// Gilbert–Varshamov: an `[n, k, d]` code exists if `2^(n-k) >= sum_{i<d} C(n, i)`.
pub fn gv_check(n: u64, k: u64, d: u64) -> Result<bool> {
    if d == 0 || d > n {
        return Err(Error::domain(format!("d = {d} must satisfy 1 <= d <= n = {n}")));
    }
    if k > n {
        return Err(Error::domain(format!("k = {k} exceeds n = {n}")));
    }
    let ball: BigUint = (0..d).map(|i| binomial(n, i)).sum();
    Ok((BigUint::one() << (n - k)) >= ball)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Quantity {
        Quantity::Exact(BigRational::new(n.into(), d.into()))
    }


    #[test]
    fn dyadic_matches_generic_reduction() {
        for num in [0u64, 1, 2, 3, 12, 40, 1 << 20, 96] {
            for exp in [0u64, 1, 3, 7, 70] {
                let want = BigRational::new(num.into(), BigInt::one() << exp);
                assert_eq!(dyadic(num.into(), exp), want, "{num}/2^{exp}");
            }
        }
    }

    #[test]
    fn dyadic_sum_matches_generic_sum() {
        let parts = [(3u64, 2u64), (5, 0), (0, 4), (12, 6), (7, 90)];
        for &(a, e) in &parts {
            for &(c, f) in &parts {
                let x = dyadic(a.into(), e);
                let y = dyadic(c.into(), f);
                assert_eq!(rational_add(&x, &y), &x + &y);
            }
        }
        let third = BigRational::new(1.into(), 3.into());
        assert_eq!(rational_add(&third, &dyadic(1u32.into(), 1)), BigRational::new(5.into(), 6.into()));
    }
    /// Exact objective by direct formula, every t, for cross-checking the
    /// pruned search.
    fn brute_theorem1(n: u64, k: u64, a: u64, b: u64, t_max: u64) -> (u64, u64) {
        let m = n - k;
        (1..=t_max)
            .map(|t| {
                let r = expected_repair_mass(n, a, b, t, ArithMode::Exact).unwrap();
                let y = expected_rank_deficiency(m, t, ArithMode::Exact);
                (t + r.add(&y).floor().unwrap(), t)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn repair_mass_examples() {
        assert_eq!(
            expected_repair_mass(3, 2, 1, 2, ArithMode::Exact).unwrap(),
            q(3, 2)
        );
        assert_eq!(
            expected_repair_mass(7, 1, 2, 3, ArithMode::Exact).unwrap(),
            q(35, 8)
        );
        for t in 0..6 {
            assert_eq!(
                expected_repair_mass(9, 3, 0, t, ArithMode::Exact).unwrap(),
                Quantity::zero()
            );
        }
        assert!(expected_repair_mass(3, 0, 1, 1, ArithMode::Exact).is_err());
        assert!(expected_repair_mass(3, 4, 1, 1, ArithMode::Exact).is_err());
        let up = expected_repair_mass(7, 1, 2, 3, ArithMode::Certified).unwrap();
        assert!(up.to_f64() >= 35.0 / 8.0);
    }

    #[test]
    fn repair_mass_matches_sample_enumeration() {
        // [3,1] repetition dual = {000, 110, 011, 101}; every ordered pair of
        // rows, subsets of size <= 2, shortfall below b = 1.
        let dual = ["000", "110", "011", "101"];
        let subsets: [&[usize]; 6] = [&[0], &[1], &[2], &[0, 1], &[0, 2], &[1, 2]];
        let mut total = 0u32;
        for r1 in dual {
            for r2 in dual {
                for s in subsets {
                    let odd = [r1, r2]
                        .iter()
                        .filter(|r| s.iter().filter(|&&c| r.as_bytes()[c] == b'1').count() % 2 == 1)
                        .count();
                    total += 1u32.saturating_sub(odd as u32);
                }
            }
        }
        assert_eq!(q(total as i64, 16), q(3, 2));
    }

    #[test]
    fn deficiency_examples() {
        assert_eq!(expected_rank_deficiency(2, 2, ArithMode::Exact), q(11, 16));
        assert_eq!(expected_rank_deficiency(5, 0, ArithMode::Exact), q(5, 1));
        assert_eq!(expected_rank_deficiency(1, 1, ArithMode::Exact), q(1, 2));
    }

    #[test]
    fn theorem1_small_example() {
        let r = theorem1_bound(3, 1, 2, 1, Distance::Exact(3), &BoundConfig::with_mode(ArithMode::Exact))
            .unwrap();
        assert_eq!(r.value, 4);
        assert!((2..=4).contains(&r.optimizer_t.unwrap()));
        assert_eq!(r.mode, ArithMode::Exact);
        assert!(r.assumptions.is_empty());
        assert_eq!(brute_theorem1(3, 1, 2, 1, 30).0, 4);
        let obj: Vec<f64> = (2..=4)
            .map(|t| {
                expected_repair_mass(3, 2, 1, t, ArithMode::Exact)
                    .unwrap()
                    .add(&expected_rank_deficiency(2, t, ArithMode::Exact))
                    .to_f64()
            })
            .collect();
        assert_eq!(obj[0], 2.1875);
        assert!((obj[1] - 1.109375).abs() < 1e-12);
        assert!((obj[2] - 0.55859375).abs() < 1e-12);
    }

    #[test]
    fn theorem1_rejects_a_at_least_d() {
        assert!(theorem1_bound(7, 4, 3, 1, Distance::Exact(3), &BoundConfig::default()).is_err());
        let r = theorem1_bound(7, 4, 3, 1, Distance::Unknown, &BoundConfig::default()).unwrap();
        assert_eq!(r.assumptions.len(), 1);
    }

    #[test]
    fn pruned_search_matches_brute_force() {
        for n in 2..=10u64 {
            for k in 0..n {
                for a in 1..=n.min(3) {
                    for b in 0..=3 {
                        let r = theorem1_bound(n, k, a, b, Distance::Unknown, &BoundConfig::with_mode(ArithMode::Exact))
                            .unwrap();
                        let (v, _) = brute_theorem1(n, k, a, b, r.value + 5);
                        assert_eq!(r.value, v, "n={n} k={k} a={a} b={b}");
                        assert!(r.value >= n - k);
                    }
                }
            }
        }
    }

    #[test]
    fn b_zero_gives_redundancy() {
        for m in 1..=64u64 {
            assert!(expected_deficiency_exact(m, m) < BigRational::one(), "m={m}");
        }
        for (n, k) in [(7, 4), (23, 12), (40, 10), (2640, 1320)] {
            for mode in [ArithMode::Certified, ArithMode::Auto] {
                let r = theorem1_bound(n, k, 2, 0, Distance::Unknown, &BoundConfig::with_mode(mode)).unwrap();
                assert_eq!(r.value, n - k);
            }
        }
    }

    #[test]
    fn corollary2_examples() {
        let c = corollary2_check(3, 1, 2, 1, Distance::Exact(3), &BoundConfig::with_mode(ArithMode::Exact))
            .unwrap();
        assert!(!c.holds);
        assert_eq!(c.lhs, q(35, 16));
        let c = corollary2_check(7, 4, 2, 0, Distance::Exact(3), &BoundConfig::default()).unwrap();
        assert!(c.holds);
        let c = corollary2_check(2640, 1320, 14, 5, Distance::Unknown, &BoundConfig::default()).unwrap();
        assert!(c.holds);
        assert_eq!(c.mode, ArithMode::Certified);
        assert!(c.lhs.to_f64() < 1.0);
    }

    #[test]
    fn gv_examples() {
        assert!(gv_check(7, 1, 3).unwrap());
        assert!(!gv_check(7, 4, 3).unwrap());
        assert!(gv_check(9, 9, 1).unwrap());
        assert!(gv_check(7, 4, 0).is_err());
        assert!(gv_check(7, 4, 8).is_err());
    }

    #[test]
    fn quantity_upper_bounds_exact() {
        let x = q(1, 3);
        assert!(x.upper_f64() >= 1.0 / 3.0);
        assert!(x.upper_f64() - 1.0 / 3.0 < 1e-15);
        assert_eq!(q(7, 2).floor(), Some(3));
        assert_eq!(Quantity::Upper(2.9999).floor(), Some(2));
        assert_eq!(Quantity::Upper(f64::INFINITY).floor(), None);
    }
}
