//! Combinatorial helpers: binomials and revolving-door subset enumeration.

use num_bigint::BigUint;
use num_traits::One;

/// `C(n, k)` as an exact big integer (zero when `k > n`).
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::default();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `C(n, k)` if it fits in a `u128`.
pub fn binomial_u128(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) / (i + 1) stays integral at every step.
        let g = num_integer::gcd(acc, i + 1);
        let num = (n as u128 - i) / ((i + 1) / g);
        acc = (acc / g).checked_mul(num)?;
    }
    Some(acc)
}

/// Number of nonempty subsets of at most `a` out of `n` elements, saturating.
pub fn subsets_up_to(n: usize, a: usize) -> u128 {
    (1..=a.min(n))
        .map(|s| binomial_u128(n as u64, s as u64).unwrap_or(u128::MAX))
        .fold(0u128, |acc, x| acc.saturating_add(x))
}

/// Knuth's revolving-door order over the `k`-subsets of `{0, .., n-1}`.
///
/// Successive subsets differ by removing one element and adding another, so
/// any quantity that is additive over elements (such as an XOR of columns)
/// can be carried along with two updates per step.
#[derive(Clone, Debug)]
pub struct RevolvingDoor {
    k: usize,
    // 1-based, c[k + 1] = n is a sentinel.
    c: Vec<usize>,
    done: bool,
}

impl RevolvingDoor {
    pub fn new(n: usize, k: usize) -> Self {
        assert!(k <= n, "subset size {k} exceeds ground set {n}");
        let mut c = vec![0; k + 2];
        for (j, slot) in c.iter_mut().enumerate().take(k + 1).skip(1) {
            *slot = j - 1;
        }
        c[k + 1] = n;
        RevolvingDoor { k, c, done: false }
    }

    /// The current subset, ascending.
    pub fn current(&self) -> &[usize] {
        &self.c[1..=self.k]
    }

    /// Steps to the next subset and returns `(removed, added)`, or `None` when
    /// the enumeration is exhausted.
    pub fn advance(&mut self) -> Option<(usize, usize)> {
        if self.done {
            return None;
        }
        let t = self.k;
        if t == 0 {
            self.done = true;
            return None;
        }
        let c = &mut self.c;
        let mut j = 2;
        let mut increase = false;
        if t % 2 == 1 {
            if c[1] + 1 < c[2] {
                let old = c[1];
                c[1] += 1;
                return Some((old, old + 1));
            }
        } else {
            if c[1] > 0 {
                let old = c[1];
                c[1] -= 1;
                return Some((old, old - 1));
            }
            increase = true;
        }
        loop {
            if j > t {
                self.done = true;
                return None;
            }
            if !increase {
                if c[j] >= j {
                    let removed = c[j];
                    c[j] = c[j - 1];
                    c[j - 1] = j - 2;
                    return Some((removed, j - 2));
                }
                j += 1;
                if j > t {
                    self.done = true;
                    return None;
                }
            }
            if c[j] + 1 < c[j + 1] {
                let removed = c[j - 1];
                c[j - 1] = c[j];
                c[j] += 1;
                return Some((removed, c[j]));
            }
            j += 1;
            increase = false;
        }
    }
}

/// Owned-subset iterator over [`RevolvingDoor`].
pub struct RevolvingDoorSubsets {
    inner: RevolvingDoor,
    started: bool,
}

impl RevolvingDoorSubsets {
    pub fn new(n: usize, k: usize) -> Self {
        RevolvingDoorSubsets {
            inner: RevolvingDoor::new(n, k),
            started: false,
        }
    }
}

impl Iterator for RevolvingDoorSubsets {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.started {
            self.inner.advance()?;
        }
        self.started = true;
        Some(self.inner.current().to_vec())
    }
}
