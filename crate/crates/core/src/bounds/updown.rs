//! Upward-rounded `f64` arithmetic.
//!
//! Every helper returns a value that is `>=` the exact real result of the
//! operation on its (already upper-bounding) inputs. Round-to-nearest is
//! followed by one `next_up`, which dominates the half-ulp error, and values
//! that would underflow to zero become the smallest subnormal instead.

use num_bigint::BigUint;

/// Smallest positive subnormal, `2^-1074`.
pub const TINY: f64 = f64::from_bits(1);

pub fn add(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return b;
    }
    if b == 0.0 {
        return a;
    }
    (a + b).next_up()
}

pub fn mul(a: f64, b: f64) -> f64 {
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    (a * b).next_up()
}

/// `a / b` rounded up; `b` must be a lower bound on the true divisor.
pub fn div(a: f64, b: f64) -> f64 {
    if a == 0.0 {
        return 0.0;
    }
    (a / b).next_up()
}

/// `2^e`, exact when representable, otherwise the nearest upper bound.
pub fn pow2(e: i64) -> f64 {
    if e > 1023 {
        f64::INFINITY
    } else if e >= -1022 {
        f64::from_bits(((e + 1023) as u64) << 52)
    } else if e >= -1074 {
        f64::from_bits(1u64 << (e + 1074))
    } else {
        TINY
    }
}

/// Lower bound on `2^x - 1` for `x >= 1`: exact up to 53 bits, `2^(x-1)` beyond.
pub fn mersenne_lower(x: i64) -> f64 {
    debug_assert!(x >= 1);
    if x <= 53 {
        pow2(x) - 1.0
    } else {
        pow2(x - 1)
    }
}

/// Upper bound on `num * 2^-shift`.
pub fn big_scaled(num: &BigUint, shift: i64) -> f64 {
    let bits = num.bits() as i64;
    if bits == 0 {
        return 0.0;
    }
    let (top, scale) = if bits <= 53 {
        (u64::try_from(num).expect("fits") as f64, -shift)
    } else {
        let top = u64::try_from(num >> (bits - 53) as u64).expect("53 bits");
        // num < (top + 1) * 2^(bits - 53), and top + 1 <= 2^53 is exact
        (top as f64 + 1.0, bits - 53 - shift)
    };
    // value in [2^(bits-1-shift), 2^(bits-shift))
    let magnitude = bits - shift;
    if magnitude > 1025 {
        return f64::INFINITY;
    }
    if magnitude < -1074 {
        return TINY;
    }
    let half = scale / 2;
    mul(mul(top, pow2(half)), pow2(scale - half))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::Zero;
    use proptest::prelude::*;

    #[test]
    fn pow2_range() {
        assert_eq!(pow2(0), 1.0);
        assert_eq!(pow2(10), 1024.0);
        assert_eq!(pow2(-1), 0.5);
        assert_eq!(pow2(-1074), TINY);
        assert_eq!(pow2(-1080), TINY);
        assert_eq!(pow2(-1030), 2f64.powi(-1030));
        assert!(pow2(1024).is_infinite());
    }

    #[test]
    fn big_scaled_is_upper_bound() {
        let x = BigUint::from(3u32);
        let v = big_scaled(&x, 2);
        assert!(v >= 0.75 && v < 0.75 + 1e-15);
        let big = BigUint::from(1u32) << 200u32;
        let v = big_scaled(&(big.clone() - 1u32), 200);
        assert!(v >= 1.0 - 1e-15 && v <= 1.0 + 1e-15);
        assert!(v >= 1.0 - f64::EPSILON);
        assert_eq!(big_scaled(&BigUint::from(5u32), 2000), TINY);
        assert!(big_scaled(&big, -900).is_infinite());
        assert!(big_scaled(&(BigUint::from(12345u32) << 100u32), 100) >= 12345.0);
    }

    #[test]
    fn ops_round_up() {
        let third = div(1.0, 3.0);
        assert!(third > 1.0 / 3.0);
        assert!(mul(third, 3.0) > 1.0);
        assert!(add(0.1, 0.2) > 0.1 + 0.2 - 1e-17);
        assert_eq!(mul(0.0, 5.0), 0.0);
        assert!(mul(TINY, 0.5) > 0.0);
    }

    #[test]
    fn big_scaled_between_53_and_64_bits() {
        let x = BigUint::from(0x7fff_ffff_ffff_ffffu64);
        let v = big_scaled(&x, 16);
        assert!(v >= 2f64.powi(47) && v < 2f64.powi(47) * (1.0 + 1e-15));
    }

    proptest! {
        #[test]
        fn big_scaled_dominates(words in proptest::collection::vec(any::<u32>(), 0..8), shift in -300i64..600) {
            let num = BigUint::new(words);
            let v = big_scaled(&num, shift);
            let exact = if shift >= 0 {
                BigRational::new(num.clone().into(), (BigUint::from(1u32) << shift as u64).into())
            } else {
                BigRational::from_integer((num.clone() << (-shift) as u64).into())
            };
            if v.is_finite() {
                let got = BigRational::from_float(v).unwrap();
                prop_assert!(got >= exact);
                // within a relative 2^-50 unless clamped to the subnormal floor
                if !exact.is_zero() && v > 1e-300 {
                    let slack = &exact * BigRational::new(1.into(), (BigUint::from(1u32) << 50u32).into());
                    prop_assert!(got <= &exact + slack);
                }
            }
        }
    }
}
