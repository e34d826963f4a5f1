//! Points of the circle `ℝ/ℤ` as 128-bit binary fractions.
//!
//! A [`Phase`] `x` stands for the real number `x.raw() / 2^128` in `[0, 1)`.
//! Addition and multiplication by an integer are wrapping operations on the
//! raw word, which is exactly arithmetic modulo 1. This is what lets phase
//! polynomials be streamed to `n = 10^6` at degree 4 without the rounding
//! blow-up of evaluating `n^d · t` in `f64`.

use std::f64::consts::TAU;
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::sync::OnceLock;

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;

const TWO_POW_128: f64 = 340_282_366_920_938_463_463_374_607_431_768_211_456.0;

#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(u128);

impl Phase {
    pub const ZERO: Phase = Phase(0);
    pub const HALF: Phase = Phase(1 << 127);

    pub const fn from_raw(raw: u128) -> Self {
        Phase(raw)
    }

    pub const fn raw(self) -> u128 {
        self.0
    }

    /// Reduces `x` modulo 1. Every `f64` in `[2^-75, 1)` converts exactly;
    /// smaller magnitudes are truncated to the 128-bit grid.
    pub fn from_f64(x: f64) -> Self {
        if !x.is_finite() {
            return Phase::ZERO;
        }
        let mut r = x.rem_euclid(1.0);
        if r >= 1.0 {
            r = 0.0;
        }
        if r == 0.0 {
            return Phase::ZERO;
        }
        let bits = r.to_bits();
        let exp = ((bits >> 52) & 0x7ff) as i32;
        let frac = bits & ((1u64 << 52) - 1);
        let (mantissa, e) = if exp == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp - 1075)
        };
        // r = mantissa * 2^e, raw = mantissa * 2^(e + 128)
        let shift = e + 128;
        let raw = if shift >= 0 {
            (mantissa as u128) << shift
        } else if shift > -64 {
            (mantissa as u128) >> (-shift)
        } else {
            0
        };
        Phase(raw)
    }

    /// Nearest `f64` in `[0, 1)`. Values that round up to 1 map to 0.
    pub fn to_f64(self) -> f64 {
        let v = self.0 as f64 / TWO_POW_128;
        if v >= 1.0 {
            0.0
        } else {
            v
        }
    }

    /// The phase `num / den` for `0 <= num < den`, rounded down.
    pub fn from_ratio(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        let num = num % den;
        let den = den as u128;
        let scaled = (num as u128) << 64;
        let hi = scaled / den;
        let rem = scaled % den;
        let lo = (rem << 64) / den;
        Phase((hi << 64) | lo)
    }

    pub fn mul_int(self, k: i128) -> Self {
        Phase(self.0.wrapping_mul(k as u128))
    }

    pub fn mul_u128(self, k: u128) -> Self {
        Phase(self.0.wrapping_mul(k))
    }

    /// Multiplies by an arbitrary-size integer, reducing it modulo `2^128`
    /// first (valid because the result is only needed modulo 1).
    pub fn mul_bigint(self, k: &BigInt) -> Self {
        self.mul_u128(bigint_mod_2_128(k))
    }

    /// Signed distance to zero on the circle, in `[-1/2, 1/2)`.
    pub fn centered(self) -> f64 {
        (self.0 as i128) as f64 / TWO_POW_128
    }

    /// `e^{2πi x}`.
    pub fn expi(self) -> Complex64 {
        ExpTable::get().expi(self)
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({})", self.to_f64())
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_f64())
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase(self.0.wrapping_add(rhs.0))
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        self.0 = self.0.wrapping_add(rhs.0);
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase(self.0.wrapping_sub(rhs.0))
    }
}

impl SubAssign for Phase {
    fn sub_assign(&mut self, rhs: Phase) {
        self.0 = self.0.wrapping_sub(rhs.0);
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase(self.0.wrapping_neg())
    }
}

impl std::iter::Sum for Phase {
    fn sum<I: Iterator<Item = Phase>>(iter: I) -> Phase {
        iter.fold(Phase::ZERO, |a, b| a + b)
    }
}

/// `k mod 2^128` for a signed big integer.
pub(crate) fn bigint_mod_2_128(k: &BigInt) -> u128 {
    let (sign, digits) = k.to_u64_digits();
    let lo = digits.first().copied().unwrap_or(0) as u128;
    let hi = digits.get(1).copied().unwrap_or(0) as u128;
    let magnitude = lo | (hi << 64);
    match sign {
        Sign::Minus => magnitude.wrapping_neg(),
        _ => magnitude,
    }
}

const COARSE_BITS: u32 = 12;
const FINE_BITS: u32 = 12;

/// Two-level table for `e^{2πi x}`: the top 24 bits of the phase index two
/// 4096-entry tables and the remaining `< 2^-24` is handled by a short
/// Taylor expansion. Absolute error stays below `1e-15`.
pub(crate) struct ExpTable {
    coarse: Vec<Complex64>,
    fine: Vec<Complex64>,
}

impl ExpTable {
    pub(crate) fn get() -> &'static ExpTable {
        static TABLE: OnceLock<ExpTable> = OnceLock::new();
        TABLE.get_or_init(|| {
            let build = |bits: u32, scale_bits: u32| {
                let size = 1usize << bits;
                (0..size)
                    .map(|i| {
                        let x = i as f64 / (1u64 << scale_bits) as f64;
                        let (s, c) = (TAU * x).sin_cos();
                        Complex64::new(c, s)
                    })
                    .collect::<Vec<_>>()
            };
            ExpTable {
                coarse: build(COARSE_BITS, COARSE_BITS),
                fine: build(FINE_BITS, COARSE_BITS + FINE_BITS),
            }
        })
    }

    #[inline]
    pub(crate) fn expi(&self, x: Phase) -> Complex64 {
        let raw = x.0;
        let hi = (raw >> (128 - COARSE_BITS)) as usize;
        let mid = ((raw >> (128 - COARSE_BITS - FINE_BITS)) as usize) & ((1 << FINE_BITS) - 1);
        let low_mask = (1u128 << (128 - COARSE_BITS - FINE_BITS)) - 1;
        let rest = ((raw & low_mask) >> 40) as f64 / (1u128 << 88) as f64;
        let theta = TAU * rest;
        let t2 = theta * theta;
        let tail = Complex64::new(1.0 - 0.5 * t2, theta * (1.0 - t2 / 6.0));
        self.coarse[hi] * self.fine[mid] * tail
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f64_round_trip_is_exact() {
        for &x in &[0.0, 0.5, 0.25, 0.1, std::f64::consts::SQRT_2 - 1.0, 0.999_999_999] {
            assert_eq!(Phase::from_f64(x).to_f64(), x);
        }
        assert_eq!(Phase::from_f64(1.25), Phase::from_f64(0.25));
        assert_eq!(Phase::from_f64(-0.25), Phase::from_f64(0.75));
        assert_eq!(Phase::from_f64(-1e-300), Phase::ZERO);
    }

    #[test]
    fn negation_is_exact() {
        let a = Phase::from_f64(std::f64::consts::SQRT_2 - 1.0);
        assert_eq!(a + (-a), Phase::ZERO);
        assert_eq!((-a).mul_int(3) + a.mul_int(3), Phase::ZERO);
    }

    #[test]
    fn ratios() {
        assert_eq!(Phase::from_ratio(1, 2), Phase::HALF);
        assert_eq!(Phase::from_ratio(3, 4).to_f64(), 0.75);
        let third = Phase::from_ratio(1, 3);
        assert!((third.to_f64() - 1.0 / 3.0).abs() < 1e-16);
        assert!((third.mul_int(3).centered()).abs() < 1e-30);
    }

    #[test]
    fn expi_matches_sin_cos() {
        let mut worst: f64 = 0.0;
        for i in 0..20_000u64 {
            let x = Phase::from_raw((i as u128).wrapping_mul(0x9E37_79B9_7F4A_7C15_F39C_C060_5CED_C835));
            let t = x.to_f64();
            let (s, c) = (TAU * t).sin_cos();
            worst = worst.max((x.expi() - Complex64::new(c, s)).norm());
        }
        assert!(worst < 4e-15, "worst {worst}");
    }

    #[test]
    fn bigint_reduction() {
        let k = BigInt::from(-3);
        assert_eq!(bigint_mod_2_128(&k), 3u128.wrapping_neg());
        let big = BigInt::from(1u8) << 130;
        assert_eq!(bigint_mod_2_128(&(big + 7)), 7);
    }
}
