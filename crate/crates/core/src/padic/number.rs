use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Default number of base-p digits.
pub const DEFAULT_PRECISION: usize = 24;

/// Largest accepted prime; digit products then fit comfortably in `u64`.
pub const MAX_PRIME: u64 = 1 << 31;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn check_prime(p: u64) -> Result<()> {
    if p > MAX_PRIME {
        return Err(Error::invalid(format!("p = {p} exceeds the supported bound {MAX_PRIME}")));
    }
    if !is_prime(p) {
        return Err(Error::invalid(format!("p: {p} is not prime")));
    }
    Ok(())
}

/// An element of `Z_p` modulo `p^K`, as `K` base-`p` digits (least
/// significant first).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    p: u64,
    digits: Vec<u32>,
}

impl PadicNumber {
    pub fn zero(p: u64, precision: usize) -> Result<Self> {
        check_prime(p)?;
        if precision == 0 {
            return Err(Error::invalid("precision K must be at least 1"));
        }
        Ok(PadicNumber {
            p,
            digits: vec![0; precision],
        })
    }

    pub fn from_digits(p: u64, digits: Vec<u32>) -> Result<Self> {
        let mut out = Self::zero(p, digits.len())?;
        if let Some(d) = digits.iter().find(|&&d| d as u64 >= p) {
            return Err(Error::invalid(format!("digit {d} is not below p = {p}")));
        }
        out.digits = digits;
        Ok(out)
    }

    /// `x mod p^K` for any integer `x` (negative values wrap).
    pub fn from_bigint(p: u64, precision: usize, x: &BigInt) -> Result<Self> {
        let mut out = Self::zero(p, precision)?;
        let modulus = BigInt::from(p).pow(precision as u32);
        let mut rest = ((x % &modulus) + &modulus) % &modulus;
        let base = BigInt::from(p);
        for d in out.digits.iter_mut() {
            *d = (&rest % &base).to_u32().expect("digit below p");
            rest /= &base;
        }
        Ok(out)
    }

    pub fn from_i128(p: u64, precision: usize, x: i128) -> Result<Self> {
        Self::from_bigint(p, precision, &BigInt::from(x))
    }

    /// Parses a decimal integer, reducing it modulo `p^K`.
    pub fn parse_decimal(p: u64, precision: usize, text: &str) -> Result<Self> {
        let x: BigInt = text
            .trim()
            .parse()
            .map_err(|_| Error::invalid(format!("'{text}' is not a decimal integer")))?;
        Self::from_bigint(p, precision, &x)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> usize {
        self.digits.len()
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn is_zero(&self) -> bool {
        self.digits.iter().all(|&d| d == 0)
    }

    /// Index of the first nonzero digit, `K` for zero.
    pub fn valuation(&self) -> usize {
        self.digits.iter().position(|&d| d != 0).unwrap_or(self.digits.len())
    }

    pub fn to_biguint(&self) -> BigUint {
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * self.p + d)
    }

    /// `x mod p^j` as a machine integer.
    pub fn residue(&self, j: usize) -> Result<u128> {
        if j > self.precision() {
            return Err(Error::invalid(format!(
                "digit level {j} exceeds the precision K = {}",
                self.precision()
            )));
        }
        let mut acc: u128 = 0;
        for &d in self.digits[..j].iter().rev() {
            acc = acc
                .checked_mul(self.p as u128)
                .and_then(|v| v.checked_add(d as u128))
                .ok_or_else(|| Error::Range(format!("p^{j} does not fit in 128 bits")))?;
        }
        Ok(acc)
    }

    /// The first `j` digits, as an element of precision `j`.
    pub fn truncate(&self, j: usize) -> Result<PadicNumber> {
        if j == 0 || j > self.precision() {
            return Err(Error::invalid(format!(
                "truncation level {j} must lie in 1..={}",
                self.precision()
            )));
        }
        Ok(PadicNumber {
            p: self.p,
            digits: self.digits[..j].to_vec(),
        })
    }

    fn check_compatible(&self, other: &PadicNumber) -> Result<()> {
        if self.p != other.p || self.precision() != other.precision() {
            return Err(Error::invalid(format!(
                "mismatched p-adic parameters: (p, K) = ({}, {}) vs ({}, {})",
                self.p,
                self.precision(),
                other.p,
                other.precision()
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_compatible(other)?;
        let mut carry = 0u64;
        let digits = self
            .digits
            .iter()
            .zip(&other.digits)
            .map(|(&a, &b)| {
                let s = a as u64 + b as u64 + carry;
                carry = s / self.p;
                (s % self.p) as u32
            })
            .collect();
        Ok(PadicNumber { p: self.p, digits })
    }

    pub fn neg(&self) -> PadicNumber {
        // -x = (p^K - 1 - x) + 1
        let complement = PadicNumber {
            p: self.p,
            digits: self.digits.iter().map(|&d| (self.p - 1) as u32 - d).collect(),
        };
        let one = PadicNumber::one_like(self);
        complement.add(&one).expect("same parameters")
    }

    pub fn sub(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_compatible(other)?;
        self.add(&other.neg())
    }

    /// Schoolbook product truncated to `K` digits.
    pub fn mul(&self, other: &PadicNumber) -> Result<PadicNumber> {
        self.check_compatible(other)?;
        let k = self.precision();
        let mut acc = vec![0u64; k];
        for (i, &a) in self.digits.iter().enumerate() {
            if a == 0 {
                continue;
            }
            let mut carry = 0u64;
            for j in 0..k - i {
                let t = acc[i + j] + a as u64 * other.digits[j] as u64 + carry;
                acc[i + j] = t % self.p;
                carry = t / self.p;
            }
        }
        Ok(PadicNumber {
            p: self.p,
            digits: acc.into_iter().map(|d| d as u32).collect(),
        })
    }

    pub(crate) fn one_like(x: &PadicNumber) -> PadicNumber {
        let mut digits = vec![0; x.precision()];
        digits[0] = 1;
        PadicNumber { p: x.p, digits }
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {}^{})", self.to_biguint(), self.p, self.precision())
    }
}
