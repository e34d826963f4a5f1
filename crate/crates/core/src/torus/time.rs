use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyphase::binomial::{binomial_bigint, forward_differences, monomial_in_binomial_basis};

/// Integer-valued time polynomial `q(n) = Σ_j a_j C(n, j)` with `a_j ∈ ℤ`.
///
/// Every integer-valued polynomial has integer coefficients in this basis,
/// so integrality holds by construction. Nonnegativity is checked on the
/// range where the polynomial is actually used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TimePolynomial {
    binomial: Vec<i64>,
}

impl TimePolynomial {
    pub fn from_binomial(coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("time polynomial needs at least one coefficient"));
        }
        Ok(TimePolynomial { binomial: coeffs })
    }

    /// From integer monomial coefficients `(a_0, a_1, …)`.
    pub fn from_monomial(coeffs: &[i64]) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::invalid("time polynomial needs at least one coefficient"));
        }
        let mut out = vec![BigInt::from(0); coeffs.len()];
        for (j, &a) in coeffs.iter().enumerate() {
            for (i, e) in monomial_in_binomial_basis(j).into_iter().enumerate() {
                out[i] += e * a;
            }
        }
        let binomial = out
            .into_iter()
            .map(|c| {
                i64::try_from(c).map_err(|_| Error::Range("time polynomial coefficient overflows i64".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TimePolynomial { binomial })
    }

    /// `q(n) = n`.
    pub fn identity() -> Self {
        TimePolynomial { binomial: vec![0, 1] }
    }

    /// `q(n) = n^k`.
    pub fn power(k: usize) -> Self {
        let mut m = vec![0i64; k + 1];
        m[k] = 1;
        Self::from_monomial(&m).expect("small powers fit")
    }

    pub fn coefficients(&self) -> &[i64] {
        &self.binomial
    }

    /// Declared degree: index of the last nonzero coefficient (0 for constants).
    pub fn degree(&self) -> usize {
        self.binomial.iter().rposition(|&a| a != 0).unwrap_or(0)
    }

    pub fn eval_bigint(&self, n: &BigInt) -> BigInt {
        self.binomial
            .iter()
            .enumerate()
            .map(|(j, &a)| binomial_bigint(n, j) * a)
            .sum()
    }

    /// `q(n)` as a machine integer, or a range error.
    pub fn eval(&self, n: u64) -> Result<i128> {
        i128::try_from(self.eval_bigint(&BigInt::from(n)))
            .map_err(|_| Error::Range(format!("q({n}) overflows i128")))
    }

    /// All values `q(0), …, q(len - 1)` via an integer difference table.
    pub fn values(&self, len: usize) -> Result<Vec<i128>> {
        let d = self.binomial.len();
        let mut regs: Vec<i128> = self.binomial.iter().map(|&a| a as i128).collect();
        let mut out = Vec::with_capacity(len);
        for n in 0..len {
            out.push(regs[0]);
            for i in 0..d - 1 {
                regs[i] = regs[i]
                    .checked_add(regs[i + 1])
                    .ok_or_else(|| Error::Range(format!("q({}) overflows i128", n + 1)))?;
            }
        }
        Ok(out)
    }

    /// Values on `0..len`, failing on the first negative one.
    pub fn nonnegative_values(&self, len: usize) -> Result<Vec<u64>> {
        self.values(len)?
            .into_iter()
            .enumerate()
            .map(|(n, v)| {
                u64::try_from(v).map_err(|_| {
                    if v < 0 {
                        Error::invalid(format!("time polynomial is negative at n = {n} (q(n) = {v})"))
                    } else {
                        Error::Range(format!("q({n}) = {v} does not fit in 64 bits"))
                    }
                })
            })
            .collect()
    }

    /// Newton coefficients of `n ↦ C(q(n), i)`, which is integer valued of
    /// degree `i · deg q`.
    pub(crate) fn binomial_of_values(&self, i: usize) -> Vec<BigInt> {
        let degree = i * self.degree();
        let values = (0..=degree)
            .map(|r| binomial_bigint(&self.eval_bigint(&BigInt::from(r)), i))
            .collect();
        forward_differences(values)
    }
}
