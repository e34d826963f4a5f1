//! Binomial coefficients, exact and modulo `2^128`, and the integer basis
//! changes between monomials `z^j` and binomials `C(z, i)`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// `C(n, k)` as an exact `u64`; `C(n, k) = 0` for `n < k`.
pub fn binomial_coefficient(n: u64, k: u64) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc = C(n, i) here, and C(n, i) <= C(n, k) because i < k <= n/2
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or_else(|| Error::Range(format!("C({n}, {k}) overflows")))?
            / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return Err(Error::Range(format!("C({n}, {k}) does not fit in 64 bits")));
        }
    }
    Ok(acc as u64)
}

/// `C(n, k) mod 2^128`, exact for every `n`.
pub fn binomial_mod_2_128(n: u64, k: usize) -> u128 {
    if k as u64 > n {
        return 0;
    }
    let k = k.min((n - k as u64) as usize);
    let mut acc: u128 = 1;
    for i in 0..k as u64 {
        match acc.checked_mul((n - i) as u128) {
            Some(v) => acc = v / (i + 1) as u128,
            None => {
                let big = binomial_bigint(&BigInt::from(n), k);
                return crate::phase::bigint_mod_2_128(&big);
            }
        }
    }
    acc
}

/// Generalised `C(x, k) = x (x-1) ⋯ (x-k+1) / k!` for any integer `x`.
pub fn binomial_bigint(x: &BigInt, k: usize) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= x - BigInt::from(i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// Forward differences at 0: given `v_r = f(r)` for `r = 0..=d`, returns
/// the Newton coefficients `Δ^i f(0)` with `f(z) = Σ Δ^i f(0) C(z, i)`.
pub(crate) fn forward_differences(mut values: Vec<BigInt>) -> Vec<BigInt> {
    let len = values.len();
    let mut out = Vec::with_capacity(len);
    for level in 0..len {
        out.push(values[0].clone());
        for r in 0..len - level - 1 {
            values[r] = &values[r + 1] - &values[r];
        }
    }
    out
}

/// Newton coefficients of `z^j`: `z^j = Σ_i i!·S(j, i) C(z, i)`.
pub(crate) fn monomial_in_binomial_basis(j: usize) -> Vec<BigInt> {
    let values = (0..=j).map(|r| BigInt::from(r).pow(j as u32)).collect();
    forward_differences(values)
}

/// Integer monomial coefficients of the falling factorial
/// `z (z-1) ⋯ (z-i+1) = i! C(z, i)`, i.e. signed Stirling numbers `s(i, j)`.
pub(crate) fn falling_factorial_coefficients(i: usize) -> Vec<BigInt> {
    let mut poly = vec![BigInt::one()];
    for t in 0..i {
        let mut next = vec![BigInt::zero(); poly.len() + 1];
        for (j, c) in poly.iter().enumerate() {
            next[j + 1] += c;
            next[j] -= c * BigInt::from(t);
        }
        poly = next;
    }
    poly
}
