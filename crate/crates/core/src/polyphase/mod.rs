//! Real polynomial phases modulo 1 and weighted exponential averages.
//!
//! A [`PhasePolynomial`] is stored in the binomial (Newton) basis
//! `P(z) = Σ b_i C(z, i)`. Because `C(n, i)` is an integer for integer `n`,
//! only `b_i mod 1` matters for values, and those are exactly the initial
//! registers `Δ^i P(0)` of a forward difference table. Streaming `P(n)` for
//! consecutive `n` is then `d` wrapping additions per step with no rounding
//! at all.
//!
//! Monomial coefficients mod 1 are not a function of `b_i mod 1`
//! (`C(z, 2) = z²/2 - z/2`), so each coefficient also carries its integer
//! part modulo `8!`. With that lift both basis changes are integer
//! transforms (Stirling numbers) and exact.

mod average;
pub mod binomial;
mod spectrum;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::phase::{bigint_mod_2_128, Phase};
use crate::torus::TimePolynomial;

pub use average::{partial_sums, weighted_exponential_average, ErgodicAverageSeries};
pub(crate) use average::require_length;
pub use binomial::binomial_coefficient;
pub use spectrum::{fold_dft, fourier_bohr_scan, SpectralPeak};

/// Highest supported phase degree.
pub const MAX_DEGREE: usize = 8;

/// `MAX_DEGREE!`; every `i!` with `i <= MAX_DEGREE` divides it.
const LIFT_MODULUS: u32 = 40_320;

/// A Newton coefficient modulo `LIFT_MODULUS`, as the integer
/// `lift · 2^128 + frac.raw()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
struct Coefficient {
    lift: u32,
    frac: Phase,
}

impl Coefficient {
    const ZERO: Coefficient = Coefficient {
        lift: 0,
        frac: Phase::ZERO,
    };

    fn modulus() -> BigInt {
        BigInt::from(LIFT_MODULUS) << 128
    }

    fn to_bigint(self) -> BigInt {
        (BigInt::from(self.lift) << 128) + BigInt::from(self.frac.raw())
    }

    fn from_bigint(w: &BigInt) -> Coefficient {
        let m = Self::modulus();
        let r = ((w % &m) + &m) % &m;
        Coefficient {
            lift: (&r >> 128u32).to_u32().expect("reduced below the modulus"),
            frac: Phase::from_raw(bigint_mod_2_128(&r)),
        }
    }

    fn from_phase(frac: Phase) -> Coefficient {
        Coefficient { lift: 0, frac }
    }

    fn add(self, other: Coefficient) -> Coefficient {
        let (raw, carry) = self.frac.raw().overflowing_add(other.frac.raw());
        Coefficient {
            lift: (self.lift + other.lift + carry as u32) % LIFT_MODULUS,
            frac: Phase::from_raw(raw),
        }
    }

    fn neg(self) -> Coefficient {
        Coefficient::from_bigint(&-self.to_bigint())
    }

    fn mul_bigint(self, k: &BigInt) -> Coefficient {
        Coefficient::from_bigint(&(self.to_bigint() * k))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PhasePolynomial {
    coeffs: Vec<Coefficient>,
}

fn check_degree(degree: usize) -> Result<()> {
    if degree > MAX_DEGREE {
        return Err(Error::invalid(format!(
            "phase polynomial degree {degree} exceeds the cap {MAX_DEGREE}"
        )));
    }
    Ok(())
}

fn non_empty<T>(v: &[T]) -> Result<()> {
    if v.is_empty() {
        return Err(Error::invalid("phase polynomial needs at least one coefficient"));
    }
    check_degree(v.len() - 1)
}

impl PhasePolynomial {
    pub fn zero(degree: usize) -> Result<Self> {
        check_degree(degree)?;
        Ok(PhasePolynomial {
            coeffs: vec![Coefficient::ZERO; degree + 1],
        })
    }

    pub fn constant(t0: f64) -> Self {
        PhasePolynomial {
            coeffs: vec![Coefficient::from_phase(Phase::from_f64(t0))],
        }
    }

    /// From Newton coefficients `(b_0, …, b_d)` of `Σ b_i C(z, i)`, each
    /// taken as its representative in `[0, 1)`.
    pub fn from_newton(newton: Vec<Phase>) -> Result<Self> {
        non_empty(&newton)?;
        Ok(PhasePolynomial {
            coeffs: newton.into_iter().map(Coefficient::from_phase).collect(),
        })
    }

    /// From monomial coefficients `(t_0, …, t_d)` of `Σ t_j z^j`, each
    /// reduced modulo 1.
    pub fn from_monomial(coeffs: &[f64]) -> Result<Self> {
        let phases: Vec<Phase> = coeffs.iter().map(|&t| Phase::from_f64(t)).collect();
        Self::from_monomial_phases(&phases)
    }

    pub fn from_monomial_phases(monomial: &[Phase]) -> Result<Self> {
        non_empty(monomial)?;
        let mut coeffs = vec![Coefficient::ZERO; monomial.len()];
        for (j, &t) in monomial.iter().enumerate() {
            if t == Phase::ZERO {
                continue;
            }
            let t = Coefficient::from_phase(t);
            for (i, e) in binomial::monomial_in_binomial_basis(j).iter().enumerate() {
                coeffs[i] = coeffs[i].add(t.mul_bigint(e));
            }
        }
        Ok(PhasePolynomial { coeffs })
    }

    /// `alpha · z^power`.
    pub fn monomial(alpha: f64, power: usize) -> Result<Self> {
        let mut coeffs = vec![0.0; power + 1];
        coeffs[power] = alpha;
        Self::from_monomial(&coeffs)
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Largest `i` with `b_i ≢ 0 (mod 1)` (0 for constants): the degree of
    /// the phase as a function on the integers.
    pub fn effective_degree(&self) -> usize {
        self.coeffs
            .iter()
            .rposition(|c| c.frac != Phase::ZERO)
            .unwrap_or(0)
    }

    /// `b_i mod 1`.
    pub fn newton_coefficients(&self) -> Vec<Phase> {
        self.coeffs.iter().map(|c| c.frac).collect()
    }

    /// Monomial coefficients `t_j = Σ_i b_i s(i, j) / i!` modulo 1.
    pub fn monomial_phases(&self) -> Vec<Phase> {
        let d = self.degree();
        let mut acc = vec![BigInt::from(0); d + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            if *c == Coefficient::ZERO {
                continue;
            }
            // b_i / i! = (b_i · L / i!) / L
            let factorial: u32 = (1..=i as u32).product();
            let w = c.to_bigint() * BigInt::from(LIFT_MODULUS / factorial);
            for (j, s) in binomial::falling_factorial_coefficients(i).iter().enumerate() {
                acc[j] += &w * s;
            }
        }
        let m = Coefficient::modulus();
        acc.iter()
            .map(|x| {
                let r = ((x % &m) + &m) % &m;
                Phase::from_raw(bigint_mod_2_128(&(r / BigInt::from(LIFT_MODULUS))))
            })
            .collect()
    }

    /// Monomial coefficients `(t_0, …, t_d)` in `[0, 1)`.
    pub fn monomial_coefficients(&self) -> Vec<f64> {
        self.monomial_phases().into_iter().map(Phase::to_f64).collect()
    }

    /// Exact `P(n) mod 1`: each term `b_i · C(n, i)` is formed from the
    /// exact binomial reduced modulo `2^128`.
    pub fn phase_at_exact(&self, n: u64) -> Phase {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| c.frac.mul_u128(binomial::binomial_mod_2_128(n, i)))
            .sum()
    }

    /// `frac(P(n))`.
    pub fn phase_at(&self, n: u64) -> f64 {
        self.phase_at_exact(n).to_f64()
    }

    /// `P(0), P(1), …` by forward differences.
    pub fn stream(&self) -> PhaseStream {
        PhaseStream {
            registers: self.newton_coefficients(),
        }
    }

    /// `P(n0), P(n0 + 1), …`; the registers start at `Δ^i P(n0)`.
    pub fn stream_from(&self, n0: u64) -> PhaseStream {
        let newton = self.newton_coefficients();
        let registers = (0..newton.len())
            .map(|i| {
                newton[i..]
                    .iter()
                    .enumerate()
                    .map(|(j, b)| b.mul_u128(binomial::binomial_mod_2_128(n0, j)))
                    .sum()
            })
            .collect();
        PhaseStream { registers }
    }

    pub fn add(&self, other: &PhasePolynomial) -> PhasePolynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let get = |v: &[Coefficient], i: usize| v.get(i).copied().unwrap_or(Coefficient::ZERO);
        PhasePolynomial {
            coeffs: (0..len)
                .map(|i| get(&self.coeffs, i).add(get(&other.coeffs, i)))
                .collect(),
        }
    }

    pub fn neg(&self) -> PhasePolynomial {
        PhasePolynomial {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    /// Zero-pads to a higher declared degree.
    pub fn with_degree(&self, degree: usize) -> Result<PhasePolynomial> {
        check_degree(degree)?;
        let top = self
            .coeffs
            .iter()
            .rposition(|c| *c != Coefficient::ZERO)
            .unwrap_or(0);
        if degree < top {
            return Err(Error::invalid(format!("cannot lower degree {top} to {degree}")));
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(degree + 1, Coefficient::ZERO);
        Ok(PhasePolynomial { coeffs })
    }

    /// `Q ∘ q` for an integer-valued time polynomial `q`.
    ///
    /// `C(q(n), i)` is itself integer valued, so its Newton coefficients are
    /// integers and the composition stays exact.
    pub fn compose(&self, q: &TimePolynomial) -> Result<PhasePolynomial> {
        let degree = self.degree() * q.degree();
        check_degree(degree)?;
        let mut coeffs = vec![Coefficient::ZERO; degree + 1];
        for (i, &b) in self.coeffs.iter().enumerate() {
            if b == Coefficient::ZERO {
                continue;
            }
            let inner: Vec<BigInt> = q.binomial_of_values(i);
            for (r, c) in inner.iter().enumerate() {
                coeffs[r] = coeffs[r].add(b.mul_bigint(c));
            }
        }
        Ok(PhasePolynomial { coeffs })
    }
}

/// Infinite iterator over `P(n) mod 1`.
#[derive(Debug, Clone)]
pub struct PhaseStream {
    registers: Vec<Phase>,
}

impl Iterator for PhaseStream {
    type Item = Phase;

    #[inline]
    fn next(&mut self) -> Option<Phase> {
        let out = self.registers[0];
        for i in 0..self.registers.len() - 1 {
            let next = self.registers[i + 1];
            self.registers[i] += next;
        }
        Some(out)
    }
}

/// `frac(P(n))` by the exact evaluator.
pub fn phase_at(p: &PhasePolynomial, n: u64) -> f64 {
    p.phase_at(n)
}

/// `frac(P(n))` for `n = 0..N` by the difference table.
pub fn phase_stream(p: &PhasePolynomial, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("phase_stream: N must be at least 1"));
    }
    Ok(p.stream().take(n).map(Phase::to_f64).collect())
}

/// `Q(z) = Σ_j θ_j C(z, k - j)` for `thetas = (θ_0, …, θ_k)`.
pub fn binomial_phase_polynomial(thetas: &[f64]) -> Result<PhasePolynomial> {
    let newton: Vec<Phase> = thetas.iter().rev().map(|&t| Phase::from_f64(t)).collect();
    PhasePolynomial::from_newton(newton)
}

pub fn compose_time_polynomial(q_poly: &PhasePolynomial, q: &TimePolynomial) -> Result<PhasePolynomial> {
    q_poly.compose(q)
}
