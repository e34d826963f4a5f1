//! Affine dynamics `x ↦ a x + b` on the p-adic integers.
//!
//! The map is 1-Lipschitz, so `T(x) mod p^j` depends only on `x mod p^j`.
//! Everything that looks at a fixed digit level `k` therefore iterates the
//! reduced map on `Z / p^k` with machine integers; the digit arithmetic of
//! [`PadicNumber`] is the full-precision route and the two are tested
//! against each other.

mod number;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::polyphase::ErgodicAverageSeries;
use crate::sequences::{Checkpoints, ComplexSequence};
use crate::torus::TimePolynomial;

pub use number::{is_prime, PadicNumber, DEFAULT_PRECISION, MAX_PRIME};

/// Largest `p^k` for which an orbit table is built.
pub const MAX_ORBIT_TABLE: u64 = 1 << 26;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicAffineSystem {
    a: PadicNumber,
    b: PadicNumber,
}

impl PadicAffineSystem {
    pub fn new(a: PadicNumber, b: PadicNumber) -> Result<Self> {
        if a.prime() != b.prime() || a.precision() != b.precision() {
            return Err(Error::invalid("a and b must share p and the precision K"));
        }
        Ok(PadicAffineSystem { a, b })
    }

    /// `a`, `b` given as integers and reduced modulo `p^K`.
    pub fn from_integers(p: u64, precision: usize, a: &BigInt, b: &BigInt) -> Result<Self> {
        Self::new(
            PadicNumber::from_bigint(p, precision, a)?,
            PadicNumber::from_bigint(p, precision, b)?,
        )
    }

    pub fn prime(&self) -> u64 {
        self.a.prime()
    }

    pub fn precision(&self) -> usize {
        self.a.precision()
    }

    pub fn a(&self) -> &PadicNumber {
        &self.a
    }

    pub fn b(&self) -> &PadicNumber {
        &self.b
    }

    /// `a x + b` with digit-carry arithmetic.
    pub fn eval(&self, x: &PadicNumber) -> Result<PadicNumber> {
        self.a.mul(x)?.add(&self.b)
    }

    pub fn is_minimal(&self) -> Result<bool> {
        let p = self.prime();
        affine_minimality_check(
            &BigInt::from(self.a.residue(1)?),
            &BigInt::from(self.b.residue(1)?),
            p,
        )
    }

    /// The map induced on `Z / p^k`.
    pub fn reduced(&self, k: usize) -> Result<ResidueAffineMap> {
        if k > self.precision() {
            return Err(Error::invalid(format!(
                "level k = {k} exceeds the precision K = {}",
                self.precision()
            )));
        }
        let modulus = (self.prime() as u128)
            .checked_pow(k as u32)
            .filter(|&m| m <= u64::MAX as u128)
            .ok_or_else(|| Error::Range(format!("p^k = {}^{k} does not fit in 64 bits", self.prime())))?
            as u64;
        Ok(ResidueAffineMap {
            modulus,
            a: self.a.residue(k)? as u64,
            b: self.b.residue(k)? as u64,
        })
    }
}

/// `x ↦ a x + b` on `Z / modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueAffineMap {
    pub modulus: u64,
    pub a: u64,
    pub b: u64,
}

impl ResidueAffineMap {
    #[inline]
    pub fn apply(&self, x: u64) -> u64 {
        ((self.a as u128 * x as u128 + self.b as u128) % self.modulus as u128) as u64
    }
}

/// `a x + b mod p^K`.
pub fn padic_eval_map(sys: &PadicAffineSystem, x: &PadicNumber) -> Result<PadicNumber> {
    sys.eval(x)
}

/// `x ↦ a x + b` is minimal on `Z_p` iff `a ≡ 1` and `b ≢ 0 (mod p)`.
/// Only odd primes are accepted.
pub fn affine_minimality_check(a: &BigInt, b: &BigInt, p: u64) -> Result<bool> {
    if p == 2 {
        return Err(Error::Unsupported(
            "affine minimality for p = 2 needs a stronger congruence and is not implemented".into(),
        ));
    }
    if !is_prime(p) {
        return Err(Error::invalid(format!("p: {p} is not prime")));
    }
    let m = BigInt::from(p);
    let a = ((a % &m) + &m) % &m;
    let b = ((b % &m) + &m) % &m;
    Ok(a == BigInt::from(1) && b != BigInt::from(0))
}

fn residue_of(sys: &PadicAffineSystem, x0: &PadicNumber, k: usize) -> Result<(ResidueAffineMap, u64)> {
    if x0.prime() != sys.prime() || x0.precision() != sys.precision() {
        return Err(Error::invalid("x0 must share p and the precision K with the system"));
    }
    let map = sys.reduced(k)?;
    Ok((map, x0.residue(k)? as u64))
}

/// Visit counts of `x0, T x0, …, T^{steps-1} x0` modulo `p^k`.
pub fn orbit_residue_census(
    sys: &PadicAffineSystem,
    x0: &PadicNumber,
    k: usize,
    steps: u64,
) -> Result<BTreeMap<u64, u64>> {
    let (map, mut x) = residue_of(sys, x0, k)?;
    let mut counts = BTreeMap::new();
    for _ in 0..steps {
        *counts.entry(x).or_insert(0) += 1;
        x = map.apply(x);
    }
    Ok(counts)
}

/// CSV with header `residue,count`.
pub fn census_to_csv(census: &BTreeMap<u64, u64>) -> String {
    let mut out = String::from("residue,count\n");
    for (r, c) in census {
        out.push_str(&format!("{r},{c}\n"));
    }
    out
}

/// The orbit of `x0` modulo `p^k` as a tail followed by a cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueOrbit {
    pub modulus: u64,
    /// `x0, T x0, …` up to the first repeat.
    pub points: Vec<u64>,
    pub tail: usize,
    pub period: usize,
}

impl ResidueOrbit {
    pub fn new(sys: &PadicAffineSystem, x0: &PadicNumber, k: usize) -> Result<Self> {
        let (map, start) = residue_of(sys, x0, k)?;
        if map.modulus > MAX_ORBIT_TABLE {
            return Err(Error::Resource(format!(
                "orbit table of p^k = {} entries exceeds the limit {MAX_ORBIT_TABLE}",
                map.modulus
            )));
        }
        let mut first_visit = vec![u32::MAX; map.modulus as usize];
        let mut points = Vec::new();
        let mut x = start;
        while first_visit[x as usize] == u32::MAX {
            first_visit[x as usize] = points.len() as u32;
            points.push(x);
            x = map.apply(x);
        }
        let tail = first_visit[x as usize] as usize;
        let period = points.len() - tail;
        Ok(ResidueOrbit {
            modulus: map.modulus,
            points,
            tail,
            period,
        })
    }

    /// Index into `points` of `T^t x0`.
    #[inline]
    pub fn index(&self, t: u64) -> usize {
        if t < self.points.len() as u64 {
            t as usize
        } else {
            self.tail + ((t - self.tail as u64) % self.period as u64) as usize
        }
    }

    pub fn at(&self, t: u64) -> u64 {
        self.points[self.index(t)]
    }
}

/// The cylinder character `x ↦ e((x mod p^k) / p^k)` at level `k`; level 0
/// is the constant 1.
pub fn cylinder_character(residue: u64, modulus: u64) -> Complex64 {
    Phase::from_ratio(residue, modulus).expi()
}

/// `(1/N) Σ c_n Π_j f(T^{q_j(n)} x0)` with `f` the level-`k` cylinder
/// character.
pub fn padic_weighted_average(
    sys: &PadicAffineSystem,
    level: usize,
    x0: &PadicNumber,
    qs: &[TimePolynomial],
    seq: &ComplexSequence,
    checkpoints: &Checkpoints,
) -> Result<ErgodicAverageSeries> {
    if qs.is_empty() {
        return Err(Error::invalid("at least one time polynomial is required (ell >= 1)"));
    }
    checkpoints.ensure_within(seq.len())?;
    let orbit = ResidueOrbit::new(sys, x0, level)?;
    let chi: Vec<Complex64> = orbit
        .points
        .iter()
        .map(|&r| cylinder_character(r, orbit.modulus))
        .collect();
    let n_max = checkpoints.last();
    let times = qs
        .iter()
        .map(|q| q.nonnegative_values(n_max))
        .collect::<Result<Vec<_>>>()?;
    let cps = checkpoints.as_slice();
    let mut sum = Complex64::new(0.0, 0.0);
    let mut averages = Vec::with_capacity(cps.len());
    let mut next = 0;
    for (n, &c) in seq.values()[..n_max].iter().enumerate() {
        let mut term = c;
        for t in &times {
            term *= chi[orbit.index(t[n])];
        }
        sum += term;
        if n + 1 == cps[next] {
            averages.push(sum / (n + 1) as f64);
            next += 1;
        }
    }
    Ok(ErgodicAverageSeries {
        checkpoints: cps.to_vec(),
        averages,
        weight_provenance: seq.provenance().to_string(),
    })
}

/// A polynomial map `x ↦ Σ c_i x^i` on `Z_p`, evaluated digit-exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PadicPolynomialMap {
    coeffs: Vec<PadicNumber>,
}

impl PadicPolynomialMap {
    pub fn new(coeffs: Vec<PadicNumber>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or_else(|| Error::invalid("polynomial map needs at least one coefficient"))?;
        if coeffs
            .iter()
            .any(|c| c.prime() != first.prime() || c.precision() != first.precision())
        {
            return Err(Error::invalid("coefficients must share p and the precision K"));
        }
        Ok(PadicPolynomialMap { coeffs })
    }

    /// Horner evaluation.
    pub fn eval(&self, x: &PadicNumber) -> Result<PadicNumber> {
        let mut acc = self.coeffs.last().expect("non-empty").clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(x)?.add(c)?;
        }
        Ok(acc)
    }

    /// `x, T x, T² x, …`.
    pub fn orbit(&self, x: PadicNumber) -> Result<PadicOrbit<'_>> {
        self.eval(&x)?;
        Ok(PadicOrbit { map: self, next: x })
    }
}

pub struct PadicOrbit<'a> {
    map: &'a PadicPolynomialMap,
    next: PadicNumber,
}

impl Iterator for PadicOrbit<'_> {
    type Item = PadicNumber;

    fn next(&mut self) -> Option<PadicNumber> {
        let image = self.map.eval(&self.next).expect("parameters checked on construction");
        Some(std::mem::replace(&mut self.next, image))
    }
}
