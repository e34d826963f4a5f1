//! Weight sequences `(c_n)`: arithmetic, polynomial-phase and random.
//!
//! Arithmetic sequences are shifted by one: stored index `n` holds the
//! arithmetic value at `n + 1` (so index 0 is `μ(1)`), and every averaging
//! routine consumes stored indices `0..N` uniformly.

mod io;
mod random;
mod sieve;

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::polyphase::PhasePolynomial;

pub use io::{read_sequence, write_sequence};
pub use random::{
    gaussian_sequence, gaussian_value, rademacher_sequence, rademacher_value,
    scaled_rademacher_sequence,
};
pub use sieve::Sieve;

/// Where a sequence came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case")]
pub enum Provenance {
    Mobius,
    Liouville,
    PolynomialPhase { alpha: f64, power: u32 },
    Rademacher { seed: u64 },
    ScaledRademacher { scale: f64, seed: u64 },
    Gaussian { seed: u64 },
    File { path: String },
    Derived { description: String },
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Mobius => write!(f, "mobius"),
            Provenance::Liouville => write!(f, "liouville"),
            Provenance::PolynomialPhase { alpha, power } => {
                write!(f, "polynomial-phase(alpha={alpha}, power={power})")
            }
            Provenance::Rademacher { seed } => write!(f, "rademacher(seed={seed})"),
            Provenance::ScaledRademacher { scale, seed } => {
                write!(f, "scaled-rademacher(scale={scale}, seed={seed})")
            }
            Provenance::Gaussian { seed } => write!(f, "gaussian(seed={seed})"),
            Provenance::File { path } => write!(f, "file({path})"),
            Provenance::Derived { description } => write!(f, "{description}"),
        }
    }
}

/// Finite prefix `(c_0, …, c_{N-1})` of a complex weight sequence.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSequence {
    values: Vec<Complex64>,
    provenance: Provenance,
}

impl ComplexSequence {
    /// Builds a sequence, checking the codomain promised by `provenance`.
    pub fn new(values: Vec<Complex64>, provenance: Provenance) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("sequence length must be at least 1"));
        }
        let check = |ok: &dyn Fn(Complex64) -> bool, what: &str| -> Result<()> {
            match values.iter().position(|&z| !ok(z)) {
                Some(i) => Err(Error::invalid(format!(
                    "value at index {i} ({}) is outside the {what} codomain",
                    values[i]
                ))),
                None => Ok(()),
            }
        };
        let is_sign = |z: Complex64| z.im == 0.0 && (z.re == 1.0 || z.re == -1.0);
        match &provenance {
            Provenance::Mobius => check(&|z| z.im == 0.0 && (z.re == 0.0 || is_sign(z)), "Möbius")?,
            Provenance::Liouville | Provenance::Rademacher { .. } => check(&is_sign, "±1")?,
            Provenance::PolynomialPhase { .. } => {
                check(&|z| (z.norm() - 1.0).abs() <= 1e-12, "unimodular")?
            }
            _ => check(&|z| z.re.is_finite() && z.im.is_finite(), "finite")?,
        }
        Ok(ComplexSequence { values, provenance })
    }

    pub fn from_real(values: &[f64], provenance: Provenance) -> Result<Self> {
        Self::new(
            values.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            provenance,
        )
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n == 0 || n > self.len() {
            return Err(Error::invalid(format!(
                "cannot truncate a sequence of length {} to {n}",
                self.len()
            )));
        }
        Ok(ComplexSequence {
            values: self.values[..n].to_vec(),
            provenance: self.provenance.clone(),
        })
    }

    /// Value-wise map; the result is tagged as derived.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64, description: impl Into<String>) -> Self {
        ComplexSequence {
            values: self.values.iter().map(|&z| f(z)).collect(),
            provenance: Provenance::Derived {
                description: description.into(),
            },
        }
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Strictly increasing list of prefix lengths at which averages are read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Checkpoints(Vec<usize>);

impl Checkpoints {
    pub fn new(values: Vec<usize>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("checkpoints: at least one checkpoint is required"));
        }
        if values[0] == 0 {
            return Err(Error::invalid("checkpoints: checkpoints must be positive"));
        }
        if let Some(w) = values.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::invalid(format!(
                "checkpoints: must be strictly increasing ({} then {})",
                w[0], w[1]
            )));
        }
        Ok(Checkpoints(values))
    }

    /// `N_i = ⌈n0 · 2^i⌉` for `i = 0..count`.
    pub fn geometric(n0: f64, count: usize) -> Result<Self> {
        if !(n0 >= 1.0) {
            return Err(Error::invalid("checkpoints: n0 must be at least 1"));
        }
        Self::new((0..count).map(|i| (n0 * 2f64.powi(i as i32)).ceil() as usize).collect())
    }

    /// Parses `"n1,n2,..."`.
    pub fn parse(text: &str) -> Result<Self> {
        let values = text
            .split(',')
            .map(|s| s.trim())
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite() && *v >= 0.0 && v.fract() == 0.0)
                    .map(|v| v as usize)
                    .ok_or_else(|| Error::invalid(format!("checkpoints: cannot parse {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(values)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn last(&self) -> usize {
        *self.0.last().expect("non-empty")
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn ensure_within(&self, length: usize) -> Result<()> {
        if self.last() > length {
            return Err(Error::invalid(format!(
                "checkpoints: checkpoint {} exceeds sequence length {length}",
                self.last()
            )));
        }
        Ok(())
    }
}

impl TryFrom<Vec<usize>> for Checkpoints {
    type Error = Error;
    fn try_from(v: Vec<usize>) -> Result<Self> {
        Checkpoints::new(v)
    }
}

impl From<Checkpoints> for Vec<usize> {
    fn from(c: Checkpoints) -> Vec<usize> {
        c.0
    }
}

fn sieve_prefix(n: usize, what: &str) -> Result<Sieve> {
    if n == 0 {
        return Err(Error::invalid(format!("{what}: N must be at least 1")));
    }
    Ok(Sieve::new(n))
}

/// `μ(1), …, μ(N)` at stored indices `0..N`, by a linear sieve.
pub fn mobius_sequence(n: usize) -> Result<ComplexSequence> {
    let mu = sieve_prefix(n, "mobius_sequence")?.mobius();
    let values = mu[1..].iter().map(|&m| Complex64::new(m as f64, 0.0)).collect();
    Ok(ComplexSequence {
        values,
        provenance: Provenance::Mobius,
    })
}

/// `λ(1), …, λ(N)` at stored indices `0..N`.
pub fn liouville_sequence(n: usize) -> Result<ComplexSequence> {
    let lambda = sieve_prefix(n, "liouville_sequence")?.liouville();
    let values = lambda[1..].iter().map(|&l| Complex64::new(l as f64, 0.0)).collect();
    Ok(ComplexSequence {
        values,
        provenance: Provenance::Liouville,
    })
}

/// `c_n = e(n^k α)` for `0 <= n < N`, streamed through a difference table.
pub fn polynomial_phase_sequence(alpha: f64, power: u32, n: usize) -> Result<ComplexSequence> {
    if power == 0 {
        return Err(Error::invalid("polynomial_phase_sequence: power must be at least 1"));
    }
    if n == 0 {
        return Err(Error::invalid("polynomial_phase_sequence: N must be at least 1"));
    }
    if !alpha.is_finite() {
        return Err(Error::invalid("polynomial_phase_sequence: alpha must be finite"));
    }
    let poly = PhasePolynomial::monomial(alpha, power as usize)?;
    let values = poly.stream().take(n).map(Phase::expi).collect();
    Ok(ComplexSequence {
        values,
        provenance: Provenance::PolynomialPhase { alpha, power },
    })
}

/// How to produce a weight sequence; the `weights` block of configs and
/// experiment descriptors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "generator", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WeightSpec {
    Mobius,
    Liouville,
    PolynomialPhase { alpha: f64, power: u32 },
    Rademacher { seed: u64 },
    ScaledRademacher { scale: f64, seed: u64 },
    Gaussian { seed: u64 },
    File { path: String },
}

impl WeightSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("weights: {e}")))
    }

    /// The first `n` weights. File sequences must hold at least `n` values.
    pub fn generate(&self, n: usize) -> Result<ComplexSequence> {
        match self {
            WeightSpec::Mobius => mobius_sequence(n),
            WeightSpec::Liouville => liouville_sequence(n),
            WeightSpec::PolynomialPhase { alpha, power } => polynomial_phase_sequence(*alpha, *power, n),
            WeightSpec::Rademacher { seed } => rademacher_sequence(*seed, n),
            WeightSpec::ScaledRademacher { scale, seed } => scaled_rademacher_sequence(*scale, *seed, n),
            WeightSpec::Gaussian { seed } => gaussian_sequence(*seed, n),
            WeightSpec::File { path } => {
                let seq = read_sequence(std::path::Path::new(path))?;
                if seq.len() < n {
                    return Err(Error::invalid(format!(
                        "checkpoints: {n} exceeds the {} values in {path}",
                        seq.len()
                    )));
                }
                seq.truncated(n)
            }
        }
    }

    /// Replaces the seed of seeded generators.
    pub fn with_seed(&self, new_seed: u64) -> WeightSpec {
        match self {
            WeightSpec::Rademacher { .. } => WeightSpec::Rademacher { seed: new_seed },
            WeightSpec::ScaledRademacher { scale, .. } => WeightSpec::ScaledRademacher {
                scale: *scale,
                seed: new_seed,
            },
            WeightSpec::Gaussian { .. } => WeightSpec::Gaussian { seed: new_seed },
            other => other.clone(),
        }
    }
}

/// `(1/N) Σ_{n<N} |c_n|` at every checkpoint.
pub fn cesaro_l1_norm(seq: &ComplexSequence, checkpoints: &Checkpoints) -> Result<Vec<f64>> {
    checkpoints.ensure_within(seq.len())?;
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut acc = 0.0;
    let mut next = 0;
    for (i, z) in seq.values().iter().enumerate() {
        acc += z.norm();
        if i + 1 == checkpoints.as_slice()[next] {
            out.push(acc / (i + 1) as f64);
            next += 1;
            if next == checkpoints.len() {
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn mu(seq: &ComplexSequence, n: usize) -> i32 {
        seq.values()[n - 1].re as i32
    }

    #[test]
    fn mobius_small_values() {
        let s = mobius_sequence(30).unwrap();
        let first: Vec<i32> = (1..=6).map(|n| mu(&s, n)).collect();
        assert_eq!(first, vec![1, -1, -1, 0, -1, 1]);
        assert_eq!(mu(&s, 12), 0);
        assert_eq!(mu(&s, 30), -1);
    }

    #[test]
    fn mobius_rejects_zero_length() {
        assert!(matches!(mobius_sequence(0), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn mobius_multiplicative_on_coprime_pairs() {
        let s = mobius_sequence(1_000_000).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let gcd = |mut a: usize, mut b: usize| {
            while b != 0 {
                (a, b) = (b, a % b);
            }
            a
        };
        let mut tested = 0;
        while tested < 1000 {
            let m = rng.random_range(1..=1000);
            let n = rng.random_range(1..=1000);
            if gcd(m, n) != 1 {
                continue;
            }
            assert_eq!(mu(&s, m * n), mu(&s, m) * mu(&s, n), "m={m} n={n}");
            tested += 1;
        }
    }

    #[test]
    fn mobius_divisor_sums_vanish() {
        let s = mobius_sequence(10_000).unwrap();
        let mut sums = vec![0i32; 10_001];
        for d in 1..=10_000 {
            let m = mu(&s, d);
            for k in (d..=10_000).step_by(d) {
                sums[k] += m;
            }
        }
        assert_eq!(sums[1], 1);
        assert!(sums[2..].iter().all(|&v| v == 0));
    }

    #[test]
    fn polynomial_phase_examples() {
        let s = polynomial_phase_sequence(0.5, 2, 4).unwrap();
        assert!((s.values()[3] - Complex64::new(-1.0, 0.0)).norm() < 1e-12);
        assert!((s.values()[0] - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        let s = polynomial_phase_sequence(1.0 / 3.0, 1, 3).unwrap();
        let expected = Complex64::from_polar(1.0, std::f64::consts::TAU * 2.0 / 3.0);
        assert!((s.values()[2] - expected).norm() < 1e-12);
    }

    #[test]
    fn polynomial_phase_is_unimodular() {
        let s = polynomial_phase_sequence(std::f64::consts::SQRT_2 - 1.0, 4, 100_000).unwrap();
        assert!(s.values().iter().all(|z| (z.norm() - 1.0).abs() <= 1e-12));
    }

    #[test]
    fn codomain_is_enforced() {
        let bad = ComplexSequence::from_real(&[1.0, 2.0], Provenance::Mobius);
        assert!(bad.is_err());
        let bad = ComplexSequence::from_real(&[1.0, 0.0], Provenance::Rademacher { seed: 0 });
        assert!(bad.is_err());
        assert!(ComplexSequence::new(vec![], Provenance::Mobius).is_err());
    }

    #[test]
    fn cesaro_examples() {
        let ones = ComplexSequence::from_real(&[1.0; 100], Provenance::Derived { description: "ones".into() }).unwrap();
        let cps = Checkpoints::new(vec![1, 10, 100]).unwrap();
        assert_eq!(cesaro_l1_norm(&ones, &cps).unwrap(), vec![1.0, 1.0, 1.0]);
        let zeros = ones.map(|_| Complex64::new(0.0, 0.0), "zeros");
        assert_eq!(cesaro_l1_norm(&zeros, &cps).unwrap(), vec![0.0, 0.0, 0.0]);
        let too_far = Checkpoints::new(vec![101]).unwrap();
        assert!(cesaro_l1_norm(&ones, &too_far).is_err());
    }

    #[test]
    fn checkpoint_validation() {
        assert!(Checkpoints::new(vec![]).is_err());
        assert!(Checkpoints::new(vec![0, 1]).is_err());
        assert!(Checkpoints::new(vec![5, 5]).is_err());
        assert_eq!(
            Checkpoints::geometric(1000.0, 4).unwrap().as_slice(),
            &[1000, 2000, 4000, 8000]
        );
        assert_eq!(Checkpoints::parse("10, 20,1e3").unwrap().as_slice(), &[10, 20, 1000]);
        assert!(Checkpoints::parse("10,x").is_err());
    }
}
