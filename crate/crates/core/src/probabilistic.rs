//! Subnormal random weights and the growth of their polynomial-phase sums.
//!
//! For i.i.d. subnormal `ξ_n` the sup over degree-`d` phases of
//! `|Σ_{n<N} ξ_n e(P(n))|` grows like `√(N log N)` almost surely. The
//! empirical sup here is computed on the same coefficient grid as the
//! oscillation module, but by a different route: for every grid setting of
//! `t_2, …, t_d` the whole `t_1` axis comes from one folded FFT.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oscillation::{check_grid, grid_point, grid_size, refine_from};
use crate::phase::Phase;
use crate::polyphase::PhasePolynomial;
use crate::sequences::{Checkpoints, ComplexSequence, WeightSpec};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "distribution", rename_all = "kebab-case")]
pub enum Distribution {
    Rademacher,
    /// `c · ε` with `ε` Rademacher.
    ScaledRademacher { scale: f64 },
    StandardGaussian,
}

/// `log cosh x` without overflow.
fn log_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

impl Distribution {
    /// `log E e^{λξ}`.
    pub fn log_mgf(&self, lambda: f64) -> f64 {
        match self {
            Distribution::Rademacher => log_cosh(lambda),
            Distribution::ScaledRademacher { scale } => log_cosh(scale * lambda),
            Distribution::StandardGaussian => lambda * lambda / 2.0,
        }
    }
}

/// `λ²/2 - log E e^{λξ}` at each `λ`; the distribution is subnormal on the
/// grid iff every margin is `>= 0`.
pub fn subnormality_margin(dist: &Distribution, lambdas: &[f64]) -> Result<Vec<(f64, f64)>> {
    if let Distribution::ScaledRademacher { scale } = dist {
        if !scale.is_finite() {
            return Err(Error::invalid("scale must be finite"));
        }
    }
    lambdas
        .iter()
        .map(|&l| {
            if !l.is_finite() {
                return Err(Error::invalid(format!("lambda {l} is not finite")));
            }
            Ok((l, l * l / 2.0 - dist.log_mgf(l)))
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RandomSequenceSpec {
    #[serde(flatten)]
    pub distribution: Distribution,
    pub seed: u64,
    pub length: usize,
}

impl RandomSequenceSpec {
    pub fn new(distribution: Distribution, seed: u64, length: usize) -> Result<Self> {
        if length == 0 {
            return Err(Error::invalid("length must be at least 1"));
        }
        if let Distribution::ScaledRademacher { scale } = distribution {
            if !(scale.abs() <= 1.0) {
                return Err(Error::invalid(format!(
                    "scale {scale}: scaled Rademacher is subnormal only for |c| <= 1"
                )));
            }
        }
        Ok(RandomSequenceSpec {
            distribution,
            seed,
            length,
        })
    }

    pub fn weights(&self) -> WeightSpec {
        match self.distribution {
            Distribution::Rademacher => WeightSpec::Rademacher { seed: self.seed },
            Distribution::ScaledRademacher { scale } => WeightSpec::ScaledRademacher { scale, seed: self.seed },
            Distribution::StandardGaussian => WeightSpec::Gaussian { seed: self.seed },
        }
    }

    pub fn generate(&self) -> Result<ComplexSequence> {
        self.weights().generate(self.length)
    }
}

/// Un-normalised sup `|Σ_{n<N} ξ_n e(P(n))|` at one `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LskPoint {
    pub n: usize,
    pub sup: f64,
    /// Monomial coefficients of the maximising phase.
    pub coeffs: Vec<f64>,
}

impl LskPoint {
    /// `sup / √(N log N)`.
    pub fn ratio(&self) -> f64 {
        let n = self.n as f64;
        self.sup / (n * n.ln()).sqrt()
    }
}

/// Grid maxima of the un-normalised sums at every checkpoint, with the
/// lexicographically smallest grid index winning ties.
pub fn lsk_grid_sup(seq: &ComplexSequence, d: usize, checkpoints: &Checkpoints, g: usize) -> Result<Vec<LskPoint>> {
    check_grid(d, g)?;
    checkpoints.ensure_within(seq.len())?;
    let cps = checkpoints.as_slice();
    let values = seq.values();
    if d == 0 {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut out = Vec::new();
        let mut start = 0;
        for &n in cps {
            sum += values[start..n].iter().sum::<Complex64>();
            start = n;
            out.push(LskPoint {
                n,
                sup: sum.norm(),
                coeffs: vec![0.0],
            });
        }
        return Ok(out);
    }
    let settings = grid_size(d - 1, g) as usize;
    let fft = FftPlanner::new().plan_fft_inverse(g);
    // moduli[checkpoint][grid index]
    let mut moduli = vec![vec![0.0; settings * g]; cps.len()];
    for s in 0..settings {
        // t_1 = 0 here because s < G^{d-1}
        let rest = PhasePolynomial::from_monomial_phases(&grid_point(s as u64, d, g))?;
        let mut folded = vec![Complex64::new(0.0, 0.0); g];
        let mut phases = rest.stream();
        let mut slot = 0;
        let mut next = 0;
        for (n, &c) in values[..checkpoints.last()].iter().enumerate() {
            let phase = phases.next().expect("infinite");
            folded[slot] += c * phase.expi();
            slot += 1;
            if slot == g {
                slot = 0;
            }
            if n + 1 == cps[next] {
                let mut spectrum = folded.clone();
                fft.process(&mut spectrum);
                for (j, z) in spectrum.iter().enumerate() {
                    moduli[next][j * settings + s] = z.norm();
                }
                next += 1;
            }
        }
    }
    Ok(cps
        .iter()
        .zip(&moduli)
        .map(|(&n, row)| {
            let mut best = 0;
            for (i, &v) in row.iter().enumerate().skip(1) {
                if v > row[best] {
                    best = i;
                }
            }
            LskPoint {
                n,
                sup: row[best],
                coeffs: grid_point(best as u64, d, g).iter().map(|c| c.to_f64()).collect(),
            }
        })
        .collect())
}

/// Grid maximum polished by coordinate descent, as an un-normalised sum.
pub fn lsk_sup_of_sequence(seq: &ComplexSequence, d: usize, checkpoints: &Checkpoints, g: usize) -> Result<Vec<LskPoint>> {
    let grid = lsk_grid_sup(seq, d, checkpoints, g)?;
    Ok(grid
        .into_iter()
        .map(|pt| {
            let start: Vec<Phase> = pt.coeffs.iter().map(|&c| Phase::from_f64(c)).collect();
            let refined = refine_from(seq.values(), pt.n, start, 1.0 / g as f64);
            let sup = (refined.sup * pt.n as f64).max(pt.sup);
            LskPoint {
                n: pt.n,
                sup,
                coeffs: refined.coefficient_values(),
            }
        })
        .collect())
}

/// `sup_P |Σ_{n<N} ξ_n e(P(n))|` over degree-`d` phases for the random
/// sequence `spec`, at every checkpoint.
pub fn lsk_empirical_sup(
    spec: &RandomSequenceSpec,
    d: usize,
    checkpoints: &Checkpoints,
    g: usize,
) -> Result<Vec<LskPoint>> {
    check_grid(d, g)?;
    if checkpoints.last() > spec.length {
        return Err(Error::invalid(format!(
            "checkpoints: {} exceeds the sequence length {}",
            checkpoints.last(),
            spec.length
        )));
    }
    let seq = spec.generate()?;
    lsk_sup_of_sequence(&seq, d, checkpoints, g)
}

/// Least-squares slope of `log value` against `log N`.
pub fn growth_exponent(series: &[(f64, f64)]) -> Result<f64> {
    if series.len() < 3 {
        return Err(Error::invalid(format!(
            "growth_exponent needs at least 3 points, got {}",
            series.len()
        )));
    }
    if let Some((n, v)) = series.iter().find(|(n, v)| !(*v > 0.0) || !(*n > 0.0)) {
        return Err(Error::invalid(format!("nonpositive point (N = {n}, value = {v})")));
    }
    crate::oscillation::log_log_slope(series)
        .ok_or_else(|| Error::invalid("growth_exponent needs at least two distinct N"))
}

/// One row of the LSK report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LskRecord {
    pub seed: u64,
    pub d: usize,
    pub n: usize,
    pub sup: f64,
    pub ratio: f64,
}

/// CSV with header `seed,d,n,sup,ratio`.
pub fn lsk_to_csv(records: &[LskRecord]) -> String {
    let mut out = String::from("seed,d,n,sup,ratio\n");
    for r in records {
        out.push_str(&format!("{},{},{},{:?},{:?}\n", r.seed, r.d, r.n, r.sup, r.ratio));
    }
    out
}

/// `lsk_empirical_sup` over several seeds and degrees, seeds outermost.
pub fn lsk_survey(
    distribution: Distribution,
    seeds: &[u64],
    degrees: &[usize],
    checkpoints: &Checkpoints,
    g: usize,
) -> Result<Vec<LskRecord>> {
    let mut out = Vec::new();
    for &seed in seeds {
        let spec = RandomSequenceSpec::new(distribution, seed, checkpoints.last())?;
        let seq = spec.generate()?;
        for &d in degrees {
            for pt in lsk_sup_of_sequence(&seq, d, checkpoints, g)? {
                out.push(LskRecord {
                    seed,
                    d,
                    n: pt.n,
                    sup: pt.sup,
                    ratio: pt.ratio(),
                });
            }
        }
    }
    Ok(out)
}
