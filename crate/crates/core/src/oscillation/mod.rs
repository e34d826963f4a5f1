//! Empirical oscillation order of a weight sequence.
//!
//! For each degree `d` the sup of the partial-average modulus over real
//! polynomials of degree `≤ d` is approximated on the coefficient torus,
//! read at several `N`, and classified as decaying or not. The decay
//! thresholds are heuristics of this crate and are configurable through
//! [`VerdictPolicy`].

mod search;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::polyphase::MAX_DEGREE;
use crate::sequences::{Checkpoints, ComplexSequence, Provenance};

pub(crate) use search::{check_grid, grid_point, grid_size, refine_from};
pub use search::{
    grid_sup_average, objective, refine_local, SupEstimate, MAX_GRID_POINTS, MAX_REFINE_EVALUATIONS,
    MIN_REFINE_STEP,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Decaying,
    NonDecaying,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerdictPolicy {
    /// Decaying needs a log-log slope at or below this...
    pub decay_slope: f64,
    /// ...and a final sup at or below this.
    pub decay_level: f64,
    /// Non-decaying when the final sup is at least this.
    pub non_decay_level: f64,
}

impl Default for VerdictPolicy {
    fn default() -> Self {
        VerdictPolicy {
            decay_slope: -0.2,
            decay_level: 0.1,
            non_decay_level: 0.5,
        }
    }
}

impl VerdictPolicy {
    pub fn classify(&self, slope: Option<f64>, final_sup: f64) -> Verdict {
        if final_sup >= self.non_decay_level {
            return Verdict::NonDecaying;
        }
        match slope {
            Some(s) if s <= self.decay_slope && final_sup <= self.decay_level => Verdict::Decaying,
            None if final_sup == 0.0 => Verdict::Decaying,
            _ => Verdict::Inconclusive,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileOptions {
    /// Grid resolution per coordinate; `None` picks 16 for `d <= 2`, 8 for
    /// `d = 3` and 4 above.
    pub grid_per_dim: Option<usize>,
    pub refine: bool,
    /// Number of trailing checkpoints used for the slope; `None` uses all.
    pub slope_window: Option<usize>,
    pub policy: VerdictPolicy,
    /// Extra monomial coefficient vectors evaluated alongside the grid.
    pub candidates: Vec<Vec<f64>>,
    /// For polynomial-phase weights `e(α n^k)`, also try the conjugate phase
    /// `-α z^k` whenever `k <= d`. A resonance of width `N^-k` cannot be
    /// found by a grid.
    pub provenance_hints: bool,
}

impl Default for ProfileOptions {
    fn default() -> Self {
        ProfileOptions {
            grid_per_dim: None,
            refine: true,
            slope_window: None,
            policy: VerdictPolicy::default(),
            candidates: Vec::new(),
            provenance_hints: true,
        }
    }
}

pub fn default_grid(d: usize) -> usize {
    match d {
        0..=2 => 16,
        3 => 8,
        _ => 4,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckpointSup {
    pub n: usize,
    pub sup: f64,
    pub coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeRecord {
    pub degree: usize,
    pub checkpoints: Vec<CheckpointSup>,
    pub slope: Option<f64>,
    pub verdict: Verdict,
}

impl DegreeRecord {
    pub fn final_sup(&self) -> f64 {
        self.checkpoints.last().map_or(0.0, |c| c.sup)
    }
}

/// Per-degree sup estimates; serialises as a JSON array of degree records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct OscillationReport {
    pub degrees: Vec<DegreeRecord>,
}

impl OscillationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("oscillation report: {e}")))
    }

    pub fn degree(&self, d: usize) -> Option<&DegreeRecord> {
        self.degrees.iter().find(|r| r.degree == d)
    }
}

/// Least-squares slope of `ln y` against `ln x`; `None` when fewer than two
/// points or any value is not positive.
pub fn log_log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return None;
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

fn structured_candidates(seq: &ComplexSequence, d: usize, options: &ProfileOptions) -> Vec<Vec<Phase>> {
    let mut out = Vec::new();
    if options.provenance_hints {
        if let Provenance::PolynomialPhase { alpha, power } = seq.provenance() {
            let power = *power as usize;
            if power <= d {
                let mut c = vec![Phase::ZERO; d + 1];
                c[power] = -Phase::from_f64(*alpha);
                out.push(c);
            }
        }
    }
    for cand in &options.candidates {
        if cand.len() <= d + 1 {
            let mut c: Vec<Phase> = cand.iter().map(|&t| Phase::from_f64(t)).collect();
            c.resize(d + 1, Phase::ZERO);
            c[0] = Phase::ZERO;
            out.push(c);
        }
    }
    out
}

/// Sup estimates for one degree at every checkpoint.
pub fn degree_profile(
    seq: &ComplexSequence,
    d: usize,
    checkpoints: &Checkpoints,
    options: &ProfileOptions,
) -> Result<DegreeRecord> {
    let g = options.grid_per_dim.unwrap_or_else(|| default_grid(d));
    check_grid(d, g)?;
    checkpoints.ensure_within(seq.len())?;
    let cps = checkpoints.as_slice();
    let values = seq.values();
    let mut best = search::grid_sup_multi(values, d, g, cps);
    for cand in structured_candidates(seq, d, options) {
        for (k, &n) in cps.iter().enumerate() {
            let v = objective(values, &cand, n);
            if v > best[k].sup {
                best[k] = SupEstimate {
                    sup: v,
                    coefficients: cand.clone(),
                };
            }
        }
    }
    if options.refine {
        for (k, &n) in cps.iter().enumerate() {
            let start = std::mem::take(&mut best[k].coefficients);
            best[k] = refine_from(values, n, start, 1.0 / g as f64);
        }
    }
    let window = options.slope_window.unwrap_or(cps.len()).clamp(2, cps.len().max(2));
    let tail: Vec<(f64, f64)> = cps
        .iter()
        .zip(&best)
        .skip(cps.len().saturating_sub(window))
        .map(|(&n, e)| (n as f64, e.sup))
        .collect();
    let slope = log_log_slope(&tail);
    let final_sup = best.last().map_or(0.0, |e| e.sup);
    Ok(DegreeRecord {
        degree: d,
        checkpoints: cps
            .iter()
            .zip(&best)
            .map(|(&n, e)| CheckpointSup {
                n,
                sup: e.sup,
                coeffs: e.coefficient_values(),
            })
            .collect(),
        slope,
        verdict: options.policy.classify(slope, final_sup),
    })
}

/// Degree-by-degree profile for `d = 1..=d_max`.
pub fn estimate_oscillation_profile(
    seq: &ComplexSequence,
    d_max: usize,
    checkpoints: &Checkpoints,
    options: &ProfileOptions,
) -> Result<OscillationReport> {
    if checkpoints.len() < 3 {
        return Err(Error::invalid(format!(
            "checkpoints: at least 3 are needed for a decay slope, got {}",
            checkpoints.len()
        )));
    }
    if d_max == 0 || d_max > MAX_DEGREE {
        return Err(Error::invalid(format!("d_max = {d_max} must lie in 1..={MAX_DEGREE}")));
    }
    let degrees = (1..=d_max)
        .map(|d| degree_profile(seq, d, checkpoints, options))
        .collect::<Result<Vec<_>>>()?;
    Ok(OscillationReport { degrees })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "degree", rename_all = "kebab-case")]
pub enum ExactOrder {
    /// In `OSC_d` but not `OSC_{d+1}`.
    Exact(usize),
    /// Every tested degree decays; only a lower bound is certified.
    AtLeast(usize),
    NotOscillatingOfOrderOne,
    /// The first degree that neither decays nor clearly fails.
    Inconclusive(usize),
}

impl fmt::Display for ExactOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactOrder::Exact(d) => write!(f, "{d}"),
            ExactOrder::AtLeast(d) => write!(f, "≥ {d}"),
            ExactOrder::NotOscillatingOfOrderOne => write!(f, "not oscillating of order 1"),
            ExactOrder::Inconclusive(d) => write!(f, "inconclusive at degree {d}"),
        }
    }
}

pub fn classify_exact_order(report: &OscillationReport) -> ExactOrder {
    let mut records: Vec<&DegreeRecord> = report.degrees.iter().collect();
    records.sort_by_key(|r| r.degree);
    for r in &records {
        match r.verdict {
            Verdict::Decaying => continue,
            Verdict::NonDecaying if r.degree <= 1 => return ExactOrder::NotOscillatingOfOrderOne,
            Verdict::NonDecaying => return ExactOrder::Exact(r.degree - 1),
            Verdict::Inconclusive => return ExactOrder::Inconclusive(r.degree),
        }
    }
    ExactOrder::AtLeast(records.last().map_or(1, |r| r.degree + 1))
}
