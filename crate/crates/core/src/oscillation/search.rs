//! Sup of `|(1/N) Σ c_n e(P(n))|` over degree-`d` phases: a uniform grid on
//! the coefficient torus followed by coordinate descent.
//!
//! The constant coefficient `t_0` only rotates the average, so it is pinned
//! to 0 and the grid lives on `T^d` (coordinates `t_1, …, t_d`).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::polyphase::{partial_sums, require_length, PhasePolynomial, MAX_DEGREE};
use crate::sequences::ComplexSequence;

/// Upper bound on `G^{d+1}`.
pub const MAX_GRID_POINTS: u64 = 10_000_000;
/// Coordinate descent stops once the step drops below this.
pub const MIN_REFINE_STEP: f64 = 1e-5;
/// Hard cap on objective evaluations per refinement.
pub const MAX_REFINE_EVALUATIONS: usize = 10_000;

/// A sup estimate and the monomial coefficients `(t_0, …, t_d)` attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct SupEstimate {
    pub sup: f64,
    pub coefficients: Vec<Phase>,
}

impl SupEstimate {
    pub fn coefficient_values(&self) -> Vec<f64> {
        self.coefficients.iter().map(|c| c.to_f64()).collect()
    }

    pub fn polynomial(&self) -> PhasePolynomial {
        PhasePolynomial::from_monomial_phases(&self.coefficients).expect("degree checked on construction")
    }
}

pub(crate) fn check_grid(d: usize, g: usize) -> Result<()> {
    if g < 2 {
        return Err(Error::invalid(format!("grid_per_dim G = {g} must be at least 2")));
    }
    if d > MAX_DEGREE {
        return Err(Error::invalid(format!("degree {d} exceeds the cap {MAX_DEGREE}")));
    }
    let points = (g as u64).checked_pow(d as u32 + 1);
    match points {
        Some(p) if p <= MAX_GRID_POINTS => Ok(()),
        _ => Err(Error::Resource(format!(
            "grid of G^(d+1) = {g}^{} points exceeds the budget of {MAX_GRID_POINTS}",
            d + 1
        ))),
    }
}

/// Monomial coefficients of grid point `index` (lexicographic, `t_1` most
/// significant).
pub(crate) fn grid_point(index: u64, d: usize, g: usize) -> Vec<Phase> {
    let mut coeffs = vec![Phase::ZERO; d + 1];
    let mut rest = index;
    for j in (1..=d).rev() {
        coeffs[j] = Phase::from_ratio(rest % g as u64, g as u64);
        rest /= g as u64;
    }
    coeffs
}

pub(crate) fn grid_size(d: usize, g: usize) -> u64 {
    (g as u64).pow(d as u32)
}

fn moduli(values: &[Complex64], coeffs: &[Phase], checkpoints: &[usize]) -> Vec<f64> {
    let p = PhasePolynomial::from_monomial_phases(coeffs).expect("degree checked");
    partial_sums(values, &p, checkpoints)
        .into_iter()
        .zip(checkpoints)
        .map(|(s, &n)| s.norm() / n as f64)
        .collect()
}

/// `|(1/N) Σ_{n<N} c_n e(P(n))|` for monomial coefficients `coeffs`.
pub fn objective(values: &[Complex64], coeffs: &[Phase], n: usize) -> f64 {
    moduli(values, coeffs, &[n])[0]
}

/// Per-checkpoint grid maxima with a deterministic reduction: larger
/// modulus wins, ties go to the smaller grid index.
pub(crate) fn grid_sup_multi(values: &[Complex64], d: usize, g: usize, checkpoints: &[usize]) -> Vec<SupEstimate> {
    let size = grid_size(d, g);
    let evaluated: Vec<Vec<f64>> = (0..size)
        .into_par_iter()
        .map(|index| moduli(values, &grid_point(index, d, g), checkpoints))
        .collect();
    let mut best_index = vec![0u64; checkpoints.len()];
    let mut best = evaluated[0].clone();
    for (index, row) in evaluated.iter().enumerate().skip(1) {
        for (k, &v) in row.iter().enumerate() {
            if v > best[k] {
                best[k] = v;
                best_index[k] = index as u64;
            }
        }
    }
    best.into_iter()
        .zip(best_index)
        .map(|(sup, index)| SupEstimate {
            sup,
            coefficients: grid_point(index, d, g),
        })
        .collect()
}

/// Grid maximum over `{0, 1/G, …, (G-1)/G}^d` (with `t_0 = 0`).
pub fn grid_sup_average(seq: &ComplexSequence, d: usize, g: usize, n: usize) -> Result<SupEstimate> {
    check_grid(d, g)?;
    require_length(seq, n)?;
    Ok(grid_sup_multi(seq.values(), d, g, &[n]).remove(0))
}

/// Coordinate descent on `t_1, …, t_d` (each wrapped modulo 1) with step
/// `initial_step, initial_step/2, …` down to [`MIN_REFINE_STEP`]. Only
/// strict improvements are accepted, so the result never falls below the
/// starting value.
pub(crate) fn refine_from(values: &[Complex64], n: usize, start: Vec<Phase>, initial_step: f64) -> SupEstimate {
    let d = start.len() - 1;
    let mut coeffs = start;
    let mut best = objective(values, &coeffs, n);
    let mut evaluations = 1;
    let mut step = initial_step;
    'outer: while step >= MIN_REFINE_STEP && d > 0 {
        let delta = Phase::from_f64(step);
        loop {
            let mut improved = false;
            for j in 1..=d {
                for candidate in [coeffs[j] + delta, coeffs[j] - delta] {
                    if evaluations >= MAX_REFINE_EVALUATIONS {
                        break 'outer;
                    }
                    let mut trial = coeffs.clone();
                    trial[j] = candidate;
                    let v = objective(values, &trial, n);
                    evaluations += 1;
                    if v > best {
                        best = v;
                        coeffs = trial;
                        improved = true;
                        break;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        step *= 0.5;
    }
    SupEstimate { sup: best, coefficients: coeffs }
}

/// Polishes `start = (t_0, …, t_d)` by coordinate descent.
pub fn refine_local(seq: &ComplexSequence, d: usize, start: &[f64], n: usize, initial_step: f64) -> Result<SupEstimate> {
    require_length(seq, n)?;
    if start.len() != d + 1 {
        return Err(Error::invalid(format!(
            "start has {} coefficients, expected d + 1 = {}",
            start.len(),
            d + 1
        )));
    }
    if d > MAX_DEGREE {
        return Err(Error::invalid(format!("degree {d} exceeds the cap {MAX_DEGREE}")));
    }
    if let Some(t) = start.iter().find(|t| !(0.0..1.0).contains(*t)) {
        return Err(Error::invalid(format!("start coefficient {t} is outside [0, 1)")));
    }
    if !(initial_step > 0.0) {
        return Err(Error::invalid("initial step must be positive"));
    }
    let start = start.iter().map(|&t| Phase::from_f64(t)).collect();
    Ok(refine_from(seq.values(), n, start, initial_step))
}
