use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::PhasePolynomial;
use crate::error::{Error, Result};
use crate::phase::ExpTable;
use crate::sequences::{Checkpoints, ComplexSequence};

/// Partial averages `(1/N) Σ_{n<N} c_n e(P(n))` read at increasing `N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErgodicAverageSeries {
    pub checkpoints: Vec<usize>,
    pub averages: Vec<Complex64>,
    pub weight_provenance: String,
}

impl ErgodicAverageSeries {
    pub fn moduli(&self) -> Vec<f64> {
        self.averages.iter().map(|z| z.norm()).collect()
    }

    pub fn last(&self) -> Complex64 {
        *self.averages.last().expect("series is never empty")
    }

    /// CSV with header `n,re,im,modulus`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,re,im,modulus\n");
        for (n, z) in self.checkpoints.iter().zip(&self.averages) {
            out.push_str(&format!("{n},{:?},{:?},{:?}\n", z.re, z.im, z.norm()));
        }
        out
    }
}

/// Unnormalised sums `Σ_{n<N} c_n e(P(n))` at each checkpoint, in one pass.
pub fn partial_sums(values: &[Complex64], p: &PhasePolynomial, checkpoints: &[usize]) -> Vec<Complex64> {
    let table = ExpTable::get();
    let mut out = Vec::with_capacity(checkpoints.len());
    let Some(&last) = checkpoints.last() else {
        return out;
    };
    let mut regs = p.newton_coefficients().to_vec();
    let d = regs.len() - 1;
    let mut sum = Complex64::new(0.0, 0.0);
    let mut next = 0;
    for (n, &c) in values[..last].iter().enumerate() {
        if c.re != 0.0 || c.im != 0.0 {
            sum += c * table.expi(regs[0]);
        }
        for i in 0..d {
            let r = regs[i + 1];
            regs[i] += r;
        }
        if n + 1 == checkpoints[next] {
            out.push(sum);
            next += 1;
        }
    }
    out
}

pub fn weighted_exponential_average(
    seq: &ComplexSequence,
    p: &PhasePolynomial,
    checkpoints: &Checkpoints,
) -> Result<ErgodicAverageSeries> {
    checkpoints.ensure_within(seq.len())?;
    let sums = partial_sums(seq.values(), p, checkpoints.as_slice());
    let averages = sums
        .iter()
        .zip(checkpoints.as_slice())
        .map(|(s, &n)| s / n as f64)
        .collect();
    Ok(ErgodicAverageSeries {
        checkpoints: checkpoints.as_slice().to_vec(),
        averages,
        weight_provenance: seq.provenance().to_string(),
    })
}

pub(crate) fn require_length(seq: &ComplexSequence, n: usize) -> Result<()> {
    if n == 0 || n > seq.len() {
        return Err(Error::invalid(format!(
            "N = {n} must lie in 1..={} (sequence length)",
            seq.len()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{cesaro_l1_norm, polynomial_phase_sequence, rademacher_sequence, Provenance};
    use proptest::prelude::*;

    fn ones(n: usize) -> ComplexSequence {
        ComplexSequence::from_real(&vec![1.0; n], Provenance::Derived { description: "ones".into() }).unwrap()
    }

    #[test]
    fn constant_weights_zero_phase() {
        let s = ones(1000);
        let cps = Checkpoints::new(vec![1, 10, 1000]).unwrap();
        let avg = weighted_exponential_average(&s, &PhasePolynomial::zero(2).unwrap(), &cps).unwrap();
        for z in &avg.averages {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn linear_phase_cancels_exactly() {
        let alpha = (5f64.sqrt() - 1.0) / 2.0;
        let s = polynomial_phase_sequence(alpha, 1, 100_000).unwrap();
        let resonant = PhasePolynomial::monomial(alpha, 1).unwrap().neg();
        let cps = Checkpoints::new(vec![100, 100_000]).unwrap();
        let avg = weighted_exponential_average(&s, &resonant, &cps).unwrap();
        for z in &avg.averages {
            assert!((z - Complex64::new(1.0, 0.0)).norm() < 1e-6);
        }
    }

    #[test]
    fn quadratic_weyl_sum_is_small() {
        let s = polynomial_phase_sequence(std::f64::consts::SQRT_2 - 1.0, 2, 100_000).unwrap();
        let cps = Checkpoints::new(vec![100_000]).unwrap();
        let avg = weighted_exponential_average(&s, &PhasePolynomial::zero(0).unwrap(), &cps).unwrap();
        assert!(avg.last().norm() <= 0.02, "{}", avg.last().norm());
    }

    #[test]
    fn checkpoint_overflow() {
        let s = ones(10);
        let cps = Checkpoints::new(vec![11]).unwrap();
        assert!(weighted_exponential_average(&s, &PhasePolynomial::zero(1).unwrap(), &cps).is_err());
    }

    #[test]
    fn csv_header() {
        let s = ones(4);
        let cps = Checkpoints::new(vec![2, 4]).unwrap();
        let csv = weighted_exponential_average(&s, &PhasePolynomial::zero(0).unwrap(), &cps)
            .unwrap()
            .to_csv();
        assert!(csv.starts_with("n,re,im,modulus\n2,1.0,0.0,1.0\n"), "{csv}");
    }

    fn random_seq(seed: u64, n: usize) -> ComplexSequence {
        let r = rademacher_sequence(seed, n).unwrap();
        let i = rademacher_sequence(seed ^ 0xABCD, n).unwrap();
        let values = r.values().iter().zip(i.values()).enumerate()
            .map(|(k, (a, b))| Complex64::new(a.re * 0.5, b.re * (k % 3) as f64 * 0.25))
            .collect();
        ComplexSequence::new(values, Provenance::Derived { description: "mixed".into() }).unwrap()
    }

    proptest! {
        #[test]
        fn modulus_bounded_by_cesaro_norm(seed in 0u64..1000, coeffs in prop::collection::vec(0.0f64..1.0, 1..=4)) {
            let s = random_seq(seed, 500);
            let p = PhasePolynomial::from_monomial(&coeffs).unwrap();
            let cps = Checkpoints::new(vec![1, 7, 64, 500]).unwrap();
            let avg = weighted_exponential_average(&s, &p, &cps).unwrap();
            let bound = cesaro_l1_norm(&s, &cps).unwrap();
            for (z, b) in avg.averages.iter().zip(bound) {
                prop_assert!(z.norm() <= b + 1e-12);
            }
        }

        #[test]
        fn linear_in_weights(seed in 0u64..1000, a in -2.0f64..2.0, b in -2.0f64..2.0, coeffs in prop::collection::vec(0.0f64..1.0, 1..=3)) {
            let s1 = random_seq(seed, 300);
            let s2 = random_seq(seed + 1, 300);
            let combo: Vec<Complex64> = s1.values().iter().zip(s2.values()).map(|(x, y)| x * a + y * b).collect();
            let combo = ComplexSequence::new(combo, Provenance::Derived { description: "combo".into() }).unwrap();
            let p = PhasePolynomial::from_monomial(&coeffs).unwrap();
            let cps = Checkpoints::new(vec![300]).unwrap();
            let lhs = weighted_exponential_average(&combo, &p, &cps).unwrap().last();
            let rhs = weighted_exponential_average(&s1, &p, &cps).unwrap().last() * a
                + weighted_exponential_average(&s2, &p, &cps).unwrap().last() * b;
            prop_assert!((lhs - rhs).norm() <= 1e-12);
        }

        #[test]
        fn integer_valued_shift_is_invisible(seed in 0u64..1000, coeffs in prop::collection::vec(0.0f64..1.0, 1..=3)) {
            let s = random_seq(seed, 400);
            let p = PhasePolynomial::from_monomial(&coeffs).unwrap();
            // R(z) = C(z, 2) expressed by monomials (z^2 - z)/2
            let r = [0.0, -0.5, 0.5];
            let shifted: Vec<f64> = (0..coeffs.len().max(3))
                .map(|j| coeffs.get(j).copied().unwrap_or(0.0) + r.get(j).copied().unwrap_or(0.0))
                .collect();
            let q = PhasePolynomial::from_monomial(&shifted).unwrap();
            let cps = Checkpoints::new(vec![50, 400]).unwrap();
            let a = weighted_exponential_average(&s, &p, &cps).unwrap();
            let b = weighted_exponential_average(&s, &q, &cps).unwrap();
            for (x, y) in a.averages.iter().zip(&b.averages) {
                prop_assert!((x - y).norm() <= 1e-9);
            }
        }
    }

    #[test]
    fn phase_kernel_matches_exact_route() {
        let p = PhasePolynomial::from_monomial(&[0.1, 0.2, 0.3, 0.4]).unwrap();
        let s = ones(2000);
        let sum = partial_sums(s.values(), &p, &[2000])[0];
        let direct: Complex64 = (0..2000u64).map(|n| p.phase_at_exact(n).expi()).sum();
        assert!((sum - direct).norm() < 1e-10);
    }
}
