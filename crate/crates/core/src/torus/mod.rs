//! Skew shifts on the m-torus and their quasi-eigenfunction towers.
//!
//! `T(x_1, …, x_m) = (x_1 + α, x_2 + x_1, …, x_m + x_{m-1})`. For a
//! character `f(x) = e(⟨k, x⟩)`,
//!
//! ```text
//! f(Tx) = f(x) · e(k_1 α) · e(⟨Sk, x⟩),   (Sk)_j = k_{j+1}
//! ```
//!
//! so `f ∘ T = g f` with `g` again a character times a constant. Repeating
//! the shift walks down a tower `f_k, f_{k-1}, …, f_0` that ends in a
//! constant. Each level is stored symbolically as `(a, v)` meaning
//! `x ↦ e(a α + ⟨v, x⟩)`, so the tower identities are integer equations.

mod time;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::phase::Phase;
use crate::polyphase::binomial::binomial_mod_2_128;
use crate::polyphase::{weighted_exponential_average, ErgodicAverageSeries, PhasePolynomial};
use crate::sequences::{Checkpoints, ComplexSequence, WeightSpec};

pub use time::TimePolynomial;

/// A point of `T^m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TorusPoint(pub Vec<Phase>);

impl TorusPoint {
    pub fn from_f64s(coords: &[f64]) -> Self {
        TorusPoint(coords.iter().map(|&c| Phase::from_f64(c)).collect())
    }

    pub fn to_f64s(&self) -> Vec<f64> {
        self.0.iter().map(|c| c.to_f64()).collect()
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkewShiftSystem {
    dim: usize,
    alpha: Phase,
    declared_minimal: bool,
}

impl SkewShiftSystem {
    /// The skew shift of dimension `dim` with rotation `alpha`. Minimality
    /// needs `alpha` irrational, which no float is; the flag defaults to
    /// `true` and only records the caller's intent.
    pub fn new(dim: usize, alpha: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::invalid("skew shift dimension m must be at least 1"));
        }
        if !alpha.is_finite() {
            return Err(Error::invalid("alpha must be finite"));
        }
        Ok(SkewShiftSystem {
            dim,
            alpha: Phase::from_f64(alpha),
            declared_minimal: true,
        })
    }

    pub fn declared_minimal(mut self, minimal: bool) -> Self {
        self.declared_minimal = minimal;
        self
    }

    pub fn is_declared_minimal(&self) -> bool {
        self.declared_minimal
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> Phase {
        self.alpha
    }

    fn check_point(&self, x: &TorusPoint) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::invalid(format!(
                "point has {} coordinates, system dimension is {}",
                x.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    /// One application of the map.
    pub fn step(&self, x: &TorusPoint) -> TorusPoint {
        let mut next = Vec::with_capacity(self.dim);
        next.push(x.0[0] + self.alpha);
        for j in 1..self.dim {
            next.push(x.0[j] + x.0[j - 1]);
        }
        TorusPoint(next)
    }

    /// `T^n x` in closed form:
    /// `x_j(n) = Σ_{i<=j} C(n, j-i) x_i + C(n, j) α` (1-based coordinates).
    pub fn orbit_point(&self, x: &TorusPoint, n: u64) -> Result<TorusPoint> {
        self.check_point(x)?;
        let binom: Vec<u128> = (0..=self.dim).map(|k| binomial_mod_2_128(n, k)).collect();
        let coords = (0..self.dim)
            .map(|j| {
                let drift = self.alpha.mul_u128(binom[j + 1]);
                (0..=j).map(|i| x.0[i].mul_u128(binom[j - i])).sum::<Phase>() + drift
            })
            .collect();
        Ok(TorusPoint(coords))
    }
}

/// The character `x ↦ e(⟨k, x⟩)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharacterObservable {
    pub frequencies: Vec<i64>,
}

impl CharacterObservable {
    pub fn new(frequencies: Vec<i64>) -> Self {
        CharacterObservable { frequencies }
    }

    pub fn is_trivial(&self) -> bool {
        self.frequencies.iter().all(|&k| k == 0)
    }

    pub fn phase(&self, x: &TorusPoint) -> Phase {
        self.frequencies
            .iter()
            .zip(&x.0)
            .map(|(&k, &c)| c.mul_int(k as i128))
            .sum()
    }

    pub fn eval(&self, x: &TorusPoint) -> Complex64 {
        self.phase(x).expi()
    }
}

/// One tower level: `x ↦ e(alpha_multiple · α + ⟨frequencies, x⟩)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TowerLevel {
    pub alpha_multiple: i64,
    pub frequencies: Vec<i64>,
}

impl TowerLevel {
    fn identity(dim: usize) -> Self {
        TowerLevel {
            alpha_multiple: 0,
            frequencies: vec![0; dim],
        }
    }

    pub fn is_constant(&self) -> bool {
        self.frequencies.iter().all(|&k| k == 0)
    }

    pub fn phase(&self, alpha: Phase, x: &TorusPoint) -> Phase {
        alpha.mul_int(self.alpha_multiple as i128)
            + CharacterObservable::new(self.frequencies.clone()).phase(x)
    }

    pub fn mul(&self, other: &TowerLevel) -> TowerLevel {
        TowerLevel {
            alpha_multiple: self.alpha_multiple + other.alpha_multiple,
            frequencies: self
                .frequencies
                .iter()
                .zip(&other.frequencies)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// The level `f ∘ T`, symbolically.
    pub fn after_skew_shift(&self) -> TowerLevel {
        let k = &self.frequencies;
        TowerLevel {
            alpha_multiple: self.alpha_multiple + k[0],
            frequencies: (0..k.len())
                .map(|j| k[j] + k.get(j + 1).copied().unwrap_or(0))
                .collect(),
        }
    }

    /// The multiplier `g` in `f ∘ T = g · f`.
    fn multiplier(&self) -> TowerLevel {
        let k = &self.frequencies;
        TowerLevel {
            alpha_multiple: k[0],
            frequencies: (0..k.len()).map(|j| k.get(j + 1).copied().unwrap_or(0)).collect(),
        }
    }
}

/// Levels `f_0, …, f_k` with `f_0` constant and `f_j ∘ T = f_{j-1} · f_j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuasiEigenTower {
    levels: Vec<TowerLevel>,
}

impl QuasiEigenTower {
    /// The order-0 tower of the constant `e(alpha_multiple · α)`.
    pub fn constant(dim: usize, alpha_multiple: i64) -> Self {
        QuasiEigenTower {
            levels: vec![TowerLevel {
                alpha_multiple,
                frequencies: vec![0; dim],
            }],
        }
    }

    pub fn from_levels(levels: Vec<TowerLevel>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::invalid("a tower needs at least one level"));
        }
        let dim = levels[0].frequencies.len();
        if levels.iter().any(|l| l.frequencies.len() != dim) {
            return Err(Error::invalid("tower levels disagree on dimension"));
        }
        Ok(QuasiEigenTower { levels })
    }

    pub fn order(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn dim(&self) -> usize {
        self.levels[0].frequencies.len()
    }

    pub fn levels(&self) -> &[TowerLevel] {
        &self.levels
    }

    pub fn top(&self) -> &TowerLevel {
        self.levels.last().expect("non-empty")
    }

    /// Checks `f_0` constant and `f_j ∘ T = f_{j-1} · f_j` for every `j`,
    /// exactly on the integer data.
    pub fn identities_hold(&self) -> bool {
        self.levels[0].is_constant()
            && self
                .levels
                .windows(2)
                .all(|w| w[1].after_skew_shift() == w[0].mul(&w[1]))
    }

    /// Level-wise product, aligned at the top and padded with the identity
    /// below the shorter tower.
    pub fn product(&self, other: &QuasiEigenTower) -> Result<QuasiEigenTower> {
        if self.dim() != other.dim() {
            return Err(Error::invalid("towers live on tori of different dimension"));
        }
        let order = self.order().max(other.order());
        let pick = |t: &QuasiEigenTower, j: usize| -> TowerLevel {
            let offset = order - t.order();
            if j < offset {
                TowerLevel::identity(t.dim())
            } else {
                t.levels[j - offset].clone()
            }
        };
        let levels = (0..=order).map(|j| pick(self, j).mul(&pick(other, j))).collect();
        Ok(QuasiEigenTower { levels })
    }

    /// Phases `θ_j` of `f_j(x)`, `j = 0..=k`.
    pub fn level_phases(&self, sys: &SkewShiftSystem, x: &TorusPoint) -> Vec<Phase> {
        self.levels.iter().map(|l| l.phase(sys.alpha(), x)).collect()
    }
}

/// The tower descending from a nonzero character.
pub fn build_tower(sys: &SkewShiftSystem, character: &CharacterObservable) -> Result<QuasiEigenTower> {
    if character.frequencies.len() != sys.dim() {
        return Err(Error::invalid(format!(
            "character has {} frequencies, system dimension is {}",
            character.frequencies.len(),
            sys.dim()
        )));
    }
    if character.is_trivial() {
        return Err(Error::invalid(
            "zero frequency vector: the constant tower is built by QuasiEigenTower::constant",
        ));
    }
    let mut levels = vec![TowerLevel {
        alpha_multiple: 0,
        frequencies: character.frequencies.clone(),
    }];
    while !levels.last().expect("non-empty").is_constant() {
        let below = levels.last().expect("non-empty").multiplier();
        levels.push(below);
    }
    levels.reverse();
    Ok(QuasiEigenTower { levels })
}

fn tower_for(sys: &SkewShiftSystem, character: &CharacterObservable) -> Result<QuasiEigenTower> {
    if character.is_trivial() && character.frequencies.len() == sys.dim() {
        Ok(QuasiEigenTower::constant(sys.dim(), 0))
    } else {
        build_tower(sys, character)
    }
}

/// `Q(z) = Σ_j θ_j C(z, k - j)` with `f(T^n x) = e(Q(n))`.
pub fn tower_phase_polynomial(
    sys: &SkewShiftSystem,
    tower: &QuasiEigenTower,
    x: &TorusPoint,
) -> Result<PhasePolynomial> {
    sys.check_point(x)?;
    if tower.dim() != sys.dim() {
        return Err(Error::invalid("tower and system dimensions differ"));
    }
    let mut newton = tower.level_phases(sys, x);
    newton.reverse();
    PhasePolynomial::from_newton(newton)
}

/// Pairwise gaps between three evaluations of `f(T^n x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorizationDeviation {
    pub orbit_vs_product: f64,
    pub orbit_vs_polynomial: f64,
    pub product_vs_polynomial: f64,
}

impl FactorizationDeviation {
    pub fn max(&self) -> f64 {
        self.orbit_vs_product
            .max(self.orbit_vs_polynomial)
            .max(self.product_vs_polynomial)
    }
}

/// Compares, for `n = 0..=n_max`: the top level evaluated on the iterated
/// orbit, the binomial product `Π_j f_j(x)^{C(n, k-j)}`, and `e(Q(n))`.
pub fn verify_factorization(
    sys: &SkewShiftSystem,
    tower: &QuasiEigenTower,
    x: &TorusPoint,
    n_max: u64,
) -> Result<FactorizationDeviation> {
    if n_max < 1 {
        return Err(Error::invalid("n_max must be at least 1"));
    }
    let q = tower_phase_polynomial(sys, tower, x)?;
    let thetas = tower.level_phases(sys, x);
    let k = tower.order();
    let top = tower.top();
    let mut point = x.clone();
    let mut stream = q.stream();
    let mut dev = FactorizationDeviation {
        orbit_vs_product: 0.0,
        orbit_vs_polynomial: 0.0,
        product_vs_polynomial: 0.0,
    };
    for n in 0..=n_max {
        let orbit = top.phase(sys.alpha(), &point).expi();
        let product: Complex64 = thetas
            .iter()
            .enumerate()
            .map(|(j, theta)| theta.mul_u128(binomial_mod_2_128(n, k - j)).expi())
            .product();
        let poly = stream.next().expect("infinite").expi();
        dev.orbit_vs_product = dev.orbit_vs_product.max((orbit - product).norm());
        dev.orbit_vs_polynomial = dev.orbit_vs_polynomial.max((orbit - poly).norm());
        dev.product_vs_polynomial = dev.product_vs_polynomial.max((product - poly).norm());
        point = sys.step(&point);
    }
    Ok(dev)
}

/// `P = Σ_j Q_j ∘ q_j`, the phase with `F(T^{q_1(n)}x, …) = e(P(n))` for
/// `F` the tensor product of the characters.
pub fn composite_phase(
    sys: &SkewShiftSystem,
    chars: &[CharacterObservable],
    qs: &[TimePolynomial],
    x: &TorusPoint,
) -> Result<PhasePolynomial> {
    if chars.is_empty() {
        return Err(Error::invalid("at least one observable is required (ell >= 1)"));
    }
    if chars.len() != qs.len() {
        return Err(Error::invalid(format!(
            "{} characters but {} time polynomials",
            chars.len(),
            qs.len()
        )));
    }
    let mut total = PhasePolynomial::zero(0)?;
    for (c, q) in chars.iter().zip(qs) {
        let tower = tower_for(sys, c)?;
        let qpoly = tower_phase_polynomial(sys, &tower, x)?;
        total = total.add(&qpoly.compose(q)?);
    }
    Ok(total)
}

/// `(1/N) Σ c_n Π_j χ_j(T^{q_j(n)} x)` at every checkpoint, streamed
/// through the composite phase polynomial.
pub fn multiple_ergodic_average(
    sys: &SkewShiftSystem,
    chars: &[CharacterObservable],
    qs: &[TimePolynomial],
    x: &TorusPoint,
    seq: &ComplexSequence,
    checkpoints: &Checkpoints,
) -> Result<ErgodicAverageSeries> {
    sys.check_point(x)?;
    checkpoints.ensure_within(seq.len())?;
    let phase = composite_phase(sys, chars, qs, x)?;
    for q in qs {
        q.nonnegative_values(checkpoints.last())?;
    }
    weighted_exponential_average(seq, &phase, checkpoints)
}

/// JSON description of a multiple-average experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentDescriptor {
    pub m: usize,
    pub alpha: f64,
    pub x: Vec<f64>,
    pub ell: usize,
    pub chars: Vec<Vec<i64>>,
    /// Time polynomials in the binomial basis.
    pub qs: Vec<Vec<i64>>,
    pub weights: WeightSpec,
    pub checkpoints: Vec<usize>,
}

impl ExperimentDescriptor {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::invalid(format!("experiment descriptor: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("descriptor serialises")
    }

    /// Checks shapes before any computation.
    pub fn validate(&self) -> Result<()> {
        if self.chars.len() != self.ell || self.qs.len() != self.ell {
            return Err(Error::invalid(format!(
                "ell: declared {} but got {} chars and {} qs",
                self.ell,
                self.chars.len(),
                self.qs.len()
            )));
        }
        if self.x.len() != self.m {
            return Err(Error::invalid(format!("x: expected {} coordinates, got {}", self.m, self.x.len())));
        }
        if let Some(c) = self.chars.iter().find(|c| c.len() != self.m) {
            return Err(Error::invalid(format!("chars: {c:?} does not have {} entries", self.m)));
        }
        Checkpoints::new(self.checkpoints.clone())?;
        Ok(())
    }

    pub fn run(&self) -> Result<ErgodicAverageSeries> {
        self.validate()?;
        let sys = SkewShiftSystem::new(self.m, self.alpha)?;
        let x = TorusPoint::from_f64s(&self.x);
        let chars: Vec<CharacterObservable> = self.chars.iter().cloned().map(CharacterObservable::new).collect();
        let qs = self
            .qs
            .iter()
            .cloned()
            .map(TimePolynomial::from_binomial)
            .collect::<Result<Vec<_>>>()?;
        let checkpoints = Checkpoints::new(self.checkpoints.clone())?;
        let seq = self.weights.generate(checkpoints.last())?;
        multiple_ergodic_average(&sys, &chars, &qs, &x, &seq, &checkpoints)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sequences::{mobius_sequence, Provenance};

    fn golden() -> f64 {
        (5f64.sqrt() - 1.0) / 2.0
    }

    #[test]
    fn orbit_examples() {
        let sys = SkewShiftSystem::new(2, 0.1).unwrap();
        let x = TorusPoint::from_f64s(&[0.25, 0.5]);
        assert_eq!(sys.orbit_point(&x, 0).unwrap(), x);
        let y = sys.orbit_point(&x, 4).unwrap().to_f64s();
        assert!((y[0] - 0.65).abs() < 1e-12 && (y[1] - 0.1).abs() < 1e-12, "{y:?}");
        let circle = SkewShiftSystem::new(1, 0.3).unwrap();
        let z = circle.orbit_point(&TorusPoint::from_f64s(&[0.2]), 7).unwrap().to_f64s();
        assert!((z[0] - 0.3).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_iteration() {
        let sys = SkewShiftSystem::new(4, golden()).unwrap();
        let x = TorusPoint::from_f64s(&[0.1, 0.7, 0.33, 0.9]);
        let mut p = x.clone();
        for n in 0..=1000u64 {
            assert_eq!(sys.orbit_point(&x, n).unwrap(), p, "n = {n}");
            p = sys.step(&p);
        }
    }

    #[test]
    fn tower_examples() {
        let sys = SkewShiftSystem::new(2, 0.1).unwrap();
        let t = build_tower(&sys, &CharacterObservable::new(vec![0, 1])).unwrap();
        assert_eq!(t.order(), 2);
        assert_eq!(t.levels()[2].frequencies, vec![0, 1]);
        assert_eq!(t.levels()[1], TowerLevel { alpha_multiple: 0, frequencies: vec![1, 0] });
        assert_eq!(t.levels()[0], TowerLevel { alpha_multiple: 1, frequencies: vec![0, 0] });
        assert!(t.identities_hold());

        let e = build_tower(&sys, &CharacterObservable::new(vec![1, 0])).unwrap();
        assert_eq!(e.order(), 1);
        assert_eq!(e.levels()[0].alpha_multiple, 1);

        let sys3 = SkewShiftSystem::new(3, 0.1).unwrap();
        assert_eq!(build_tower(&sys3, &CharacterObservable::new(vec![0, 0, 1])).unwrap().order(), 3);
        assert!(build_tower(&sys, &CharacterObservable::new(vec![0, 0])).is_err());
    }

    #[test]
    fn phase_polynomial_examples() {
        let sys = SkewShiftSystem::new(2, 0.1).unwrap();
        let x = TorusPoint::from_f64s(&[0.25, 0.5]);
        let t = build_tower(&sys, &CharacterObservable::new(vec![0, 1])).unwrap();
        let q = tower_phase_polynomial(&sys, &t, &x).unwrap();
        assert!((q.phase_at(4) - 0.1).abs() < 1e-12);
        let n = q.newton_coefficients();
        assert_eq!((n[0].to_f64(), n[1].to_f64(), n[2].to_f64()), (0.5, 0.25, 0.1));

        let origin = TorusPoint::from_f64s(&[0.0, 0.0]);
        let q0 = tower_phase_polynomial(&sys, &t, &origin).unwrap();
        assert_eq!(q0.newton_coefficients()[..2], [Phase::ZERO, Phase::ZERO]);

        let e = build_tower(&sys, &CharacterObservable::new(vec![1, 0])).unwrap();
        let q1 = tower_phase_polynomial(&sys, &e, &x).unwrap();
        assert_eq!(q1.degree(), 1);
        let m = q1.monomial_coefficients();
        assert!((m[0] - 0.25).abs() < 1e-15 && (m[1] - 0.1).abs() < 1e-15);
    }

    #[test]
    fn factorization_small_n() {
        let sys = SkewShiftSystem::new(3, golden()).unwrap();
        let x = TorusPoint::from_f64s(&[0.3, 0.6, 0.9]);
        let t = build_tower(&sys, &CharacterObservable::new(vec![2, -1, 3])).unwrap();
        // n < k: the f_0 exponent C(n, k) vanishes and the identity still holds
        assert!(verify_factorization(&sys, &t, &x, 2).unwrap().max() < 1e-12);
        let sys2 = SkewShiftSystem::new(2, golden()).unwrap();
        let t2 = build_tower(&sys2, &CharacterObservable::new(vec![0, 1])).unwrap();
        let x2 = TorusPoint::from_f64s(&[0.25, 0.5]);
        assert!(verify_factorization(&sys2, &t2, &x2, 1000).unwrap().max() <= 1e-9);
    }

    #[test]
    fn tower_products_stay_valid() {
        let sys = SkewShiftSystem::new(3, golden()).unwrap();
        let a = build_tower(&sys, &CharacterObservable::new(vec![1, 2, 0])).unwrap();
        let b = build_tower(&sys, &CharacterObservable::new(vec![0, -1, 4])).unwrap();
        let ab = a.product(&b).unwrap();
        assert!(ab.identities_hold());
        assert!(ab.order() <= a.order().max(b.order()));
        let inverse = build_tower(&sys, &CharacterObservable::new(vec![-1, -2, 0])).unwrap();
        assert!(a.product(&inverse).unwrap().identities_hold());
    }

    #[test]
    fn constant_observables_average_to_one() {
        let sys = SkewShiftSystem::new(2, golden()).unwrap();
        let x = TorusPoint::from_f64s(&[0.1, 0.2]);
        let ones = ComplexSequence::from_real(&[1.0; 500], Provenance::Derived { description: "ones".into() }).unwrap();
        let chars = vec![CharacterObservable::new(vec![0, 0]); 2];
        let qs = vec![TimePolynomial::identity(), TimePolynomial::power(2)];
        let cps = Checkpoints::new(vec![10, 500]).unwrap();
        let avg = multiple_ergodic_average(&sys, &chars, &qs, &x, &ones, &cps).unwrap();
        assert!(avg.averages.iter().all(|z| (z - Complex64::new(1.0, 0.0)).norm() < 1e-12));
    }

    #[test]
    fn conjugate_weights_cancel() {
        let sys = SkewShiftSystem::new(2, golden()).unwrap();
        let x = TorusPoint::from_f64s(&[0.3, 0.8]);
        let chars = vec![CharacterObservable::new(vec![0, 1]); 2];
        let qs = vec![TimePolynomial::identity(), TimePolynomial::power(2)];
        let p = composite_phase(&sys, &chars, &qs, &x).unwrap();
        let n = 20_000;
        let weights: Vec<Complex64> = p.neg().stream().take(n).map(Phase::expi).collect();
        let seq = ComplexSequence::new(weights, Provenance::Derived { description: "conjugate".into() }).unwrap();
        let cps = Checkpoints::new(vec![n]).unwrap();
        let avg = multiple_ergodic_average(&sys, &chars, &qs, &x, &seq, &cps).unwrap();
        assert!((avg.last() - Complex64::new(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn matches_direct_orbit_evaluation() {
        let sys = SkewShiftSystem::new(3, golden()).unwrap();
        let x = TorusPoint::from_f64s(&[0.12, 0.34, 0.56]);
        let chars = vec![CharacterObservable::new(vec![1, 0, 2]), CharacterObservable::new(vec![0, 3, -1])];
        let qs = vec![TimePolynomial::from_monomial(&[1, 2]).unwrap(), TimePolynomial::power(2)];
        let seq = mobius_sequence(1500).unwrap();
        let cps = Checkpoints::new(vec![1500]).unwrap();
        let fast = multiple_ergodic_average(&sys, &chars, &qs, &x, &seq, &cps).unwrap().last();
        let mut direct = Complex64::new(0.0, 0.0);
        for n in 0..1500u64 {
            let mut term = seq.values()[n as usize];
            for (c, q) in chars.iter().zip(&qs) {
                let t = q.eval(n).unwrap() as u64;
                term *= c.eval(&sys.orbit_point(&x, t).unwrap());
            }
            direct += term;
        }
        direct /= 1500.0;
        assert!((fast - direct).norm() < 1e-10, "{fast} vs {direct}");
    }

    #[test]
    fn degree_law() {
        let sys = SkewShiftSystem::new(3, golden()).unwrap();
        let x = TorusPoint::from_f64s(&[0.3, 0.1, 0.4]);
        let t = build_tower(&sys, &CharacterObservable::new(vec![0, 0, 1])).unwrap();
        let q = tower_phase_polynomial(&sys, &t, &x).unwrap();
        for (qt, delta) in [(TimePolynomial::identity(), 1), (TimePolynomial::power(2), 2)] {
            let composed = q.compose(&qt).unwrap();
            assert_eq!(composed.degree(), t.order() * delta);
            assert_eq!(composed.effective_degree(), t.order() * delta);
        }
    }

    #[test]
    fn negative_time_is_rejected() {
        let sys = SkewShiftSystem::new(1, golden()).unwrap();
        let x = TorusPoint::from_f64s(&[0.0]);
        let seq = mobius_sequence(100).unwrap();
        let q = TimePolynomial::from_monomial(&[5, -1]).unwrap();
        let err = multiple_ergodic_average(
            &sys,
            &[CharacterObservable::new(vec![1])],
            &[q],
            &x,
            &seq,
            &Checkpoints::new(vec![100]).unwrap(),
        )
        .unwrap_err();
        assert!(err.to_string().contains("n = 6"), "{err}");
    }

    #[test]
    fn descriptor_round_trip() {
        let d = ExperimentDescriptor {
            m: 2,
            alpha: golden(),
            x: vec![0.0, 0.0],
            ell: 2,
            chars: vec![vec![0, 1], vec![0, 1]],
            qs: vec![vec![0, 1], vec![0, 1, 2]],
            weights: WeightSpec::Mobius,
            checkpoints: vec![1000, 2000],
        };
        let back = ExperimentDescriptor::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.run().unwrap().checkpoints, vec![1000, 2000]);
        let mut bad = d.clone();
        bad.ell = 3;
        assert!(bad.validate().is_err());
    }
}
