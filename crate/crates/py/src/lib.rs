//! Python bindings for `oscillab`.
//!
//! Sequences, phase polynomials, skew shifts, p-adic affine maps and the
//! averaging routines are exposed as classes and functions; reports that
//! have a JSON form come back as plain dicts.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex64;
use pyo3::exceptions::{PyMemoryError, PyOSError, PyOverflowError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyAny;

use oscillab::oscillation::{classify_exact_order, estimate_oscillation_profile, ProfileOptions};
use oscillab::padic::{orbit_residue_census, padic_weighted_average, PadicAffineSystem, PadicNumber};
use oscillab::polyphase::{weighted_exponential_average, PhasePolynomial};
use oscillab::probabilistic::{lsk_empirical_sup, subnormality_margin, Distribution, RandomSequenceSpec};
use oscillab::sequences::{self, Checkpoints, ComplexSequence, Provenance, WeightSpec};
use oscillab::torus::{
    build_tower, tower_phase_polynomial, verify_factorization, CharacterObservable, ExperimentDescriptor,
    QuasiEigenTower, SkewShiftSystem, TimePolynomial, TorusPoint,
};
use oscillab::{Error, Phase};

fn py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::InvalidArgument(_) | Error::Parse { .. } | Error::Unsupported(_) => PyValueError::new_err(msg),
        Error::Range(_) => PyOverflowError::new_err(msg),
        Error::Resource(_) => PyMemoryError::new_err(msg),
        Error::Io { .. } => PyOSError::new_err(msg),
    }
}

trait OrPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> OrPy<T> for oscillab::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

fn checkpoints(values: Vec<usize>) -> PyResult<Checkpoints> {
    Checkpoints::new(values).py()
}

fn json_to_py<'py>(py: Python<'py>, text: &str) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (text,))
}

fn distribution(name: &str, scale: Option<f64>) -> PyResult<Distribution> {
    match name {
        "rademacher" => Ok(Distribution::Rademacher),
        "scaled-rademacher" => Ok(Distribution::ScaledRademacher {
            scale: scale.ok_or_else(|| PyValueError::new_err("scale: required for scaled-rademacher"))?,
        }),
        "standard-gaussian" | "gaussian" => Ok(Distribution::StandardGaussian),
        other => Err(PyValueError::new_err(format!("distribution: unknown distribution '{other}'"))),
    }
}

/// A finite weight sequence c_0, ..., c_{N-1}.
#[pyclass(name = "Sequence", module = "oscillab_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySequence(ComplexSequence);

#[pymethods]
impl PySequence {
    #[new]
    fn new(values: Vec<Complex64>) -> PyResult<Self> {
        ComplexSequence::new(values, Provenance::Derived { description: "python".into() })
            .py()
            .map(PySequence)
    }

    #[staticmethod]
    fn mobius(n: usize) -> PyResult<Self> {
        sequences::mobius_sequence(n).py().map(PySequence)
    }

    #[staticmethod]
    fn liouville(n: usize) -> PyResult<Self> {
        sequences::liouville_sequence(n).py().map(PySequence)
    }

    #[staticmethod]
    fn polynomial_phase(alpha: f64, power: u32, n: usize) -> PyResult<Self> {
        sequences::polynomial_phase_sequence(alpha, power, n).py().map(PySequence)
    }

    #[staticmethod]
    fn rademacher(seed: u64, n: usize) -> PyResult<Self> {
        sequences::rademacher_sequence(seed, n).py().map(PySequence)
    }

    #[staticmethod]
    fn gaussian(seed: u64, n: usize) -> PyResult<Self> {
        sequences::gaussian_sequence(seed, n).py().map(PySequence)
    }

    #[staticmethod]
    fn read(path: &str) -> PyResult<Self> {
        sequences::read_sequence(path).py().map(PySequence)
    }

    fn write(&self, path: &str) -> PyResult<()> {
        sequences::write_sequence(path, &self.0).py()
    }

    fn values(&self) -> Vec<Complex64> {
        self.0.values().to_vec()
    }

    #[getter]
    fn provenance(&self) -> String {
        self.0.provenance().to_string()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Sequence(len={}, provenance={})", self.0.len(), self.0.provenance())
    }
}

/// Real polynomial phase, exact modulo 1.
#[pyclass(name = "PhasePolynomial", module = "oscillab_py", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPhasePolynomial(PhasePolynomial);

#[pymethods]
impl PyPhasePolynomial {
    /// Coefficients of 1, z, z^2, ...
    #[new]
    fn new(coeffs: Vec<f64>) -> PyResult<Self> {
        PhasePolynomial::from_monomial(&coeffs).py().map(PyPhasePolynomial)
    }

    /// Coefficients of C(z,0), C(z,1), ...
    #[staticmethod]
    fn from_newton(coeffs: Vec<f64>) -> PyResult<Self> {
        PhasePolynomial::from_newton(coeffs.into_iter().map(Phase::from_f64).collect())
            .py()
            .map(PyPhasePolynomial)
    }

    #[getter]
    fn degree(&self) -> usize {
        self.0.effective_degree()
    }

    fn monomial_coefficients(&self) -> Vec<f64> {
        self.0.monomial_coefficients()
    }

    fn newton_coefficients(&self) -> Vec<f64> {
        self.0.newton_coefficients().iter().map(|p| p.to_f64()).collect()
    }

    /// P(n) mod 1.
    fn __call__(&self, n: u64) -> f64 {
        self.0.phase_at(n)
    }

    /// P(q(z)) for an integer-valued time polynomial q = Σ q_k C(z, k).
    fn compose(&self, q: Vec<i64>) -> PyResult<Self> {
        let q = TimePolynomial::from_binomial(q).py()?;
        self.0.compose(&q).py().map(PyPhasePolynomial)
    }

    fn __add__(&self, other: &PyPhasePolynomial) -> Self {
        PyPhasePolynomial(self.0.add(&other.0))
    }

    fn __neg__(&self) -> Self {
        PyPhasePolynomial(self.0.neg())
    }

    fn __repr__(&self) -> String {
        format!("PhasePolynomial({:?})", self.0.monomial_coefficients())
    }
}

/// (1/N) Σ_{n<N} c_n e(P(n)) at each checkpoint N.
#[pyfunction]
fn weighted_average(seq: &PySequence, poly: &PyPhasePolynomial, checkpoints_: Vec<usize>) -> PyResult<Vec<Complex64>> {
    let cps = checkpoints(checkpoints_)?;
    Ok(weighted_exponential_average(&seq.0, &poly.0, &cps).py()?.averages)
}

/// Sup over degree-d phases per checkpoint; returns the report as a list of dicts
/// and the classified order.
#[pyfunction]
#[pyo3(signature = (seq, d_max, checkpoints_, grid=None, refine=true))]
fn estimate_order<'py>(
    py: Python<'py>,
    seq: &PySequence,
    d_max: usize,
    checkpoints_: Vec<usize>,
    grid: Option<usize>,
    refine: bool,
) -> PyResult<(Bound<'py, PyAny>, String)> {
    let cps = checkpoints(checkpoints_)?;
    let options = ProfileOptions {
        grid_per_dim: grid,
        refine,
        ..ProfileOptions::default()
    };
    let report = py.detach(|| estimate_oscillation_profile(&seq.0, d_max, &cps, &options)).py()?;
    Ok((json_to_py(py, &report.to_json())?, classify_exact_order(&report).to_string()))
}

/// Quasi-eigenfunction tower of a character under a skew shift.
#[pyclass(name = "Tower", module = "oscillab_py", frozen, skip_from_py_object)]
struct PyTower(QuasiEigenTower);

#[pymethods]
impl PyTower {
    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    fn identities_hold(&self) -> bool {
        self.0.identities_hold()
    }

    /// Level k as (multiple of alpha, integer frequencies).
    fn levels(&self) -> Vec<(i64, Vec<i64>)> {
        self.0
            .levels()
            .iter()
            .map(|l| (l.alpha_multiple, l.frequencies.clone()))
            .collect()
    }
}

/// T(x_1, ..., x_m) = (x_1 + alpha, x_2 + x_1, ..., x_m + x_{m-1}).
#[pyclass(name = "SkewShift", module = "oscillab_py", frozen, skip_from_py_object)]
struct PySkewShift(SkewShiftSystem);

impl PySkewShift {
    fn point(&self, x: &[f64]) -> PyResult<TorusPoint> {
        if x.len() != self.0.dim() {
            return Err(PyValueError::new_err(format!(
                "x: expected {} coordinates, got {}",
                self.0.dim(),
                x.len()
            )));
        }
        Ok(TorusPoint::from_f64s(x))
    }

    fn tower_of(&self, character: Vec<i64>) -> PyResult<QuasiEigenTower> {
        let character = CharacterObservable::new(character);
        if character.is_trivial() {
            Ok(QuasiEigenTower::constant(self.0.dim(), 0))
        } else {
            build_tower(&self.0, &character).py()
        }
    }
}

#[pymethods]
impl PySkewShift {
    #[new]
    fn new(m: usize, alpha: f64) -> PyResult<Self> {
        SkewShiftSystem::new(m, alpha).py().map(PySkewShift)
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn step(&self, x: Vec<f64>) -> PyResult<Vec<f64>> {
        Ok(self.0.step(&self.point(&x)?).to_f64s())
    }

    /// T^n x in closed form.
    fn orbit_point(&self, x: Vec<f64>, n: u64) -> PyResult<Vec<f64>> {
        Ok(self.0.orbit_point(&self.point(&x)?, n).py()?.to_f64s())
    }

    fn tower(&self, character: Vec<i64>) -> PyResult<PyTower> {
        self.tower_of(character).map(PyTower)
    }

    /// Q with chi(T^n x) = e(Q(n)).
    fn phase_polynomial(&self, character: Vec<i64>, x: Vec<f64>) -> PyResult<PyPhasePolynomial> {
        let tower = self.tower_of(character)?;
        tower_phase_polynomial(&self.0, &tower, &self.point(&x)?)
            .py()
            .map(PyPhasePolynomial)
    }

    /// Largest gap between orbit, tower product and e(Q(n)) for n <= n_max.
    fn factorization_deviation(&self, character: Vec<i64>, x: Vec<f64>, n_max: u64) -> PyResult<f64> {
        let tower = self.tower_of(character)?;
        Ok(verify_factorization(&self.0, &tower, &self.point(&x)?, n_max).py()?.max())
    }
}

/// Runs a multiple-average experiment descriptor given as JSON text.
#[pyfunction]
fn multiple_average(py: Python<'_>, descriptor: &str) -> PyResult<Vec<Complex64>> {
    let d = ExperimentDescriptor::from_json(descriptor).py()?;
    d.validate().py()?;
    Ok(py.detach(|| d.run()).py()?.averages)
}

/// x -> a x + b on Z_p, kept to K digits.
#[pyclass(name = "PadicAffine", module = "oscillab_py", frozen, skip_from_py_object)]
struct PyPadicAffine(PadicAffineSystem);

impl PyPadicAffine {
    fn number(&self, x: &BigInt) -> PyResult<PadicNumber> {
        PadicNumber::from_bigint(self.0.prime(), self.0.precision(), x).py()
    }
}

#[pymethods]
impl PyPadicAffine {
    #[new]
    #[pyo3(signature = (p, a, b, precision=oscillab::padic::DEFAULT_PRECISION))]
    fn new(p: u64, a: BigInt, b: BigInt, precision: usize) -> PyResult<Self> {
        PadicAffineSystem::from_integers(p, precision, &a, &b)
            .py()
            .map(PyPadicAffine)
    }

    #[getter]
    fn p(&self) -> u64 {
        self.0.prime()
    }

    #[getter]
    fn precision(&self) -> usize {
        self.0.precision()
    }

    fn is_minimal(&self) -> PyResult<bool> {
        self.0.is_minimal().py()
    }

    /// a x + b mod p^K, as a nonnegative integer.
    fn __call__(&self, x: BigInt) -> PyResult<BigInt> {
        let y = self.0.eval(&self.number(&x)?).py()?;
        Ok(BigInt::from(y.to_biguint()))
    }

    /// Visits per residue class mod p^level over `steps` steps from x0.
    fn census(&self, x0: BigInt, level: usize, steps: u64) -> PyResult<BTreeMap<u64, u64>> {
        orbit_residue_census(&self.0, &self.number(&x0)?, level, steps).py()
    }

    /// Weighted average of cylinder characters along T^{q_i(n)} x0; each q
    /// is given by its coefficients in the basis C(n, k).
    fn weighted_average(
        &self,
        py: Python<'_>,
        seq: &PySequence,
        x0: BigInt,
        level: usize,
        qs: Vec<Vec<i64>>,
        checkpoints_: Vec<usize>,
    ) -> PyResult<Vec<Complex64>> {
        let qs = qs
            .iter()
            .map(|q| TimePolynomial::from_binomial(q.clone()))
            .collect::<oscillab::Result<Vec<_>>>()
            .py()?;
        let cps = checkpoints(checkpoints_)?;
        let x0 = self.number(&x0)?;
        let series = py.detach(|| padic_weighted_average(&self.0, level, &x0, &qs, &seq.0, &cps)).py()?;
        Ok(series.averages)
    }
}

/// Λ(λ) - λ²/2 on a grid of λ; a negative margin means not subnormal.
#[pyfunction]
#[pyo3(signature = (distribution_, lambdas, scale=None))]
fn subnormal_margins(distribution_: &str, lambdas: Vec<f64>, scale: Option<f64>) -> PyResult<Vec<(f64, f64)>> {
    subnormality_margin(&distribution(distribution_, scale)?, &lambdas).py()
}

/// (N, sup, sup / sqrt(N log N)) for one random sequence and degree d.
#[pyfunction]
#[pyo3(signature = (distribution_, seed, d, checkpoints_, grid=16, scale=None))]
fn lsk_sup(
    py: Python<'_>,
    distribution_: &str,
    seed: u64,
    d: usize,
    checkpoints_: Vec<usize>,
    grid: usize,
    scale: Option<f64>,
) -> PyResult<Vec<(usize, f64, f64)>> {
    let cps = checkpoints(checkpoints_)?;
    let spec = RandomSequenceSpec::new(distribution(distribution_, scale)?, seed, cps.last()).py()?;
    let points = py.detach(|| lsk_empirical_sup(&spec, d, &cps, grid)).py()?;
    Ok(points.iter().map(|p| (p.n, p.sup, p.ratio())).collect())
}

/// Builds a sequence from a weight spec given as JSON text.
#[pyfunction]
fn generate(spec: &str, n: usize) -> PyResult<PySequence> {
    WeightSpec::from_json(spec).py()?.generate(n).py().map(PySequence)
}

#[pymodule]
pub fn oscillab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PySequence>()?;
    m.add_class::<PyPhasePolynomial>()?;
    m.add_class::<PySkewShift>()?;
    m.add_class::<PyTower>()?;
    m.add_class::<PyPadicAffine>()?;
    m.add_function(wrap_pyfunction!(weighted_average, m)?)?;
    m.add_function(wrap_pyfunction!(estimate_order, m)?)?;
    m.add_function(wrap_pyfunction!(multiple_average, m)?)?;
    m.add_function(wrap_pyfunction!(subnormal_margins, m)?)?;
    m.add_function(wrap_pyfunction!(lsk_sup, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    Ok(())
}
