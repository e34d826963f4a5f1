use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequences::ComplexSequence;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPeak {
    pub frequency: f64,
    pub modulus: f64,
}

/// `X_j = Σ_k x_k e(k j / m)` for `j = 0..m`, by folding the input modulo
/// `m` and running one inverse FFT of length `m`.
pub fn fold_dft(values: impl IntoIterator<Item = Complex64>, m: usize) -> Vec<Complex64> {
    let mut folded = vec![Complex64::new(0.0, 0.0); m];
    let mut slot = 0;
    for z in values {
        folded[slot] += z;
        slot += 1;
        if slot == m {
            slot = 0;
        }
    }
    FftPlanner::new().plan_fft_inverse(m).process(&mut folded);
    folded
}

/// Order-1 averages `|(1/N) Σ_{n<N} c_n e(n j / M)|` on the grid `j/M`,
/// sorted by decreasing modulus (ties by increasing frequency).
pub fn fourier_bohr_scan(seq: &ComplexSequence, m: usize, n: usize) -> Result<Vec<SpectralPeak>> {
    if m < 2 {
        return Err(Error::invalid(format!("fourier_bohr_scan: M = {m} must be at least 2")));
    }
    super::require_length(seq, n)?;
    let spectrum = fold_dft(seq.values()[..n].iter().copied(), m);
    let mut peaks: Vec<SpectralPeak> = spectrum
        .iter()
        .enumerate()
        .map(|(j, z)| SpectralPeak {
            frequency: j as f64 / m as f64,
            modulus: z.norm() / n as f64,
        })
        .collect();
    peaks.sort_by(|a, b| {
        b.modulus
            .total_cmp(&a.modulus)
            .then(a.frequency.total_cmp(&b.frequency))
    });
    Ok(peaks)
}
