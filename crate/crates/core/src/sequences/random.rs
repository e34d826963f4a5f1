//! Counter-based random weights.
//!
//! Entry `i` of a Rademacher sequence is the low bit of word `i` of the
//! ChaCha8 keystream for `seed`. ChaCha is a counter-mode cipher, so the
//! same entry is reachable by seeking directly to word `i`; sequential and
//! random-access generation agree bit for bit.

use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{ComplexSequence, Provenance};
use crate::error::{Error, Result};

fn sign_of(word: u32) -> f64 {
    if word & 1 == 1 {
        1.0
    } else {
        -1.0
    }
}

fn signs(seed: u64, n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::invalid("rademacher_sequence: N must be at least 1"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n).map(|_| sign_of(rng.next_u32())).collect())
}

/// Entry `index` of `rademacher_sequence(seed, _)`, computed in isolation.
pub fn rademacher_value(seed: u64, index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_word_pos(index as u128);
    sign_of(rng.next_u32())
}

pub fn rademacher_sequence(seed: u64, n: usize) -> Result<ComplexSequence> {
    ComplexSequence::from_real(&signs(seed, n)?, Provenance::Rademacher { seed })
}

/// `scale · ε_n` with the same signs as `rademacher_sequence(seed, n)`.
pub fn scaled_rademacher_sequence(scale: f64, seed: u64, n: usize) -> Result<ComplexSequence> {
    if !scale.is_finite() {
        return Err(Error::invalid("scale must be finite"));
    }
    let values: Vec<f64> = signs(seed, n)?.into_iter().map(|s| scale * s).collect();
    ComplexSequence::from_real(&values, Provenance::ScaledRademacher { scale, seed })
}

/// Entry `index` of the standard Gaussian sequence: one normal draw from
/// ChaCha8 stream number `index` under key `seed`.
pub fn gaussian_value(seed: u64, index: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.sample(StandardNormal)
}

pub fn gaussian_sequence(seed: u64, n: usize) -> Result<ComplexSequence> {
    if n == 0 {
        return Err(Error::invalid("gaussian_sequence: N must be at least 1"));
    }
    let values = (0..n as u64)
        .map(|i| Complex64::new(gaussian_value(seed, i), 0.0))
        .collect();
    ComplexSequence::new(values, Provenance::Gaussian { seed })
}
