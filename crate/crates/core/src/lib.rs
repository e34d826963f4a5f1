//! Numerical laboratory for oscillating sequences of higher orders.
//!
//! The crate computes weighted exponential averages `(1/N) Σ c_n e(P(n))`
//! against real polynomial phases, estimates the oscillation order of a
//! weight sequence, and realises weighted multiple ergodic averages over
//! two concrete families of dynamical systems: skew shifts on the m-torus
//! (quasi-discrete spectrum of order m) and affine maps on the p-adic
//! integers (adding machines on their minimal components).
//!
//! All phases are stored as 128-bit binary fractions of the circle
//! ([`Phase`]), so polynomial phases, torus orbits and tower identities are
//! exact modulo 1; floating point only enters when a phase is turned into a
//! unit complex number.

pub mod cli;
pub mod error;
pub mod oscillation;
pub mod padic;
pub mod phase;
pub mod polyphase;
pub mod probabilistic;
pub mod sequences;
pub mod torus;

pub use error::{Error, Result};
pub use phase::Phase;
