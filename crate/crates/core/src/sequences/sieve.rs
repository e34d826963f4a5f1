//! Linear (Euler) sieve over `1..=limit`.

/// Smallest-prime-factor table produced by a linear sieve. Every composite
/// is crossed out exactly once, by its smallest prime factor.
#[derive(Debug, Clone)]
pub struct Sieve {
    spf: Vec<u32>,
    primes: Vec<u32>,
}

impl Sieve {
    pub fn new(limit: usize) -> Self {
        assert!(limit < u32::MAX as usize, "sieve limit must fit in u32");
        let mut spf = vec![0u32; limit + 1];
        let mut primes = Vec::new();
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                primes.push(i as u32);
            }
            let smallest = spf[i];
            for &p in &primes {
                if p > smallest {
                    break;
                }
                let multiple = i * p as usize;
                if multiple > limit {
                    break;
                }
                spf[multiple] = p;
            }
        }
        Sieve { spf, primes }
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// Smallest prime factor of `n >= 2`.
    pub fn smallest_prime_factor(&self, n: usize) -> u32 {
        self.spf[n]
    }

    /// `μ(n)` for `n = 0..=limit` (slot 0 is unused and holds 0).
    pub fn mobius(&self) -> Vec<i8> {
        let mut mu = vec![0i8; self.spf.len()];
        if mu.len() > 1 {
            mu[1] = 1;
        }
        for n in 2..mu.len() {
            let p = self.spf[n] as usize;
            let m = n / p;
            mu[n] = if m.is_multiple_of(p) { 0 } else { -mu[m] };
        }
        mu
    }

    /// Liouville `λ(n) = (-1)^Ω(n)` for `n = 0..=limit` (slot 0 holds 0).
    pub fn liouville(&self) -> Vec<i8> {
        let mut lambda = vec![0i8; self.spf.len()];
        if lambda.len() > 1 {
            lambda[1] = 1;
        }
        for n in 2..lambda.len() {
            lambda[n] = -lambda[n / self.spf[n] as usize];
        }
        lambda
    }
}
