//! Möbius function tables.

use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Largest table a single sieve call will build.
pub const SIEVE_CAP: usize = 200_000_000;

/// Linear sieve over `1..=n_max` storing smallest prime factors and μ.
#[derive(Clone, Debug)]
pub struct Sieve {
    spf: Vec<u32>,
    mu: Vec<i8>,
    primes: Vec<u32>,
}

impl Sieve {
    pub fn new(n_max: usize) -> Result<Self> {
        check_size(n_max as u64)?;
        let mut spf = vec![0u32; n_max + 1];
        let mut mu = vec![0i8; n_max + 1];
        let mut primes = Vec::new();
        mu[1] = 1;
        for i in 2..=n_max {
            if spf[i] == 0 {
                spf[i] = i as u32;
                mu[i] = -1;
                primes.push(i as u32);
            }
            for &p in &primes {
                let m = i * p as usize;
                if p > spf[i] || m > n_max {
                    break;
                }
                spf[m] = p;
                mu[m] = if p == spf[i] { 0 } else { -mu[i] };
            }
        }
        Ok(Sieve { spf, mu, primes })
    }

    pub fn n_max(&self) -> usize {
        self.mu.len() - 1
    }

    /// μ(n) for `1 <= n <= n_max`.
    pub fn mu(&self, n: usize) -> Option<i8> {
        if n == 0 {
            None
        } else {
            self.mu.get(n).copied()
        }
    }

    pub fn smallest_prime_factor(&self, n: usize) -> Option<u32> {
        if n < 2 {
            None
        } else {
            self.spf.get(n).copied()
        }
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    /// μ(1), …, μ(n_max).
    pub fn mobius(&self) -> &[i8] {
        &self.mu[1..]
    }

    pub fn into_mobius(mut self) -> Vec<i8> {
        self.mu.remove(0);
        self.mu
    }
}

fn check_size(n: u64) -> Result<()> {
    if n == 0 || n > SIEVE_CAP as u64 {
        return Err(Error::Size { what: "sieve length", requested: n, cap: SIEVE_CAP as u64 });
    }
    Ok(())
}

/// μ(n) for `n = 1..=n_max`.
pub fn mobius_sieve(n_max: usize) -> Result<Vec<i8>> {
    Ok(Sieve::new(n_max)?.into_mobius())
}

/// μ(n) for `n = start..start+len`, by a segmented sieve using primes up to
/// `sqrt(start+len-1)`. Windows far from the origin cost `O(len)` memory.
pub fn mobius_range(start: u64, len: usize) -> Result<Vec<i8>> {
    if start == 0 {
        return Err(Error::Range { what: "sample start", index: 0, bound: 1 });
    }
    check_size(len as u64)?;
    let end = start
        .checked_add(len as u64 - 1)
        .ok_or(Error::Size { what: "window end", requested: u64::MAX, cap: u64::MAX })?;
    let root = isqrt(end) as usize;
    let primes = if root >= 2 { Sieve::new(root)?.primes } else { Vec::new() };

    let mut rem: Vec<u64> = (start..=end).collect();
    let mut mu = vec![1i8; len];
    for &p in &primes {
        let p = p as u64;
        let first = start.div_ceil(p) * p;
        let mut m = first;
        while m <= end {
            let idx = (m - start) as usize;
            if (m / p).is_multiple_of(p) {
                mu[idx] = 0;
            } else {
                mu[idx] = -mu[idx];
            }
            rem[idx] /= p;
            m += p;
        }
    }
    for (m, r) in mu.iter_mut().zip(&rem) {
        if *r > 1 {
            *m = -*m;
        }
    }
    Ok(mu)
}

pub(crate) fn isqrt(n: u64) -> u64 {
    let mut r = libm::sqrt(n as f64) as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n.is_multiple_of(f) {
            return false;
        }
        f += 2;
    }
    true
}
