//! Finite-valued potential sequences `v_n = λ ω_n`, `n >= 1`.
//!
//! Every generator is random-access: sampling a window `[start, start+len)`
//! never depends on what was sampled before, so overlapping windows agree.

mod parse;
mod sieve;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::{Error, Result};

pub use parse::parse_kind;
pub use sieve::{mobius_range, mobius_sieve, Sieve, SIEVE_CAP};

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum PotentialKind {
    /// `ω_n = μ(n)`.
    Moebius,
    /// `ω_n = word[(n-1) mod len]`.
    Periodic(Vec<f64>),
    /// `ω_n = values[1]` with probability `prob`, else `values[0]`, drawn
    /// independently per site from a counter-based stream keyed by `seed`.
    Bernoulli { prob: f64, values: [f64; 2], seed: u64 },
    /// `ω ≡ 0`.
    Free,
    /// `ω_n = values[n-1]`; sampling past the end is a range error.
    Custom(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PotentialSpec {
    kind: PotentialKind,
    lambda: f64,
}

/// `values[i] = v_{start+i}`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PotentialWindow {
    start: u64,
    values: Vec<f64>,
    alphabet_bound: usize,
}

const BERNOULLI_CHUNK: usize = 1 << 12;

impl PotentialSpec {
    pub fn new(kind: PotentialKind, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::input("coupling must be finite"));
        }
        match &kind {
            PotentialKind::Free => {}
            _ if lambda == 0.0 => {
                return Err(Error::input("coupling must be nonzero for a non-free potential"))
            }
            PotentialKind::Periodic(word) => {
                if word.is_empty() {
                    return Err(Error::input("periodic word is empty"));
                }
                if word.iter().any(|w| !w.is_finite()) {
                    return Err(Error::input("periodic word has a non-finite entry"));
                }
            }
            PotentialKind::Bernoulli { prob, values, .. } => {
                if !(0.0..=1.0).contains(prob) {
                    return Err(Error::input("bernoulli probability outside [0, 1]"));
                }
                if values.iter().any(|w| !w.is_finite()) {
                    return Err(Error::input("bernoulli values must be finite"));
                }
            }
            PotentialKind::Custom(values) => {
                if values.is_empty() {
                    return Err(Error::input("custom potential is empty"));
                }
                if values.iter().any(|w| !w.is_finite()) {
                    return Err(Error::input("custom potential has a non-finite entry"));
                }
            }
            PotentialKind::Moebius => {}
        }
        Ok(PotentialSpec { kind, lambda })
    }

    pub fn moebius(lambda: f64) -> Result<Self> {
        Self::new(PotentialKind::Moebius, lambda)
    }

    pub fn free() -> Self {
        PotentialSpec { kind: PotentialKind::Free, lambda: 1.0 }
    }

    pub fn periodic(word: Vec<f64>, lambda: f64) -> Result<Self> {
        Self::new(PotentialKind::Periodic(word), lambda)
    }

    pub fn bernoulli(prob: f64, values: [f64; 2], seed: u64, lambda: f64) -> Result<Self> {
        Self::new(PotentialKind::Bernoulli { prob, values, seed }, lambda)
    }

    pub fn custom(values: Vec<f64>, lambda: f64) -> Result<Self> {
        Self::new(PotentialKind::Custom(values), lambda)
    }

    pub fn kind(&self) -> &PotentialKind {
        &self.kind
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Seed of the Bernoulli stream, zero for deterministic kinds.
    pub fn seed(&self) -> u64 {
        match self.kind {
            PotentialKind::Bernoulli { seed, .. } => seed,
            _ => 0,
        }
    }

    /// Upper bound on the number of distinct values a window can hold.
    pub fn alphabet_bound(&self) -> usize {
        match &self.kind {
            PotentialKind::Moebius => 3,
            PotentialKind::Periodic(word) => word.len(),
            PotentialKind::Bernoulli { .. } => 2,
            PotentialKind::Free => 1,
            PotentialKind::Custom(values) => values.len(),
        }
    }

    /// Largest `|v_n|` the generator can produce.
    pub fn max_abs(&self) -> f64 {
        let lam = self.lambda.abs();
        let max = |xs: &[f64]| xs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        match &self.kind {
            PotentialKind::Moebius => lam,
            PotentialKind::Periodic(word) => lam * max(word),
            PotentialKind::Bernoulli { values, .. } => lam * max(values),
            PotentialKind::Free => 0.0,
            PotentialKind::Custom(values) => lam * max(values),
        }
    }

    pub fn sample(&self, start: u64, len: usize) -> Result<PotentialWindow> {
        let mut values = alloc::vec![0.0; len];
        self.sample_into(start, &mut values)?;
        Ok(PotentialWindow { start, values, alphabet_bound: self.alphabet_bound() })
    }

    /// Fills `out[i] = v_{start+i}`.
    pub fn sample_into(&self, start: u64, out: &mut [f64]) -> Result<()> {
        if start == 0 {
            return Err(Error::Range { what: "sample start", index: 0, bound: 1 });
        }
        if out.is_empty() {
            return Err(Error::Size { what: "sample length", requested: 0, cap: u64::MAX });
        }
        let lam = self.lambda;
        match &self.kind {
            PotentialKind::Free => out.fill(0.0),
            PotentialKind::Moebius => {
                for (chunk_idx, chunk) in out.chunks_mut(1 << 20).enumerate() {
                    let s = start + (chunk_idx << 20) as u64;
                    let mu = mobius_range(s, chunk.len())?;
                    for (o, m) in chunk.iter_mut().zip(mu) {
                        *o = lam * f64::from(m);
                    }
                }
            }
            PotentialKind::Periodic(word) => {
                let p = word.len() as u64;
                for (i, o) in out.iter_mut().enumerate() {
                    *o = lam * word[((start - 1 + i as u64) % p) as usize];
                }
            }
            PotentialKind::Bernoulli { prob, values, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                for (chunk_idx, chunk) in out.chunks_mut(BERNOULLI_CHUNK).enumerate() {
                    let first = start - 1 + (chunk_idx * BERNOULLI_CHUNK) as u64;
                    rng.set_word_pos(2 * u128::from(first));
                    for o in chunk.iter_mut() {
                        let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
                        *o = lam * if u < *prob { values[1] } else { values[0] };
                    }
                }
            }
            PotentialKind::Custom(values) => {
                let end = start - 1 + out.len() as u64;
                if end > values.len() as u64 {
                    return Err(Error::Range {
                        what: "custom potential",
                        index: end as i64,
                        bound: values.len() as i64,
                    });
                }
                let s = start as usize - 1;
                for (o, v) in out.iter_mut().zip(&values[s..]) {
                    *o = lam * v;
                }
            }
        }
        Ok(())
    }

    /// Short label for report metadata, e.g. `moebius` or `periodic:1,0`.
    pub fn label(&self) -> String {
        alloc::format!("{}", self.kind)
    }
}

impl fmt::Display for PotentialKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, xs: &[f64]| -> fmt::Result {
            for (i, x) in xs.iter().enumerate() {
                if i > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{x}")?;
            }
            Ok(())
        };
        match self {
            PotentialKind::Moebius => f.write_str("mobius"),
            PotentialKind::Free => f.write_str("free"),
            PotentialKind::Periodic(word) => {
                f.write_str("periodic:")?;
                list(f, word)
            }
            PotentialKind::Bernoulli { prob, values, seed } => {
                write!(f, "bernoulli:{prob},{},{},{seed}", values[0], values[1])
            }
            PotentialKind::Custom(values) => write!(f, "custom:<{} values>", values.len()),
        }
    }
}

impl PotentialWindow {
    /// Wraps raw values `v_start, …` as a window.
    pub fn from_values(start: u64, values: Vec<f64>) -> Result<Self> {
        if start == 0 {
            return Err(Error::Range { what: "window start", index: 0, bound: 1 });
        }
        if values.is_empty() {
            return Err(Error::Size { what: "window length", requested: 0, cap: u64::MAX });
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::input("window has a non-finite value"));
        }
        let alphabet_bound = values.len();
        Ok(PotentialWindow { start, values, alphabet_bound })
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn alphabet_bound(&self) -> usize {
        self.alphabet_bound
    }

    /// `v_n` for an absolute site index `n`.
    pub fn at(&self, n: u64) -> Option<f64> {
        n.checked_sub(self.start).and_then(|i| self.values.get(i as usize).copied())
    }
}

/// A prime `p` and offset `j` making `k + n + j·d` divisible by `p²`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ApZero {
    pub prime: u64,
    pub j: u64,
}

/// Finds the smallest prime `d < p < 10d` and then the smallest `j < p²`
/// with `p² | k + n + j·d`, so that `μ(k + n + j·d) = 0`.
///
/// Because `p > d` is prime, `d` is invertible mod `p²` and exactly one such
/// `j` exists for each `p`.
pub fn ap_zero_search(k: u64, n: u64, d: u64) -> Result<ApZero> {
    if d == 0 {
        return Err(Error::input("progression step d must be positive"));
    }
    let overflow = |what| Error::Size { what, requested: u64::MAX, cap: u64::MAX };
    let base = k.checked_add(n).ok_or(overflow("k + n"))?;
    let upper = d.checked_mul(10).ok_or(overflow("10 d"))?;
    let prime = (d + 1..upper)
        .find(|&p| sieve::is_prime(p))
        .ok_or(Error::Internal("no prime in (d, 10d)"))?;
    let modulus = prime.checked_mul(prime).ok_or(overflow("p^2"))?;
    let inv = mod_inverse(d % modulus, modulus).ok_or(Error::Internal("d not invertible mod p^2"))?;
    let target = (modulus - base % modulus) % modulus;
    let j = ((u128::from(target) * u128::from(inv)) % u128::from(modulus)) as u64;
    j.checked_mul(d)
        .and_then(|jd| jd.checked_add(base))
        .ok_or(overflow("k + n + j d"))?;
    Ok(ApZero { prime, j })
}

fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (i128::from(a), i128::from(m));
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(i128::from(m)) as u64)
}

/// Whether `v_{n+d} = v_n` for every site `n >= n0` with both `n` and `n+d`
/// inside the window.
pub fn eventual_periodicity_check(window: &PotentialWindow, d: u64, n0: u64) -> Result<bool> {
    let len = window.len() as u64;
    if d == 0 {
        return Err(Error::input("period d must be positive"));
    }
    if d >= len {
        return Err(Error::Range { what: "period", index: d as i64, bound: len as i64 - 1 });
    }
    let end = window.start() + len;
    if n0 < window.start() || n0 + d >= end {
        return Err(Error::Range {
            what: "periodicity onset",
            index: n0 as i64,
            bound: (end - 1 - d) as i64,
        });
    }
    let v = window.values();
    let first = (n0 - window.start()) as usize;
    let d = d as usize;
    Ok((first..v.len() - d).all(|i| v[i + d] == v[i]))
}
