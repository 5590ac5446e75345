//! Restricted Green's functions `G(E) = (H - E)^{-1}` of a window, where `H`
//! is the symmetric tridiagonal matrix with diagonal `v_n` and unit
//! off-diagonals.
//!
//! Two routes compute the same entries:
//!
//! - Cramér's rule, `G(k1, k2) = -p_{k1-1} · q_{N-k2} / p_N` for `k1 <= k2`,
//!   from the determinant recurrences in [`crate::transfer`];
//! - a direct solve by twisted factorization ([`GreenSolver`]): top-down and
//!   bottom-up LDLᵀ pivots meet at the column index, and every entry of the
//!   column becomes a product of pivot reciprocals.
//!
//! Both are carried in the log domain so entries far below `f64::MIN_POSITIVE`
//! stay representable.

use alloc::vec;
use alloc::vec::Vec;

use crate::transfer::char_det_values;
use crate::{Error, LogValue, PotentialWindow, Result};

/// Largest window [`spectrum`] will diagonalize.
pub const SPECTRUM_CAP: usize = 20_000;

/// Relative singularity tolerance: `|E - λ| <= 1e-12 · max(1, ‖H‖)` is singular.
pub const SINGULAR_REL_TOL: f64 = 1e-12;

/// Energy shift used when a pivot overflows.
const PERTURBATION: f64 = 1e-12;

const PIVMIN: f64 = 1e-300;

/// Stand-in for an exactly zero factorization pivot. The following pivot
/// becomes `a - 1e280`, and the pair's product stays `-1 + O(1e-280)`.
const ZERO_PIVOT: f64 = 1e-280;

/// `[min v - 2, max v + 2]`, which contains every eigenvalue.
pub fn gershgorin(diag: &[f64]) -> (f64, f64) {
    let lo = diag.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = diag.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (lo - 2.0, hi + 2.0)
}

/// Bound on `‖H‖` used to scale the singularity tolerance.
pub fn norm_bound(diag: &[f64]) -> f64 {
    diag.iter().fold(0.0f64, |m, v| m.max(v.abs())) + if diag.len() > 1 { 2.0 } else { 0.0 }
}

pub fn singularity_tolerance(diag: &[f64]) -> f64 {
    SINGULAR_REL_TOL * norm_bound(diag).max(1.0)
}

/// Number of eigenvalues strictly below `x` (Sturm sequence count).
pub fn sturm_count(diag: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0f64;
    for (i, &v) in diag.iter().enumerate() {
        d = if i == 0 { v - x } else { v - x - 1.0 / d };
        if d == 0.0 {
            d = PIVMIN;
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// The `k`-th smallest eigenvalue (0-based) by bisection inside `[lo, hi]`,
/// which must satisfy `count(lo) <= k < count(hi)`.
fn bisect(diag: &[f64], k: usize, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..256 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
            break;
        }
        if sturm_count(diag, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

fn padded_bounds(diag: &[f64]) -> (f64, f64) {
    let (lo, hi) = gershgorin(diag);
    let pad = 4.0 * f64::EPSILON * lo.abs().max(hi.abs()).max(1.0);
    (lo - pad, hi + pad)
}

/// Eigenvalues of the window operator, ascending.
pub fn spectrum(window: &PotentialWindow) -> Result<Vec<f64>> {
    spectrum_values(window.values())
}

pub fn spectrum_values(diag: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if n == 0 || n > SPECTRUM_CAP {
        return Err(Error::Size { what: "spectrum size", requested: n as u64, cap: SPECTRUM_CAP as u64 });
    }
    let (lo, hi) = padded_bounds(diag);
    Ok((0..n).map(|k| bisect(diag, k, lo, hi)).collect())
}

/// Distance from `energy` to the nearest eigenvalue, using two bisections.
pub fn distance_to_spectrum(diag: &[f64], energy: f64) -> f64 {
    let n = diag.len();
    let (lo, hi) = padded_bounds(diag);
    let below = sturm_count(diag, energy);
    let mut dist = f64::INFINITY;
    if below > 0 {
        let top = if energy < hi { energy } else { hi };
        dist = dist.min(energy - bisect(diag, below - 1, lo.min(top), top));
    }
    if below < n {
        let bottom = if energy > lo { energy } else { lo };
        dist = dist.min(bisect(diag, below, bottom, hi.max(bottom)) - energy);
    }
    dist.max(0.0)
}

/// `‖G(E)‖ = 1 / dist(E, σ)`; `+inf` when `E` is within the singularity
/// tolerance of an eigenvalue.
pub fn resolvent_norm(energy: f64, window: &PotentialWindow) -> f64 {
    let diag = window.values();
    let dist = distance_to_spectrum(diag, energy);
    if dist <= singularity_tolerance(diag) {
        f64::INFINITY
    } else {
        1.0 / dist
    }
}

fn check_regular(energy: f64, diag: &[f64]) -> Result<()> {
    if !energy.is_finite() {
        return Err(Error::input("energy must be finite"));
    }
    let dist = distance_to_spectrum(diag, energy);
    if dist <= singularity_tolerance(diag) {
        return Err(Error::NearSingular { energy, distance: dist });
    }
    Ok(())
}

fn check_index(k: usize, n: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::Range { what: "green index", index: k as i64, bound: n as i64 });
    }
    Ok(())
}

/// `G(k1, k2)` by Cramér's rule (1-based indices; order is irrelevant by
/// symmetry).
pub fn green_entry_cramer(
    energy: f64,
    window: &PotentialWindow,
    k1: usize,
    k2: usize,
) -> Result<LogValue> {
    let v = window.values();
    check_index(k1, v.len())?;
    check_index(k2, v.len())?;
    check_regular(energy, v)?;
    let (k1, k2) = if k1 <= k2 { (k1, k2) } else { (k2, k1) };
    let head = char_det_values(energy, &v[..k1 - 1]).last;
    let tail = char_det_values(energy, &v[k2..]).last;
    let whole = char_det_values(energy, v).last;
    Ok(-(head * tail) / whole)
}

/// Twisted-factorization solver for `(H - E) x = e_k`.
///
/// Top-down pivots `d⁺_1 = a_1`, `d⁺_i = a_i - 1/d⁺_{i-1}` and bottom-up pivots
/// `d⁻_N = a_N`, `d⁻_i = a_i - 1/d⁻_{i+1}` (with `a_i = v_i - E`) give
///
/// ```text
/// x_k = 1 / (d⁺_k + d⁻_k - a_k),
/// x_i = -x_{i+1} / d⁺_i   (i < k),
/// x_i = -x_{i-1} / d⁻_i   (i > k).
/// ```
///
/// Prefix sums of `log|d|` make any single entry `O(1)` after `O(N)` setup.
/// An exactly zero pivot is replaced by a tiny one; entries that vanish in
/// exact arithmetic then come out below `1e-270` instead of zero.
#[derive(Clone, Debug)]
pub struct GreenSolver {
    energy: f64,
    perturbed: bool,
    top_log: Vec<f64>,
    top_neg: Vec<u32>,
    bot_log: Vec<f64>,
    bot_neg: Vec<u32>,
    diag_entry: Vec<LogValue>,
}

/// A column of `G`, in the log domain.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GreenColumn {
    pub values: Vec<LogValue>,
    /// Set when a pivot overflowed and the solve ran at `E ± 1e-12`.
    pub perturbed: bool,
}

impl GreenColumn {
    /// Plain doubles; entries below the smallest double become zero.
    pub fn to_f64(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.to_f64()).collect()
    }
}

impl GreenSolver {
    /// Fails with [`Error::NearSingular`] when `energy` is within the
    /// singularity tolerance of the window spectrum.
    pub fn new(energy: f64, diag: &[f64]) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Size { what: "window length", requested: 0, cap: u64::MAX });
        }
        check_regular(energy, diag)?;
        if let Some(s) = Self::factor(energy, diag, false) {
            return Ok(s);
        }
        for e in [energy + PERTURBATION, energy - PERTURBATION] {
            if let Some(s) = Self::factor(e, diag, true) {
                return Ok(s);
            }
        }
        Err(Error::NearSingular { energy, distance: distance_to_spectrum(diag, energy) })
    }

    pub fn for_window(energy: f64, window: &PotentialWindow) -> Result<Self> {
        Self::new(energy, window.values())
    }

    fn factor(energy: f64, diag: &[f64], perturbed: bool) -> Option<Self> {
        let n = diag.len();
        let mut top = vec![0.0; n];
        let mut bot = vec![0.0; n];
        for i in 0..n {
            let a = diag[i] - energy;
            top[i] = if i == 0 { a } else { a - 1.0 / top[i - 1] };
            if top[i] == 0.0 {
                top[i] = ZERO_PIVOT;
            }
            if !top[i].is_finite() {
                return None;
            }
        }
        for i in (0..n).rev() {
            let a = diag[i] - energy;
            bot[i] = if i == n - 1 { a } else { a - 1.0 / bot[i + 1] };
            if bot[i] == 0.0 {
                bot[i] = ZERO_PIVOT;
            }
            if !bot[i].is_finite() {
                return None;
            }
        }
        let prefix = |d: &[f64]| {
            let mut logs = Vec::with_capacity(n + 1);
            let mut negs = Vec::with_capacity(n + 1);
            let (mut acc, mut neg) = (0.0f64, 0u32);
            logs.push(acc);
            negs.push(neg);
            for &x in d {
                acc += libm::log(x.abs());
                neg += u32::from(x < 0.0);
                logs.push(acc);
                negs.push(neg);
            }
            (logs, negs)
        };
        let (top_log, top_neg) = prefix(&top);
        let (bot_log, bot_neg) = prefix(&bot);
        let mut diag_entry = Vec::with_capacity(n);
        for i in 0..n {
            let gamma = top[i] + bot[i] - (diag[i] - energy);
            if gamma == 0.0 || !gamma.is_finite() {
                return None;
            }
            diag_entry.push(LogValue::from_f64(1.0 / gamma));
        }
        Some(GreenSolver { energy, perturbed, top_log, top_neg, bot_log, bot_neg, diag_entry })
    }

    pub fn len(&self) -> usize {
        self.diag_entry.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag_entry.is_empty()
    }

    /// Energy actually used (differs from the request when perturbed).
    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn perturbed(&self) -> bool {
        self.perturbed
    }

    /// `G(x, k)` for 0-based sites.
    #[inline]
    pub fn entry0(&self, x: usize, k: usize) -> LogValue {
        let g = self.diag_entry[k];
        let (log_sum, flips) = match x.cmp(&k) {
            core::cmp::Ordering::Equal => return g,
            core::cmp::Ordering::Less => (
                self.top_log[k] - self.top_log[x],
                (k - x) as u32 + self.top_neg[k] - self.top_neg[x],
            ),
            core::cmp::Ordering::Greater => (
                self.bot_log[x + 1] - self.bot_log[k + 1],
                (x - k) as u32 + self.bot_neg[x + 1] - self.bot_neg[k + 1],
            ),
        };
        let sign = if flips % 2 == 0 { g.sign() } else { -g.sign() };
        LogValue::new(sign, g.log_abs() - log_sum)
    }

    /// `G(x, k)` for 1-based sites.
    pub fn entry(&self, x: usize, k: usize) -> Result<LogValue> {
        check_index(x, self.len())?;
        check_index(k, self.len())?;
        Ok(self.entry0(x - 1, k - 1))
    }

    /// Column `k` (1-based).
    pub fn column(&self, k: usize) -> Result<GreenColumn> {
        check_index(k, self.len())?;
        let values = (0..self.len()).map(|x| self.entry0(x, k - 1)).collect();
        Ok(GreenColumn { values, perturbed: self.perturbed })
    }
}

/// Column `k` (1-based) of `G(E)` by the direct solve.
pub fn green_column_direct(energy: f64, window: &PotentialWindow, k: usize) -> Result<GreenColumn> {
    GreenSolver::for_window(energy, window)?.column(k)
}

/// `G(k1, k2)` by the direct solve.
pub fn green_entry_direct(
    energy: f64,
    window: &PotentialWindow,
    k1: usize,
    k2: usize,
) -> Result<LogValue> {
    GreenSolver::for_window(energy, window)?.entry(k1, k2)
}
