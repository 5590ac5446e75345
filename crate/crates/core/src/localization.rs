//! Good windows, good-set densities, disjoint interval selection and the
//! corner decay of long-interval Green's functions.
//!
//! A window `I` of length `M` is *good* at energy `E` for parameters
//! `(δ, b)` when
//!
//! ```text
//! ‖G_I(E)‖ < e^{δM}   and   |G_I(E)(k, k')| < e^{-b|k-k'|}  whenever |k-k'| > δM.
//! ```

use alloc::vec::Vec;

use crate::green::{distance_to_spectrum, singularity_tolerance, GreenSolver};
use crate::{Error, ParallelMap, PotentialSpec, PotentialWindow, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GoodParams {
    /// δ, in `(0, 1)`.
    pub delta: f64,
    /// Off-diagonal decay rate `b`.
    pub decay: f64,
    /// Window length `M`.
    pub m: usize,
}

/// Hypotheses of the paving argument that a parameter set violates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum ParamWarning {
    /// `δ > b^10`.
    DeltaTooLarge,
    /// `M <= δ^{-2}`.
    WindowTooShort,
    /// `b >= 1/10`.
    DecayTooLarge,
}

impl GoodParams {
    pub fn new(delta: f64, decay: f64, m: usize) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::input("delta must lie in (0, 1)"));
        }
        if !(decay > 0.0 && decay.is_finite()) {
            return Err(Error::input("decay rate must be positive"));
        }
        if m == 0 {
            return Err(Error::Size { what: "window length M", requested: 0, cap: u64::MAX });
        }
        Ok(GoodParams { delta, decay, m })
    }

    /// The default wiring `δ = b^10`.
    pub fn from_decay(decay: f64, m: usize) -> Result<Self> {
        Self::new(libm::pow(decay, 10.0), decay, m)
    }

    /// Which paving hypotheses (`b < 1/10`, `δ <= b^10`, `M > δ^{-2}`) fail.
    pub fn paving_warnings(&self) -> Vec<ParamWarning> {
        let mut w = Vec::new();
        if self.decay >= 0.1 {
            w.push(ParamWarning::DecayTooLarge);
        }
        if self.delta > libm::pow(self.decay, 10.0) {
            w.push(ParamWarning::DeltaTooLarge);
        }
        if (self.m as f64) <= 1.0 / (self.delta * self.delta) {
            w.push(ParamWarning::WindowTooShort);
        }
        w
    }

    /// Smallest separation `|k - k'|` the decay clause applies to.
    pub fn decay_threshold(&self) -> usize {
        let t = self.delta * self.m as f64;
        libm::floor(t) as usize + 1
    }
}

/// Why a window failed.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Witness {
    /// `E` is within the singularity tolerance of the window spectrum.
    Singular { distance: f64 },
    /// `log‖G‖ >= δM`.
    Norm { log_norm: f64, bound: f64 },
    /// `log|G(k1, k2)| >= -b|k1 - k2|` (1-based, relative to the window).
    Decay { k1: usize, k2: usize, log_abs: f64, bound: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GoodVerdict {
    pub good: bool,
    pub witness: Option<Witness>,
}

pub fn is_good_window(energy: f64, window: &PotentialWindow, params: &GoodParams) -> Result<GoodVerdict> {
    if window.len() != params.m {
        return Err(Error::Range {
            what: "window length",
            index: window.len() as i64,
            bound: params.m as i64,
        });
    }
    is_good_values(energy, window.values(), params)
}

fn is_good_values(energy: f64, diag: &[f64], params: &GoodParams) -> Result<GoodVerdict> {
    let bad = |w| Ok(GoodVerdict { good: false, witness: Some(w) });
    let dist = distance_to_spectrum(diag, energy);
    if dist <= singularity_tolerance(diag) {
        return bad(Witness::Singular { distance: dist });
    }
    let log_norm = -libm::log(dist);
    let bound = params.delta * params.m as f64;
    if log_norm >= bound {
        return bad(Witness::Norm { log_norm, bound });
    }
    let solver = match GreenSolver::new(energy, diag) {
        Ok(s) => s,
        Err(Error::NearSingular { distance, .. }) => return bad(Witness::Singular { distance }),
        Err(e) => return Err(e),
    };
    let m = diag.len();
    let sep = params.decay_threshold();
    for k in 0..m {
        for x in 0..k.saturating_sub(sep - 1) {
            let gap = k - x;
            let g = solver.entry0(x, k);
            let limit = -params.decay * gap as f64;
            if g.log_abs() >= limit {
                return bad(Witness::Decay { k1: x + 1, k2: k + 1, log_abs: g.log_abs(), bound: limit });
            }
        }
    }
    Ok(GoodVerdict { good: true, witness: None })
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GoodSetReport {
    pub energy: f64,
    pub params: GoodParams,
    /// ℓ.
    pub range_end: usize,
    pub stride: usize,
    /// Number of window starts evaluated.
    pub evaluated: usize,
    /// Starts `k` whose window `[k, k+M)` is good.
    pub good_starts: Vec<usize>,
    /// `good_starts.len() / evaluated`, zero when nothing was evaluated.
    pub density: f64,
}

/// Evaluates every complete window `[k, k+M) ⊂ [1, ℓ]`, `k = 1, 1+stride, …`.
pub fn good_set<P: ParallelMap>(
    exec: &P,
    energy: f64,
    spec: &PotentialSpec,
    params: &GoodParams,
    ell: usize,
    stride: usize,
) -> Result<GoodSetReport> {
    if stride == 0 {
        return Err(Error::Size { what: "stride", requested: 0, cap: u64::MAX });
    }
    if !energy.is_finite() {
        return Err(Error::input("energy must be finite"));
    }
    let mut report = GoodSetReport {
        energy,
        params: *params,
        range_end: ell,
        stride,
        evaluated: 0,
        good_starts: Vec::new(),
        density: 0.0,
    };
    if ell < params.m {
        return Ok(report);
    }
    let v = spec.sample(1, ell)?;
    let v = v.values();
    let last_start = ell - params.m + 1;
    let starts: Vec<usize> = (1..=last_start).step_by(stride).collect();
    let verdicts = exec.map_indexed(starts.len(), |i| {
        let s = starts[i] - 1;
        is_good_values(energy, &v[s..s + params.m], params).map(|g| g.good)
    });
    for (k, verdict) in starts.iter().zip(verdicts) {
        if verdict? {
            report.good_starts.push(*k);
        }
    }
    report.evaluated = starts.len();
    report.density = report.good_starts.len() as f64 / starts.len() as f64;
    Ok(report)
}

/// Closed interval of sites `[start, end]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Interval {
    pub start: usize,
    pub end: usize,
}

impl Interval {
    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end < self.start
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntervalSelection {
    pub intervals: Vec<Interval>,
    /// Total selected length over ℓ.
    pub fraction: f64,
    /// Whether the total length exceeds `c0 · ℓ`.
    pub success: bool,
}

/// Greedy left-to-right choice of pairwise disjoint good `M`-windows.
///
/// Taking the leftmost admissible window each time maximizes the number of
/// disjoint windows (interval scheduling with equal lengths).
pub fn select_disjoint_intervals(report: &GoodSetReport, c0: f64) -> Result<IntervalSelection> {
    if report.stride != 1 {
        return Err(Error::input("interval selection needs a stride-1 good set"));
    }
    let m = report.params.m;
    let mut intervals = Vec::new();
    let mut next_free = 1usize;
    for &k in &report.good_starts {
        if k >= next_free {
            intervals.push(Interval { start: k, end: k + m - 1 });
            next_free = k + m;
        }
    }
    let total = intervals.len() * m;
    let ell = report.range_end.max(1) as f64;
    Ok(IntervalSelection {
        fraction: total as f64 / ell,
        success: total as f64 > c0 * report.range_end as f64,
        intervals,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CornerDecay {
    pub energy: f64,
    pub ell: usize,
    pub c0: f64,
    /// `w = ⌊c0 ℓ / 10⌋`; the corner is `x ∈ [1, w]`, `y ∈ [ℓ - w, ℓ]`.
    pub width: usize,
    /// Set when `w = 0`.
    pub empty: bool,
    /// `max log|G_{[1,ℓ]}(E)(x, y)|` over the corner, `-inf` when empty.
    pub corner_log_max: f64,
    pub argmax: Option<(usize, usize)>,
}

fn corner_width(ell: usize, c0: f64) -> usize {
    libm::floor(c0 * ell as f64 / 10.0) as usize
}

fn corner_from_values(energy: f64, diag: &[f64], c0: f64) -> Result<CornerDecay> {
    let ell = diag.len();
    let width = corner_width(ell, c0);
    let mut out = CornerDecay {
        energy,
        ell,
        c0,
        width,
        empty: width == 0,
        corner_log_max: f64::NEG_INFINITY,
        argmax: None,
    };
    if out.empty {
        return Ok(out);
    }
    let solver = GreenSolver::new(energy, diag)?;
    for y in ell - width..=ell {
        for x in 1..=width {
            let g = solver.entry0(x - 1, y - 1).log_abs();
            if g > out.corner_log_max || out.argmax.is_none() {
                out.corner_log_max = g;
                out.argmax = Some((x, y));
            }
        }
    }
    Ok(out)
}

/// Largest Green's entry linking the left and right corners of `[1, ℓ]`.
pub fn corner_decay(energy: f64, spec: &PotentialSpec, ell: usize, c0: f64) -> Result<CornerDecay> {
    if !(c0 > 0.0 && c0 < 1.0) {
        return Err(Error::input("c0 must lie in (0, 1)"));
    }
    if ell == 0 {
        return Err(Error::Size { what: "ell", requested: 0, cap: u64::MAX });
    }
    let v = spec.sample(1, ell)?;
    corner_from_values(energy, v.values(), c0)
}

/// Least-squares slope of `corner_log_max` against `ℓ`, negated: the fitted
/// decay rate `b'`. `None` with fewer than two finite points.
pub fn fit_decay_rate(points: &[(usize, f64)]) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        points.iter().filter(|p| p.1.is_finite()).map(|&(l, y)| (l as f64, y)).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum::<f64>();
    if sxx == 0.0 {
        return None;
    }
    let sxy = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>();
    Some(-sxy / sxx)
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PavingReport {
    pub energy: f64,
    pub ell: usize,
    /// Covering fraction demanded of the interval selection.
    pub c0: f64,
    pub params: GoodParams,
    pub intervals: Vec<Interval>,
    pub covered_fraction: f64,
    pub selection_success: bool,
    pub corner: CornerDecay,
    /// `-corner_log_max / ℓ`, or the least-squares rate when assembled by
    /// [`paving_scan`].
    pub fitted_rate: Option<f64>,
}

/// Good set, interval selection and corner decay for one `(E, ℓ)`.
pub fn paving_report<P: ParallelMap>(
    exec: &P,
    energy: f64,
    spec: &PotentialSpec,
    params: &GoodParams,
    ell: usize,
    c0: f64,
) -> Result<PavingReport> {
    let corner = corner_decay(energy, spec, ell, c0)?;
    let good = good_set(exec, energy, spec, params, ell, 1)?;
    let sel = select_disjoint_intervals(&good, c0)?;
    let fitted_rate = (!corner.empty).then(|| -corner.corner_log_max / ell as f64);
    Ok(PavingReport {
        energy,
        ell,
        c0,
        params: *params,
        intervals: sel.intervals,
        covered_fraction: sel.fraction,
        selection_success: sel.success,
        corner,
        fitted_rate,
    })
}

/// [`paving_report`] for several lengths plus the fitted rate across them.
pub fn paving_scan<P: ParallelMap>(
    exec: &P,
    energy: f64,
    spec: &PotentialSpec,
    params: &GoodParams,
    ells: &[usize],
    c0: f64,
) -> Result<(Vec<PavingReport>, Option<f64>)> {
    let reports = ells
        .iter()
        .map(|&l| paving_report(exec, energy, spec, params, l, c0))
        .collect::<Result<Vec<_>>>()?;
    let pts: Vec<(usize, f64)> = reports.iter().map(|r| (r.ell, r.corner.corner_log_max)).collect();
    Ok((reports, fit_decay_rate(&pts)))
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BadEnergyReport {
    pub ell: usize,
    pub c0: f64,
    pub b_prime: f64,
    pub bad: Vec<bool>,
    pub fraction: f64,
    /// The corner region is empty for this `(ℓ, c0)`; `fraction` is zero.
    pub degenerate: bool,
}

/// Fraction of grid energies with `corner_log_max >= -b'ℓ`; energies singular
/// for `[1, ℓ]` count as bad.
pub fn bad_energy_fraction<P: ParallelMap>(
    exec: &P,
    spec: &PotentialSpec,
    grid: &[f64],
    ell: usize,
    c0: f64,
    b_prime: f64,
) -> Result<BadEnergyReport> {
    if grid.is_empty() {
        return Err(Error::input("energy grid is empty"));
    }
    if grid.iter().any(|e| !e.is_finite()) {
        return Err(Error::input("energy must be finite"));
    }
    if !(c0 > 0.0 && c0 < 1.0) {
        return Err(Error::input("c0 must lie in (0, 1)"));
    }
    if ell == 0 {
        return Err(Error::Size { what: "ell", requested: 0, cap: u64::MAX });
    }
    if corner_width(ell, c0) == 0 {
        return Ok(BadEnergyReport {
            ell,
            c0,
            b_prime,
            bad: alloc::vec![false; grid.len()],
            fraction: 0.0,
            degenerate: true,
        });
    }
    let v = spec.sample(1, ell)?;
    let v = v.values();
    let threshold = -b_prime * ell as f64;
    let verdicts = exec.map_indexed(grid.len(), |i| match corner_from_values(grid[i], v, c0) {
        Ok(c) => Ok(c.corner_log_max >= threshold),
        Err(Error::NearSingular { .. }) => Ok(true),
        Err(e) => Err(e),
    });
    let bad = verdicts.into_iter().collect::<Result<Vec<bool>>>()?;
    let fraction = bad.iter().filter(|&&b| b).count() as f64 / grid.len() as f64;
    Ok(BadEnergyReport { ell, c0, b_prime, bad, fraction, degenerate: false })
}
