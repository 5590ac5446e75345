//! Lyapunov exponents, forward shooting and the solution/Green's-column
//! identity.

use alloc::vec;
use alloc::vec::Vec;

use crate::green::GreenSolver;
use crate::scale::{exponent, ldexp, out_of_range};
use crate::transfer::ScaledMatrix2;
use crate::{log_discrepancy, Error, LogValue, ParallelMap, PotentialSpec, Result};

/// Sites sampled per chunk when streaming a long window.
const CHUNK: usize = 1 << 16;

/// Checkpoints recorded by [`shoot`] per run.
pub const CHECKPOINTS: usize = 1024;

fn check_inputs(energy: f64, n: usize) -> Result<()> {
    if !energy.is_finite() {
        return Err(Error::input("energy must be finite"));
    }
    if n == 0 {
        return Err(Error::Size { what: "steps", requested: 0, cap: u64::MAX });
    }
    Ok(())
}

/// Streams `v_start, …, v_{start+n-1}` through `f` in chunks.
fn for_each_chunk(
    spec: &PotentialSpec,
    start: u64,
    n: usize,
    mut f: impl FnMut(&[f64]),
) -> Result<()> {
    let mut buf = vec![0.0; CHUNK.min(n.max(1))];
    let mut done = 0usize;
    while done < n {
        let len = CHUNK.min(n - done);
        spec.sample_into(start + done as u64, &mut buf[..len])?;
        f(&buf[..len]);
        done += len;
    }
    Ok(())
}

fn product_growth(product: &ScaledMatrix2, n: usize) -> f64 {
    (product.log_norm() / n as f64).max(0.0)
}

/// `(1/N) log‖A_{start+N-1} ··· A_start‖`, clamped at zero (a det-one matrix
/// has norm at least one).
pub fn lyapunov_estimate(energy: f64, spec: &PotentialSpec, n: usize, start: u64) -> Result<f64> {
    check_inputs(energy, n)?;
    let mut m = ScaledMatrix2::IDENTITY;
    for_each_chunk(spec, start, n, |chunk| {
        for &v in chunk {
            m.push_step(energy, v);
        }
    })?;
    Ok(product_growth(&m, n))
}

/// Mean of [`lyapunov_estimate`] over the non-overlapping windows starting at
/// `1, 1 + N, …, 1 + (shifts-1)·N`.
pub fn birkhoff_lyapunov(energy: f64, spec: &PotentialSpec, n: usize, shifts: usize) -> Result<f64> {
    if shifts == 0 {
        return Err(Error::Size { what: "shifts", requested: 0, cap: u64::MAX });
    }
    let mut sum = 0.0;
    for s in 0..shifts {
        sum += lyapunov_estimate(energy, spec, n, 1 + (s * n) as u64)?;
    }
    Ok(sum / shifts as f64)
}

/// `0` inside the band `[-2, 2]`, else `log((|E| + sqrt(E² - 4)) / 2)`.
pub fn free_gamma_closed_form(energy: f64) -> f64 {
    let e = energy.abs();
    if e <= 2.0 {
        0.0
    } else {
        libm::log(0.5 * (e + libm::sqrt(e * e - 4.0)))
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LyapunovCurve {
    pub energies: Vec<f64>,
    /// Mean estimate over the shift windows, nats per site.
    pub gamma: Vec<f64>,
    /// Sample standard deviation across shift windows (zero for one shift).
    pub spread: Vec<f64>,
    pub n: usize,
    pub shifts: usize,
    pub spec: PotentialSpec,
}

/// [`birkhoff_lyapunov`] over an energy grid. Each shift window is sampled
/// once and shared by all energies; per-energy work goes through `exec`.
/// Results equal the pointwise calls bit for bit.
pub fn lyapunov_curve<P: ParallelMap>(
    exec: &P,
    spec: &PotentialSpec,
    energies: &[f64],
    n: usize,
    shifts: usize,
) -> Result<LyapunovCurve> {
    if shifts == 0 {
        return Err(Error::Size { what: "shifts", requested: 0, cap: u64::MAX });
    }
    for &e in energies {
        check_inputs(e, n)?;
    }
    let mut per_shift: Vec<Vec<f64>> = Vec::with_capacity(shifts);
    let mut window = vec![0.0; n];
    for s in 0..shifts {
        spec.sample_into(1 + (s * n) as u64, &mut window)?;
        let w = &window;
        per_shift.push(exec.map_indexed(energies.len(), |i| {
            let mut m = ScaledMatrix2::IDENTITY;
            for &v in w {
                m.push_step(energies[i], v);
            }
            product_growth(&m, n)
        }));
    }
    let mut gamma = Vec::with_capacity(energies.len());
    let mut spread = Vec::with_capacity(energies.len());
    for i in 0..energies.len() {
        let mut sum = 0.0;
        for row in &per_shift {
            sum += row[i];
        }
        let mean = sum / shifts as f64;
        let var = if shifts > 1 {
            per_shift.iter().map(|row| (row[i] - mean) * (row[i] - mean)).sum::<f64>()
                / (shifts - 1) as f64
        } else {
            0.0
        };
        gamma.push(mean);
        spread.push(libm::sqrt(var));
    }
    Ok(LyapunovCurve {
        energies: energies.to_vec(),
        gamma,
        spread,
        n,
        shifts,
        spec: spec.clone(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Checkpoint {
    pub n: usize,
    pub value: LogValue,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShootingTrace {
    pub energy: f64,
    pub checkpoints: Vec<Checkpoint>,
    /// Max of `log⁺|ψ_n| / n` over the trailing half of the checkpoints.
    pub growth: f64,
    /// `(ψ_0, ψ_1)`.
    pub boundary: (f64, f64),
}

/// Running pair `(ψ_n, ψ_{n-1}) · 2^exp2`.
#[derive(Clone, Copy, Debug)]
struct ScaledPair {
    cur: f64,
    prev: f64,
    exp2: i64,
}

impl ScaledPair {
    #[inline]
    fn step(&mut self, energy: f64, v: f64) {
        let next = (energy - v) * self.cur - self.prev;
        self.prev = self.cur;
        self.cur = next;
        let max = self.cur.abs().max(self.prev.abs());
        if out_of_range(max) {
            let e = exponent(max);
            self.cur = ldexp(self.cur, -e);
            self.prev = ldexp(self.prev, -e);
            self.exp2 += i64::from(e);
        }
    }

    fn current(&self) -> LogValue {
        LogValue::from_scaled(self.cur, self.exp2)
    }
}

/// Integrates `ψ_{n+1} = (E - v_n) ψ_n - ψ_{n-1}` from `ψ_0 = 0`, `ψ_1 = 1`
/// up to `ψ_N`, checkpointing every `⌈N/1024⌉` sites and at `N`.
pub fn shoot(energy: f64, spec: &PotentialSpec, n: usize) -> Result<ShootingTrace> {
    check_inputs(energy, n)?;
    if n < 2 {
        return Err(Error::Size { what: "shooting length", requested: n as u64, cap: u64::MAX });
    }
    let every = n.div_ceil(CHECKPOINTS);
    let mut checkpoints = Vec::with_capacity(CHECKPOINTS + 1);
    let mut psi = ScaledPair { cur: 1.0, prev: 0.0, exp2: 0 };
    let mut site = 1usize;
    if every == 1 {
        checkpoints.push(Checkpoint { n: 1, value: LogValue::ONE });
    }
    for_each_chunk(spec, 1, n - 1, |chunk| {
        for &v in chunk {
            psi.step(energy, v);
            site += 1;
            if site.is_multiple_of(every) || site == n {
                checkpoints.push(Checkpoint { n: site, value: psi.current() });
            }
        }
    })?;
    let tail = &checkpoints[checkpoints.len() / 2..];
    let growth = tail
        .iter()
        .map(|c| c.value.log_abs().max(0.0) / c.n as f64)
        .fold(0.0f64, f64::max);
    Ok(ShootingTrace { energy, checkpoints, growth, boundary: (0.0, 1.0) })
}

/// `ψ_0, …, ψ_{len+1}` for the potential `values = (v_1, …, v_len)` with
/// `ψ_0 = 0`, `ψ_1 = 1`.
pub fn solve_forward(energy: f64, values: &[f64]) -> Vec<LogValue> {
    let mut out = Vec::with_capacity(values.len() + 2);
    out.push(LogValue::ZERO);
    out.push(LogValue::ONE);
    let mut psi = ScaledPair { cur: 1.0, prev: 0.0, exp2: 0 };
    for &v in values {
        psi.step(energy, v);
        out.push(psi.current());
    }
    out
}

/// Outcome of [`green_solution_identity_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SolutionIdentity {
    pub pass: bool,
    /// [`log_discrepancy`] between the two sides.
    pub discrepancy: f64,
    pub psi_x: LogValue,
    pub predicted: LogValue,
}

/// Checks `ψ_x = -ψ_{ℓ+1} · G_{[1,ℓ]}(E)(x, ℓ)`, with `ψ` from shooting and
/// `G` from the direct solve.
pub fn green_solution_identity_check(
    energy: f64,
    spec: &PotentialSpec,
    x: usize,
    ell: usize,
    tol: f64,
) -> Result<SolutionIdentity> {
    check_inputs(energy, ell)?;
    if x == 0 || x > ell {
        return Err(Error::Range { what: "identity site", index: x as i64, bound: ell as i64 });
    }
    let window = spec.sample(1, ell)?;
    let psi = solve_forward(energy, window.values());
    let edge = psi[ell + 1];
    if edge.is_zero() {
        return Err(Error::NearSingular { energy, distance: 0.0 });
    }
    let g = GreenSolver::for_window(energy, &window)?.entry(x, ell)?;
    let predicted = -(edge * g);
    let discrepancy = log_discrepancy(psi[x], predicted);
    Ok(SolutionIdentity { pass: discrepancy <= tol, discrepancy, psi_x: psi[x], predicted })
}
