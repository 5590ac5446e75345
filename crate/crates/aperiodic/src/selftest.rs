//! Oracle suites behind `aperiodic selftest`.

use aperiodic_core::dynamics::{free_gamma_closed_form, lyapunov_curve};
use aperiodic_core::green::{distance_to_spectrum, green_entry_cramer, GreenSolver};
use aperiodic_core::potential::mobius_sieve;
use aperiodic_core::transfer::verify_transfer_det_identity;
use aperiodic_core::PotentialSpec;

use crate::artifact::{Artifact, Table};
use crate::config::{energy_grid, RunConfig};
use crate::error::CliError;
use crate::pool::Pool;

/// Low-discrepancy point in `[lo, hi)`.
fn golden(i: usize, lo: f64, hi: f64) -> f64 {
    let phi = 0.618_033_988_749_894_9;
    lo + (hi - lo) * ((i as f64 + 1.0) * phi).fract()
}

fn bernoulli(seed: u64) -> PotentialSpec {
    PotentialSpec::bernoulli(0.5, [-1.0, 1.0], seed, 1.0).expect("valid bernoulli")
}

pub struct Suite {
    pub name: &'static str,
    pub cases: usize,
    pub passed: usize,
    pub worst: f64,
}

pub fn transfer_identity(cases: usize) -> Result<Suite, CliError> {
    let mut s = Suite { name: "transfer_det_identity", cases, passed: 0, worst: 0.0 };
    for i in 0..cases {
        let n = 2 + (i * 37) % 63;
        let e = golden(i, -4.0, 4.0);
        let w = bernoulli(i as u64).sample(1, n)?;
        let c = verify_transfer_det_identity(e, &w, 1e-9)?;
        s.passed += usize::from(c.pass);
        s.worst = s.worst.max(c.max_discrepancy);
    }
    Ok(s)
}

pub fn green_routes(cases: usize) -> Result<Suite, CliError> {
    let mut s = Suite { name: "cramer_vs_direct", cases, passed: 0, worst: 0.0 };
    let mut i = 0;
    let mut done = 0;
    while done < cases {
        let n = 1 + (i * 97) % 512;
        let e = golden(i, -4.0, 4.0);
        let w = bernoulli(1000 + i as u64).sample(1, n)?;
        i += 1;
        if distance_to_spectrum(w.values(), e) < 1e-6 {
            continue;
        }
        let solver = GreenSolver::for_window(e, &w)?;
        let mut ok = true;
        for (k1, k2) in [(1, n), (n.div_ceil(2), n.div_ceil(2)), (1 + i % n, n - i % n)] {
            let c = green_entry_cramer(e, &w, k1, k2)?;
            let d = solver.entry(k1, k2)?;
            if d.log_abs() < -690.0 {
                continue;
            }
            let diff = (c.log_abs() - d.log_abs()).abs();
            s.worst = s.worst.max(diff);
            ok &= diff < 1e-6 && c.sign() == d.sign();
        }
        s.passed += usize::from(ok);
        done += 1;
    }
    Ok(s)
}

pub fn free_lyapunov(pool: &Pool, points: usize, n: usize) -> Result<Suite, CliError> {
    let grid = energy_grid(-4.0, 4.0, points);
    let curve = lyapunov_curve(pool, &PotentialSpec::free(), &grid, n, 1)?;
    let mut s = Suite { name: "free_lyapunov", cases: points, passed: 0, worst: 0.0 };
    for (e, g) in grid.iter().zip(&curve.gamma) {
        let d = (g - free_gamma_closed_form(*e)).abs();
        s.worst = s.worst.max(d);
        s.passed += usize::from(d < 1e-3);
    }
    Ok(s)
}

pub fn sieve(n_max: usize) -> Result<Suite, CliError> {
    let mu = mobius_sieve(n_max)?;
    let mut s = Suite { name: "mobius_sieve", cases: n_max, passed: 0, worst: 0.0 };
    for (i, &m) in mu.iter().enumerate() {
        s.passed += usize::from(m == trial_mu(i as u64 + 1));
    }
    Ok(s)
}

fn trial_mu(mut n: u64) -> i8 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        -sign
    } else {
        sign
    }
}

pub fn run(cfg: &RunConfig, pool: &Pool) -> Result<Artifact, CliError> {
    let suites = [
        transfer_identity(200)?,
        green_routes(50)?,
        free_lyapunov(pool, 50, 100_000)?,
        sieve(20_000)?,
    ];
    let mut t = Table::new(&["suite", "cases", "passed", "max_discrepancy", "status"]);
    let mut failed = Vec::new();
    for s in &suites {
        let pass = s.passed == s.cases;
        if !pass {
            failed.push(s.name);
        }
        t.push(vec![
            s.name.into(),
            s.cases.into(),
            s.passed.into(),
            s.worst.into(),
            if pass { "pass" } else { "fail" }.into(),
        ]);
    }
    let mut a = Artifact::new("selftest", cfg.describe(), t);
    if !failed.is_empty() {
        a.failure = Some(failed.join(", "));
    }
    Ok(a)
}
