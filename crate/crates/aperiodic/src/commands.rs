//! One function per subcommand, each returning an [`Artifact`].

use aperiodic_core::dynamics::{lyapunov_curve, shoot};
use aperiodic_core::green::{green_entry_cramer, GreenSolver};
use aperiodic_core::hull::{pattern_count, SymbolSequence};
use aperiodic_core::localization::{good_set, paving_scan, GoodParams};
use aperiodic_core::potential::mobius_sieve;
use serde_json::json;

use crate::artifact::{Artifact, Cell, Table};
use crate::config::{Command, Method, RunConfig};
use crate::error::CliError;
use crate::pool::Pool;
use crate::selftest;

const DEFAULT_STEPS: usize = 100_000;
const DEFAULT_GREEN_SITES: usize = 64;
const DEFAULT_PATTERN_POSITIONS: usize = 1_000_000;
const DEFAULT_ENERGY: f64 = 0.5;

pub fn run(cmd: &Command, pool: &Pool) -> Result<Artifact, CliError> {
    match cmd {
        Command::Sweep(c) => sweep(c, pool),
        Command::Grow(c) => grow(c),
        Command::Green(c) => green(c),
        Command::Density(c) => density(c, pool),
        Command::Paving(c) => paving(c, pool),
        Command::Mobius(c) => mobius(c),
        Command::Patterns(c) => patterns(c),
        Command::Selftest(c) => selftest::run(c, pool),
    }
}

fn meta(cfg: &RunConfig, extra: &[(&str, String)]) -> Vec<(String, String)> {
    let mut m = cfg.describe();
    m.extend(extra.iter().map(|(k, v)| (k.to_string(), v.clone())));
    m
}

fn params(cfg: &RunConfig) -> Result<GoodParams, CliError> {
    Ok(GoodParams::new(cfg.delta(), cfg.b, cfg.m)?)
}

pub fn sweep(cfg: &RunConfig, pool: &Pool) -> Result<Artifact, CliError> {
    let spec = cfg.spec()?;
    let grid = cfg.energy_grid()?;
    let n = cfg.n_or(DEFAULT_STEPS);
    let curve = lyapunov_curve(pool, &spec, &grid, n, cfg.shifts)?;
    let mut t = Table::new(&["energy", "gamma", "N", "shifts", "potential", "lambda", "seed"]);
    for (e, g) in curve.energies.iter().zip(&curve.gamma) {
        t.push(vec![
            (*e).into(),
            (*g).into(),
            n.into(),
            cfg.shifts.into(),
            spec.label().into(),
            spec.lambda().into(),
            spec.seed().into(),
        ]);
    }
    let mut a = Artifact::new("sweep", meta(cfg, &[("resolved_N", n.to_string())]), t);
    a.extra = Some(json!({ "spread": curve.spread }));
    Ok(a)
}

pub fn grow(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let spec = cfg.spec()?;
    let e = cfg.energy_or(DEFAULT_ENERGY);
    let n = cfg.n_or(DEFAULT_STEPS);
    let trace = shoot(e, &spec, n)?;
    let mut t = Table::new(&["n", "sign", "log_abs_psi"]);
    for c in &trace.checkpoints {
        t.push(vec![c.n.into(), c.value.sign().into(), c.value.log_abs().into()]);
    }
    t.push(vec!["growth".into(), Cell::Text(String::new()), trace.growth.into()]);
    let mut a = Artifact::new(
        "grow",
        meta(cfg, &[("resolved_energy", e.to_string()), ("resolved_N", n.to_string())]),
        t,
    );
    a.extra = Some(json!({
        "energy": e,
        "growth": trace.growth,
        "boundary": [trace.boundary.0, trace.boundary.1],
    }));
    Ok(a)
}

pub fn green(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let spec = cfg.spec()?;
    let e = cfg.energy_or(DEFAULT_ENERGY);
    let n = cfg.n_or(DEFAULT_GREEN_SITES);
    let window = spec.sample(1, n)?;
    let pairs: Vec<(usize, usize)> = match (cfg.k1, cfg.k2) {
        (Some(a), Some(b)) => vec![(a, b)],
        (Some(a), None) => (1..=n).map(|y| (a, y)).collect(),
        (None, b) => {
            let k = b.unwrap_or(n);
            (1..=n).map(|x| (x, k)).collect()
        }
    };
    let solver = match cfg.method {
        Method::Cramer => None,
        _ => Some(GreenSolver::for_window(e, &window)?),
    };
    let mut t = Table::new(&["k1", "k2", "log_abs_G", "sign", "method"]);
    for (k1, k2) in pairs {
        if cfg.method != Method::Direct {
            let g = green_entry_cramer(e, &window, k1, k2)?;
            t.push(vec![k1.into(), k2.into(), g.log_abs().into(), g.sign().into(), "cramer".into()]);
        }
        if let Some(s) = &solver {
            let g = s.entry(k1, k2)?;
            t.push(vec![k1.into(), k2.into(), g.log_abs().into(), g.sign().into(), "direct".into()]);
        }
    }
    let perturbed = solver.as_ref().is_some_and(|s| s.perturbed());
    let mut a = Artifact::new(
        "green",
        meta(cfg, &[("resolved_energy", e.to_string()), ("resolved_N", n.to_string())]),
        t,
    );
    if perturbed {
        a.notes.push("direct solve ran at a perturbed energy (pivot breakdown)".into());
    }
    a.extra = Some(json!({ "perturbed": perturbed }));
    Ok(a)
}

pub fn density(cfg: &RunConfig, pool: &Pool) -> Result<Artifact, CliError> {
    let spec = cfg.spec()?;
    let grid = cfg.energy_grid()?;
    let p = params(cfg)?;
    let mut t = Table::new(&["energy", "density", "M", "delta", "b", "ell"]);
    let mut evaluated = Vec::with_capacity(grid.len());
    for &e in &grid {
        let r = good_set(pool, e, &spec, &p, cfg.ell, cfg.stride)?;
        t.push(vec![e.into(), r.density.into(), p.m.into(), p.delta.into(), p.decay.into(), cfg.ell.into()]);
        evaluated.push(json!({ "evaluated": r.evaluated, "good": r.good_starts.len() }));
    }
    let mut a = Artifact::new("density", meta(cfg, &[]), t);
    a.notes = p.paving_warnings().iter().map(|w| format!("paving hypothesis not met: {w:?}")).collect();
    a.extra = Some(json!({ "counts": evaluated }));
    Ok(a)
}

pub fn paving(cfg: &RunConfig, pool: &Pool) -> Result<Artifact, CliError> {
    let spec = cfg.spec()?;
    let e = cfg.energy_or(DEFAULT_ENERGY);
    let p = params(cfg)?;
    let ells = cfg.ells()?;
    let (reports, rate) = paving_scan(pool, e, &spec, &p, &ells, cfg.c0)?;
    let mut t = Table::new(&["ell", "corner_log_max"]);
    for r in &reports {
        t.push(vec![r.ell.into(), r.corner.corner_log_max.into()]);
    }
    let mut a = Artifact::new("paving", meta(cfg, &[("resolved_energy", e.to_string())]), t);
    a.notes = p.paving_warnings().iter().map(|w| format!("paving hypothesis not met: {w:?}")).collect();
    a.extra = Some(json!({ "reports": reports, "fitted_rate": rate }));
    Ok(a)
}

pub fn mobius(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let mu = mobius_sieve(cfg.nmax)?;
    let mut t = Table::new(&["n", "mu"]);
    for (i, m) in mu.iter().enumerate() {
        t.push(vec![(i + 1).into(), (*m).into()]);
    }
    Ok(Artifact::new("mobius", meta(cfg, &[]), t))
}

pub fn patterns(cfg: &RunConfig) -> Result<Artifact, CliError> {
    let base = cfg.word()?;
    if base.is_empty() {
        return Err(CliError::Usage("empty word".into()));
    }
    let n = cfg.n_or(DEFAULT_PATTERN_POSITIONS);
    let words: Vec<(usize, Vec<i64>)> = match cfg.r_values()? {
        Some(rs) => rs
            .into_iter()
            .map(|r| (r, (0..=r).map(|i| base[i % base.len()]).collect()))
            .collect(),
        None => vec![(base.len() - 1, base.clone())],
    };
    let span = words.iter().map(|(r, _)| r + 1).max().unwrap_or(1);
    let seq = SymbolSequence::moebius(n + span - 1)?;
    let mut t = Table::new(&["word", "r", "N", "count", "frequency"]);
    for (r, w) in &words {
        let count = pattern_count(&seq, w, n)?;
        let text = w.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
        t.push(vec![text.into(), (*r).into(), n.into(), count.into(), (count as f64 / n as f64).into()]);
    }
    Ok(Artifact::new("patterns", meta(cfg, &[("resolved_N", n.to_string())]), t))
}
