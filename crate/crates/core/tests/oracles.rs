#![allow(clippy::needless_range_loop)]

mod common;

use aperiodic_core::dynamics::{lyapunov_estimate, shoot, solve_forward};
use aperiodic_core::green::{
    distance_to_spectrum, green_entry_cramer, spectrum_values, GreenSolver,
};
use aperiodic_core::hull::{pattern_count, SymbolSequence};
use aperiodic_core::localization::{
    corner_decay, is_good_window, select_disjoint_intervals, GoodParams, GoodSetReport, Witness,
};
use aperiodic_core::potential::mobius_sieve;
use aperiodic_core::transfer::{char_det_values, transfer_product_values, verify_transfer_det_identity};
use aperiodic_core::{log_discrepancy, LogValue, PotentialSpec, PotentialWindow};
use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn bernoulli_window(rng: &mut StdRng, n: usize) -> Vec<f64> {
    (0..n).map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 }).collect()
}

fn window(v: Vec<f64>) -> PotentialWindow {
    PotentialWindow::from_values(1, v).unwrap()
}

#[test]
fn char_det_matches_exact_determinant() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..60 {
        let n = rng.random_range(1..=64);
        let e = rng.random_range(-4.0..4.0);
        let v = bernoulli_window(&mut rng, n);
        let got = char_det_values(e, &v).last;
        let (sign, log_abs) = exact_char_det(e, &v);
        assert_eq!(got.sign(), sign);
        assert!(log_discrepancy(got, LogValue::new(sign, log_abs)) < 1e-9, "n={n} e={e}");
    }
}

#[test]
fn transfer_entries_match_exact_determinants() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..40 {
        let n = rng.random_range(3..=40);
        let e = rng.random_range(-4.0..4.0);
        let v = bernoulli_window(&mut rng, n);
        let m = transfer_product_values(e, &v).unwrap();
        let det = |s: &[f64]| {
            let (sg, l) = exact_char_det(e, s);
            LogValue::new(sg, l)
        };
        let want = [
            [det(&v), -det(&v[1..])],
            [det(&v[..n - 1]), -det(&v[1..n - 1])],
        ];
        for (i, row) in want.iter().enumerate() {
            for (j, w) in row.iter().enumerate() {
                let d = log_discrepancy(m.entry(i, j), *w);
                assert!(d < 1e-9, "entry ({i},{j}) n={n} e={e}: {d}");
            }
        }
        assert!(verify_transfer_det_identity(e, &window(v), 1e-9).unwrap().pass);
    }
}

#[test]
fn direct_solve_matches_dense_inverse() {
    let mut rng = StdRng::seed_from_u64(13);
    let mut done = 0;
    while done < 40 {
        let n = rng.random_range(1..=64);
        let v: Vec<f64> = (0..n).map(|_| rng.random_range(-2.0..2.0)).collect();
        let e = rng.random_range(-5.0..5.0);
        if distance_to_spectrum(&v, e) < 1e-3 {
            continue;
        }
        let dense = dense_green(e, &v);
        let scale = dense.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
        let solver = GreenSolver::new(e, &v).unwrap();
        for k in 1..=n {
            let col = solver.column(k).unwrap().to_f64();
            for x in 0..n {
                assert!((col[x] - dense[x][k - 1]).abs() <= 1e-10 * scale.max(1.0));
            }
        }
        done += 1;
    }
}

#[test]
fn direct_solve_residual_and_symmetry() {
    let mut rng = StdRng::seed_from_u64(14);
    for _ in 0..30 {
        let n = rng.random_range(2..=200);
        let v: Vec<f64> = (0..n).map(|_| [-2.0, 0.0, 2.0][rng.random_range(0..3)]).collect();
        let e = rng.random_range(-3.0..3.0);
        let Ok(solver) = GreenSolver::new(e, &v) else { continue };
        let k = rng.random_range(1..=n);
        let col = solver.column(k).unwrap().to_f64();
        let scale = col.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        for i in 0..n {
            let mut r = (v[i] - e) * col[i];
            if i > 0 {
                r += col[i - 1];
            }
            if i + 1 < n {
                r += col[i + 1];
            }
            let want = if i + 1 == k { 1.0 } else { 0.0 };
            assert!((r - want).abs() < 1e-8 * scale, "residual {r} at {i}");
        }
        for x in 1..=n {
            let a = solver.entry(x, k).unwrap();
            let b = solver.entry(k, x).unwrap();
            if a.log_abs() > -600.0 {
                assert!(log_discrepancy(a, b) < 1e-9);
            }
        }
    }
}

#[test]
fn cramer_and_direct_agree() {
    let mut rng = StdRng::seed_from_u64(15);
    let mut done = 0;
    while done < 30 {
        let n = rng.random_range(1..=512);
        let v = bernoulli_window(&mut rng, n);
        let e = rng.random_range(-4.0..4.0);
        if distance_to_spectrum(&v, e) < 1e-6 {
            continue;
        }
        let w = window(v);
        let solver = GreenSolver::for_window(e, &w).unwrap();
        for _ in 0..5 {
            let k1 = rng.random_range(1..=n);
            let k2 = rng.random_range(1..=n);
            let c = green_entry_cramer(e, &w, k1, k2).unwrap();
            let d = solver.entry(k1, k2).unwrap();
            if d.log_abs() > -690.0 {
                assert_eq!(c.sign(), d.sign());
                assert!((c.log_abs() - d.log_abs()).abs() < 1e-6);
            }
        }
        done += 1;
    }
}

#[test]
fn spectrum_free_closed_form_and_gershgorin() {
    for n in [1, 2, 3, 10, 57] {
        let got = spectrum_values(&vec![0.0; n]).unwrap();
        for (a, b) in got.iter().zip(free_spectrum(n)) {
            assert!((a - b).abs() < 1e-12);
        }
    }
    let mut rng = StdRng::seed_from_u64(16);
    let v: Vec<f64> = (0..80).map(|_| rng.random_range(-3.0..1.0)).collect();
    let (lo, hi) = v.iter().fold((f64::MAX, f64::MIN), |(l, h), &x| (l.min(x), h.max(x)));
    for ev in spectrum_values(&v).unwrap() {
        assert!(ev >= lo - 2.0 && ev <= hi + 2.0);
        // Eigenvalues are roots of the characteristic determinant.
        let s = char_det_values(ev, &v).last;
        let near = char_det_values(ev + 1e-6, &v).last;
        assert!(s.log_abs() < near.log_abs());
    }
}

#[test]
fn sieve_matches_trial_division() {
    let mu = mobius_sieve(100_000).unwrap();
    for (i, &m) in mu.iter().enumerate() {
        assert_eq!(m, mu_trial(i as u64 + 1), "n = {}", i + 1);
    }
    for n in 1..=10_000u64 {
        let square_divisor = (2..=100u64).any(|p| n % (p * p) == 0);
        assert_eq!(mu[n as usize - 1] == 0, square_divisor);
    }
    assert_eq!(mu[..10].iter().map(|&m| i64::from(m)).sum::<i64>(), -1);
}

#[test]
fn zero_count_matches_squarefree_oracle() {
    let seq = SymbolSequence::moebius(200_001).unwrap();
    for n in [1u64, 10, 99, 1000, 12_345, 200_000] {
        let zeros = pattern_count(&seq, &[0], n as usize).unwrap();
        assert_eq!(zeros, n - squarefree_count(n));
    }
}

#[test]
fn greedy_selection_is_optimal() {
    let mut rng = StdRng::seed_from_u64(17);
    let params = GoodParams::new(0.01, 0.1, 1).unwrap();
    for _ in 0..300 {
        let m = rng.random_range(1..=5);
        let ell = rng.random_range(m..=60);
        let p: f64 = rng.random();
        let starts: Vec<usize> = (1..=ell + 1 - m).filter(|_| rng.random::<f64>() < p).collect();
        let report = GoodSetReport {
            energy: 0.0,
            params: GoodParams { m, ..params },
            range_end: ell,
            stride: 1,
            evaluated: ell + 1 - m,
            density: starts.len() as f64 / (ell + 1 - m) as f64,
            good_starts: starts.clone(),
        };
        let sel = select_disjoint_intervals(&report, 0.5).unwrap();
        assert_eq!(sel.intervals.len(), max_disjoint_windows(&starts, m, ell + 1 - m));
        for w in sel.intervals.windows(2) {
            assert!(w[0].end < w[1].start);
        }
        for iv in &sel.intervals {
            assert_eq!(iv.len(), m);
            assert!(starts.contains(&iv.start));
        }
    }
}

#[test]
fn failure_witnesses_recheck() {
    let mut rng = StdRng::seed_from_u64(18);
    let mut failures = 0;
    for _ in 0..200 {
        let m = rng.random_range(5..=40);
        let v: Vec<f64> = (0..m).map(|_| [-2.0, 0.0, 2.0][rng.random_range(0..3)]).collect();
        let e = rng.random_range(-4.5..4.5);
        let params = GoodParams::new(rng.random_range(0.01..0.3), rng.random_range(0.05..1.5), m).unwrap();
        let verdict = is_good_window(e, &window(v.clone()), &params).unwrap();
        let dense = dense_green(e, &v);
        match verdict.witness {
            None => {
                assert!(verdict.good);
                let norm_bound = (params.delta * m as f64).exp();
                assert!(1.0 / distance_to_spectrum(&v, e) < norm_bound);
                for a in 0..m {
                    for b in 0..m {
                        let gap = a.abs_diff(b);
                        if gap as f64 > params.delta * m as f64 {
                            let g = dense[a][b].abs();
                            assert!(g.ln() < -params.decay * gap as f64 + 1e-6);
                        }
                    }
                }
            }
            Some(Witness::Singular { .. }) => failures += 1,
            Some(Witness::Norm { log_norm, bound }) => {
                failures += 1;
                assert!(log_norm >= bound);
                let dist = distance_to_spectrum(&v, e);
                assert!((-dist.ln() - log_norm).abs() < 1e-9);
            }
            Some(Witness::Decay { k1, k2, log_abs, bound }) => {
                failures += 1;
                let gap = k1.abs_diff(k2);
                assert!(gap as f64 > params.delta * m as f64);
                let g = dense[k1 - 1][k2 - 1].abs().ln();
                assert!((g - log_abs).abs() < 1e-6);
                assert!(g >= bound - 1e-6);
                assert_eq!(bound, -params.decay * gap as f64);
            }
        }
    }
    assert!(failures > 20);
}

#[test]
fn good_set_monotone_in_decay_and_delta() {
    let mut rng = StdRng::seed_from_u64(19);
    for _ in 0..200 {
        let m = 50;
        let v: Vec<f64> = (0..m).map(|_| [-1.0, 0.0, 1.0][rng.random_range(0..3)]).collect();
        let e = rng.random_range(-5.0..5.0);
        let w = window(v);
        let good = |delta: f64, b: f64| is_good_window(e, &w, &GoodParams::new(delta, b, m).unwrap()).unwrap().good;
        // Larger b is stricter.
        if good(0.01, 0.4) {
            assert!(good(0.01, 0.2));
        }
        // floor(δM) is 0 for both δ, so the decay clause is the same.
        if good(0.005, 0.1) {
            assert!(good(0.015, 0.1));
        }
    }
}

#[test]
fn corner_decay_off_spectrum_bound() {
    let specs = [PotentialSpec::free(), PotentialSpec::moebius(1.0).unwrap()];
    for spec in &specs {
        let vmax = spec.max_abs();
        for e in [-7.0f64, -5.5, 5.0, 6.0, 9.0] {
            let dist = (e.abs() - (vmax + 2.0)).max(0.0);
            if dist < 1.0 {
                continue;
            }
            for ell in [50, 200, 400] {
                let c = corner_decay(e, spec, ell, 0.5).unwrap();
                let bound = -(ell as f64) * (1.0 + dist / 2.0).acosh() / 2.0;
                assert!(c.corner_log_max <= bound, "{} e={e} ell={ell}", spec.label());
            }
        }
    }
}

#[test]
fn shooting_matches_transfer_product() {
    let spec = PotentialSpec::moebius(2.0).unwrap();
    let v = spec.sample(1, 3000).unwrap();
    for e in [-1.3, 0.5, 2.2] {
        let psi = solve_forward(e, v.values());
        for n in [1usize, 7, 100, 2999] {
            let m = transfer_product_values(e, &v.values()[..n]).unwrap();
            let (next, cur) = m.apply(1.0, 0.0);
            let tol = 1e-9 * n as f64;
            assert!(log_discrepancy(next, psi[n + 1]) <= tol);
            assert!(log_discrepancy(cur, psi[n]) <= tol);
        }
    }
}

#[test]
fn shooting_growth_tracks_lyapunov_when_hyperbolic() {
    let cases = [
        (PotentialSpec::free(), 2.5),
        (PotentialSpec::moebius(2.0).unwrap(), 0.5),
        (PotentialSpec::moebius(2.0).unwrap(), -2.8),
    ];
    for (spec, e) in &cases {
        let n = 1_000_000;
        let gamma = lyapunov_estimate(*e, spec, n, 1).unwrap();
        assert!(gamma > 0.1, "{} e={e}: gamma {gamma}", spec.label());
        let trace = shoot(*e, spec, n).unwrap();
        assert!((trace.growth - gamma).abs() < 5e-2, "{} e={e}: {} vs {gamma}", spec.label(), trace.growth);
    }
}

#[test]
fn periodic_zero_word_million() {
    use aperiodic_core::hull::periodic_word_decay;
    let n = 1_000_000;
    let seq = SymbolSequence::moebius(n + 5).unwrap();
    let table = periodic_word_decay(&seq, &[0], &[0, 1, 2, 3, 4, 5], n).unwrap();
    let oracle = 1.0 - squarefree_count(n as u64) as f64 / n as f64;
    assert_eq!((table[0].1 * n as f64).round() as u64, n as u64 - squarefree_count(n as u64));
    assert!((table[0].1 - oracle).abs() < 1e-15);
    assert!((table[0].1 - (1.0 - 6.0 / std::f64::consts::PI.powi(2))).abs() < 1e-3);
    assert!(table.windows(2).all(|w| w[1].1 <= w[0].1));
    assert!(table[5].1 < 0.01);
}
