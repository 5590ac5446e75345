//! Independent reference implementations used by the integration tests.
//! None of these share code with the library.

#![allow(dead_code, clippy::needless_range_loop)]

use num_bigint::{BigInt, Sign};
use num_traits::{One, Signed, ToPrimitive, Zero};

/// `x = m · 2^e` exactly.
pub fn dyadic(x: f64) -> (BigInt, i64) {
    if x == 0.0 {
        return (BigInt::zero(), 0);
    }
    let bits = x.to_bits();
    let neg = bits >> 63 == 1;
    let exp = ((bits >> 52) & 0x7ff) as i64;
    let frac = bits & ((1u64 << 52) - 1);
    let (m, e) = if exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), exp - 1075) };
    let m = BigInt::from(m);
    (if neg { -m } else { m }, e)
}

/// Exact determinant of a dense integer matrix by fraction-free Gaussian
/// elimination. Row `i` is replaced by `a_kk·row_i - a_ik·row_k` only when
/// `a_ik != 0`, and the accumulated row scalings are divided out at the end.
pub fn exact_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    let mut negate = false;
    let mut scale = BigInt::one();
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            if a[i][k].is_zero() {
                continue;
            }
            let (pivot, factor) = (a[k][k].clone(), a[i][k].clone());
            for j in k..n {
                let t = &pivot * &a[i][j] - &factor * &a[k][j];
                a[i][j] = t;
            }
            scale *= &pivot;
        }
    }
    let mut det = BigInt::one();
    for (k, row) in a.iter().enumerate() {
        det *= &row[k];
    }
    let det = det / scale;
    if negate {
        -det
    } else {
        det
    }
}

/// Natural log of `|b| · 2^exp2` without overflow. The binary exponents are
/// combined as integers so that large cancelling shifts lose nothing.
pub fn big_log_abs(b: &BigInt, exp2: i64) -> f64 {
    if b.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = b.bits() as i64;
    let shift = (bits - 64).max(0);
    // Leading bits as a mantissa in [1, 2).
    let top = (b.abs() >> shift as u64).to_f64().unwrap() / 2f64.powi((bits - 1 - shift) as i32);
    top.ln() + (bits - 1 + exp2) as f64 * std::f64::consts::LN_2
}

/// `det(E - H)` for the tridiagonal matrix with diagonal `v` and unit
/// off-diagonals, returned as (sign, log|det|) from exact arithmetic.
pub fn exact_char_det(energy: f64, v: &[f64]) -> (i8, f64) {
    let n = v.len();
    if n == 0 {
        return (1, 0.0);
    }
    let diag: Vec<(BigInt, i64)> = v
        .iter()
        .map(|&vi| {
            let (me, ee) = dyadic(energy);
            let (mv, ev) = dyadic(vi);
            let e = ee.min(ev);
            (me * (BigInt::one() << (ee - e) as usize) - mv * (BigInt::one() << (ev - e) as usize), e)
        })
        .collect();
    let lo = diag.iter().map(|d| d.1).min().unwrap().min(0);
    let scale = |x: &BigInt, e: i64| x * (BigInt::one() << (e - lo) as usize);
    let one = scale(&BigInt::one(), 0);
    let mut a = vec![vec![BigInt::zero(); n]; n];
    for i in 0..n {
        a[i][i] = scale(&diag[i].0, diag[i].1);
        if i + 1 < n {
            a[i][i + 1] = -one.clone();
            a[i + 1][i] = -one.clone();
        }
    }
    let det = exact_det(a);
    let sign = match det.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    };
    (sign, big_log_abs(&det, lo * n as i64))
}

/// Dense inverse of `H - E` by Gauss-Jordan with partial pivoting.
pub fn dense_green(energy: f64, v: &[f64]) -> Vec<Vec<f64>> {
    let n = v.len();
    let mut a = vec![vec![0.0; 2 * n]; n];
    for i in 0..n {
        a[i][i] = v[i] - energy;
        if i + 1 < n {
            a[i][i + 1] = 1.0;
            a[i + 1][i] = 1.0;
        }
        a[i][n + i] = 1.0;
    }
    for c in 0..n {
        let p = (c..n).max_by(|&x, &y| a[x][c].abs().total_cmp(&a[y][c].abs())).unwrap();
        a.swap(c, p);
        let d = a[c][c];
        for x in a[c].iter_mut() {
            *x /= d;
        }
        for r in 0..n {
            if r != c && a[r][c] != 0.0 {
                let f = a[r][c];
                let pivot_row = a[c].clone();
                for (x, y) in a[r].iter_mut().zip(&pivot_row) {
                    *x -= f * y;
                }
            }
        }
    }
    a.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// μ(n) by trial division.
pub fn mu_trial(mut n: u64) -> i8 {
    let mut k = 0;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            k += 1;
        }
        p += 1;
    }
    if n > 1 {
        k += 1;
    }
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of squarefree integers in `[1, n]`: `Σ_{d ≤ √n} μ(d) ⌊n/d²⌋`.
pub fn squarefree_count(n: u64) -> u64 {
    let mut total: i64 = 0;
    let mut d = 1u64;
    while d * d <= n {
        total += i64::from(mu_trial(d)) * (n / (d * d)) as i64;
        d += 1;
    }
    total as u64
}

/// Maximum number of pairwise disjoint length-`m` windows with starts in
/// `admissible`, by dynamic programming over positions.
pub fn max_disjoint_windows(admissible: &[usize], m: usize, ell: usize) -> usize {
    let mut best = vec![0usize; ell + m + 2];
    for i in (1..=ell).rev() {
        let skip = best[i + 1];
        let take = if admissible.contains(&i) { 1 + best[i + m] } else { 0 };
        best[i] = skip.max(take);
    }
    best[1]
}

/// Eigenvalues `2cos(kπ/(n+1))` of the free chain of length `n`, ascending.
pub fn free_spectrum(n: usize) -> Vec<f64> {
    let mut s: Vec<f64> =
        (1..=n).map(|k| 2.0 * (k as f64 * std::f64::consts::PI / (n as f64 + 1.0)).cos()).collect();
    s.sort_by(f64::total_cmp);
    s
}

#[test]
fn exact_det_small_cases() {
    let m = |rows: &[&[i64]]| rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
    assert_eq!(exact_det(m(&[&[2, 1], &[7, 4]])), BigInt::from(1));
    assert_eq!(exact_det(m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
    assert_eq!(exact_det(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]])), BigInt::from(-3));
    assert_eq!(exact_det(m(&[&[1, 2], &[2, 4]])), BigInt::from(0));
    // p_3 = 4 for the free chain at E = 2.
    let (s, l) = exact_char_det(2.0, &[0.0; 3]);
    assert_eq!(s, 1);
    assert!((l - 4f64.ln()).abs() < 1e-15);
}
