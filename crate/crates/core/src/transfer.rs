//! Transfer matrices and characteristic determinants.
//!
//! For a window `v_1, …, v_N` the one-step matrix `A_n = [[E - v_n, -1], [1, 0]]`
//! maps `(ψ_n, ψ_{n-1})` to `(ψ_{n+1}, ψ_n)`. Products are ordered with later
//! factors on the left:
//!
//! ```text
//! M_N = A_N · A_{N-1} · … · A_1
//! ```
//!
//! With `p_n = det(E - H_{[1,n]})` (`p_0 = 1`, `p_{-1} = 0`) and `q_n` the same
//! determinant for the window with its first site removed,
//!
//! ```text
//! M_N = [[p_N, -q_{N-1}], [p_{N-1}, -q_{N-2}]]
//! ```
//!
//! which [`verify_transfer_det_identity`] checks entry by entry.

use core::f64::consts::LN_2;

use crate::logval::log_discrepancy;
use crate::scale::{exponent, ldexp, out_of_range};
use crate::{Error, LogValue, PotentialWindow, Result};

pub type Mat2 = [[f64; 2]; 2];

pub fn step_matrix(energy: f64, v: f64) -> Mat2 {
    [[energy - v, -1.0], [1.0, 0.0]]
}

/// The matrix `2^exp2 · m`, with `m`'s largest entry kept in `[1/2, 2]`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScaledMatrix2 {
    m: Mat2,
    exp2: i64,
}

impl ScaledMatrix2 {
    pub const IDENTITY: ScaledMatrix2 = ScaledMatrix2 { m: [[1.0, 0.0], [0.0, 1.0]], exp2: 0 };

    pub fn from_matrix(m: Mat2) -> Self {
        let mut s = ScaledMatrix2 { m, exp2: 0 };
        s.renormalize();
        s
    }

    /// The normalized part.
    pub fn matrix(&self) -> Mat2 {
        self.m
    }

    pub fn exp2(&self) -> i64 {
        self.exp2
    }

    /// Natural log of the scale factor.
    pub fn log_scale(&self) -> f64 {
        self.exp2 as f64 * LN_2
    }

    pub fn entry(&self, row: usize, col: usize) -> LogValue {
        LogValue::from_scaled(self.m[row][col], self.exp2)
    }

    /// The represented matrix as plain doubles (may overflow).
    pub fn to_f64(&self) -> Mat2 {
        let e = self.exp2.clamp(-5000, 5000) as i32;
        let s = |x: f64| ldexp(x, e);
        [[s(self.m[0][0]), s(self.m[0][1])], [s(self.m[1][0]), s(self.m[1][1])]]
    }

    /// Log of the spectral norm of the represented matrix.
    pub fn log_norm(&self) -> f64 {
        libm::log(spectral_norm(&self.m)) + self.log_scale()
    }

    /// Determinant of the represented matrix as a log value.
    pub fn det(&self) -> LogValue {
        let [[a, b], [c, d]] = self.m;
        LogValue::from_scaled(a * d - b * c, 2 * self.exp2)
    }

    /// `|det(m) - 2^{-2·exp2}| / max|m_ij|²`: how far the represented
    /// determinant is from one, measured against the entry scale. Products of
    /// det-one steps keep this near `N·ε`; the unscaled `|det - 1|` is not
    /// computable once the norm is large, because `det` then cancels to
    /// far below the entries.
    pub fn unimodularity_defect(&self) -> f64 {
        let [[a, b], [c, d]] = self.m;
        let max = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
        let target = ldexp(1.0, (-2 * self.exp2).clamp(-2000, 2000) as i32);
        ((a * d - b * c) - target).abs() / (max * max)
    }

    /// `self ← A · self` with `A = step_matrix(energy, v)`.
    #[inline]
    pub fn push_step(&mut self, energy: f64, v: f64) {
        let t = energy - v;
        let [[a, b], [c, d]] = self.m;
        self.m = [[t * a - c, t * b - d], [a, b]];
        self.renormalize();
    }

    /// `self · rhs`.
    pub fn mul(&self, rhs: &ScaledMatrix2) -> ScaledMatrix2 {
        let (x, y) = (&self.m, &rhs.m);
        let mut out = ScaledMatrix2 {
            m: [
                [x[0][0] * y[0][0] + x[0][1] * y[1][0], x[0][0] * y[0][1] + x[0][1] * y[1][1]],
                [x[1][0] * y[0][0] + x[1][1] * y[1][0], x[1][0] * y[0][1] + x[1][1] * y[1][1]],
            ],
            exp2: self.exp2 + rhs.exp2,
        };
        out.renormalize();
        out
    }

    /// Applies the represented matrix to `(x0, x1)`, returning log values.
    pub fn apply(&self, x0: f64, x1: f64) -> (LogValue, LogValue) {
        let [[a, b], [c, d]] = self.m;
        (
            LogValue::from_scaled(a * x0 + b * x1, self.exp2),
            LogValue::from_scaled(c * x0 + d * x1, self.exp2),
        )
    }

    #[inline]
    fn renormalize(&mut self) {
        let [[a, b], [c, d]] = self.m;
        let max = a.abs().max(b.abs()).max(c.abs()).max(d.abs());
        if max == 0.0 || !out_of_range(max) {
            return;
        }
        let e = exponent(max);
        for row in &mut self.m {
            for x in row.iter_mut() {
                *x = ldexp(*x, -e);
            }
        }
        self.exp2 += i64::from(e);
    }
}

/// Largest singular value of a 2×2 matrix, in closed form.
pub fn spectral_norm(m: &Mat2) -> f64 {
    let [[a, b], [c, d]] = *m;
    let q = libm::hypot(a + d, c - b);
    let r = libm::hypot(a - d, b + c);
    0.5 * (q + r)
}

fn check_finite(energy: f64, values: &[f64]) -> Result<()> {
    if !energy.is_finite() {
        return Err(Error::input("energy must be finite"));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::input("potential value must be finite"));
    }
    Ok(())
}

/// `A_N ··· A_1` over `values = (v_1, …, v_N)`.
pub fn transfer_product_values(energy: f64, values: &[f64]) -> Result<ScaledMatrix2> {
    check_finite(energy, values)?;
    let mut m = ScaledMatrix2::IDENTITY;
    for &v in values {
        m.push_step(energy, v);
    }
    Ok(m)
}

pub fn transfer_product(energy: f64, window: &PotentialWindow) -> Result<ScaledMatrix2> {
    transfer_product_values(energy, window.values())
}

/// `p_N` and `p_{N-1}` for a window of length `N`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DetTriple {
    pub n: usize,
    pub last: LogValue,
    pub prev: LogValue,
}

/// Runs `p_n = (E - v_n) p_{n-1} - p_{n-2}` over `values` with power-of-two
/// rescaling. An empty slice gives `p_0 = 1`, `p_{-1} = 0`.
pub fn char_det_values(energy: f64, values: &[f64]) -> DetTriple {
    let (mut last, mut prev, mut exp2) = (1.0f64, 0.0f64, 0i64);
    for &v in values {
        let next = (energy - v) * last - prev;
        prev = last;
        last = next;
        let max = last.abs().max(prev.abs());
        if max != 0.0 && out_of_range(max) {
            let e = exponent(max);
            last = ldexp(last, -e);
            prev = ldexp(prev, -e);
            exp2 += i64::from(e);
        }
    }
    DetTriple {
        n: values.len(),
        last: LogValue::from_scaled(last, exp2),
        prev: LogValue::from_scaled(prev, exp2),
    }
}

pub fn char_det(energy: f64, window: &PotentialWindow) -> DetTriple {
    char_det_values(energy, window.values())
}

/// Result of an identity check: pass flag and the worst discrepancy seen.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IdentityCheck {
    pub pass: bool,
    pub max_discrepancy: f64,
}

/// Entries below this fraction of the matrix norm are compared absolutely.
const TINY_ENTRY: f64 = 1e-14;

/// Compares each entry of `M_N` with the determinant it should equal.
///
/// Large entries are compared by [`log_discrepancy`]; entries below `1e-14`
/// times the norm are compared by absolute difference relative to the norm.
pub fn verify_transfer_det_identity(
    energy: f64,
    window: &PotentialWindow,
    tol: f64,
) -> Result<IdentityCheck> {
    let v = window.values();
    let n = v.len();
    let m = transfer_product(energy, window)?;
    let full = char_det_values(energy, v).last;
    let truncated = char_det_values(energy, &v[..n - 1]).last;
    let shifted = char_det_values(energy, &v[1..]).last;
    let both = if n >= 2 { char_det_values(energy, &v[1..n - 1]).last } else { LogValue::ZERO };
    let expected = [[full, -shifted], [truncated, -both]];

    let log_norm = m.log_norm();
    let threshold = log_norm + libm::log(TINY_ENTRY);
    let mut worst = 0.0f64;
    for (i, row) in expected.iter().enumerate() {
        for (j, &want) in row.iter().enumerate() {
            let got = m.entry(i, j);
            let d = if got.log_abs() <= threshold || want.log_abs() <= threshold {
                let diff = got - want;
                if diff.is_zero() {
                    0.0
                } else {
                    libm::exp(diff.log_abs() - log_norm)
                }
            } else {
                log_discrepancy(got, want)
            };
            worst = worst.max(d);
        }
    }
    Ok(IdentityCheck { pass: worst <= tol, max_discrepancy: worst })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn window(values: Vec<f64>) -> PotentialWindow {
        PotentialWindow::from_values(1, values).unwrap()
    }

    #[test]
    fn step_matrix_examples() {
        assert_eq!(step_matrix(0.0, 0.0), [[0.0, -1.0], [1.0, 0.0]]);
        assert_eq!(step_matrix(3.0, 1.0), [[2.0, -1.0], [1.0, 0.0]]);
        let [[a, b], [c, d]] = step_matrix(-1.7, 0.3);
        assert_eq!(a * d - b * c, 1.0);
    }

    #[test]
    fn free_rotation() {
        let m2 = transfer_product(0.0, &window(vec![0.0; 2])).unwrap();
        assert_eq!(m2.to_f64(), [[-1.0, 0.0], [0.0, -1.0]]);
        let m4 = transfer_product(0.0, &window(vec![0.0; 4])).unwrap();
        assert_eq!(m4.to_f64(), [[1.0, 0.0], [0.0, 1.0]]);
        assert_eq!(m4.log_norm(), 0.0);
    }

    #[test]
    fn single_step_is_rescaled_step_matrix() {
        let m = transfer_product(7.0, &window(vec![-2.0])).unwrap();
        assert_eq!(m.to_f64(), step_matrix(7.0, -2.0));
        assert_eq!(m.exp2(), 4);
        let max = m.matrix().iter().flatten().fold(0.0f64, |a, x| a.max(x.abs()));
        assert!((0.5..=2.0).contains(&max));
    }

    #[test]
    fn non_finite_input() {
        assert!(transfer_product(f64::NAN, &window(vec![0.0])).is_err());
        assert!(transfer_product_values(0.0, &[f64::INFINITY]).is_err());
    }

    #[test]
    fn char_det_examples() {
        let p = char_det_values(2.0, &[0.0; 3]);
        assert!((p.last.to_f64() - 4.0).abs() < 1e-15);
        assert!((p.prev.to_f64() - 3.0).abs() < 1e-15);
        assert!((char_det_values(0.0, &[0.0; 2]).last.to_f64() + 1.0).abs() < 1e-15);
        let p1 = char_det_values(0.4, &[1.25]);
        assert!((p1.last.to_f64() - (0.4 - 1.25)).abs() < 1e-15);
        assert_eq!(char_det_values(0.0, &[0.0; 3]).last, LogValue::ZERO);
    }

    #[test]
    fn identity_small_cases() {
        let r = verify_transfer_det_identity(0.0, &window(vec![0.0; 2]), 1e-12).unwrap();
        assert!(r.pass);
        assert_eq!(r.max_discrepancy, 0.0);
        let r = verify_transfer_det_identity(0.3, &window(vec![1.0]), 1e-12).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn long_products_do_not_overflow() {
        let v: Vec<f64> = (0..200_000).map(|i| if i % 3 == 0 { 2.0 } else { -2.0 }).collect();
        let m = transfer_product_values(0.5, &v).unwrap();
        assert!(m.log_norm().is_finite() && m.log_norm() > 1000.0);
        assert!(m.unimodularity_defect() < 1e-9 * 200_000.0);
    }

    fn bernoulli_values() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(prop_oneof![Just(-1.0), Just(1.0)], 1..64)
    }

    proptest! {
        #[test]
        fn unimodular(e in -4.0f64..4.0, v in proptest::collection::vec(-3.0f64..3.0, 1..400)) {
            let m = transfer_product_values(e, &v).unwrap();
            prop_assert!(m.unimodularity_defect() <= 1e-9 * v.len() as f64);
            if m.log_norm() < 5.0 {
                let det = m.det();
                prop_assert_eq!(det.sign(), 1);
                prop_assert!(det.log_abs().abs() <= 1e-9 * v.len() as f64);
            }
            prop_assert!(m.log_norm() >= -1e-12);
        }

        #[test]
        fn cocycle(e in -4.0f64..4.0, v in proptest::collection::vec(-2.0f64..2.0, 2..300), cut in 0.0f64..1.0) {
            let b = ((v.len() as f64 * cut) as usize).clamp(1, v.len() - 1);
            let whole = transfer_product_values(e, &v).unwrap();
            let lower = transfer_product_values(e, &v[..b]).unwrap();
            let upper = transfer_product_values(e, &v[b..]).unwrap();
            let joined = upper.mul(&lower);
            let tol = 1e-9 * v.len() as f64;
            let ln = whole.log_norm();
            for i in 0..2 {
                for j in 0..2 {
                    let (x, y) = (whole.entry(i, j), joined.entry(i, j));
                    let diff = x - y;
                    let rel = if diff.is_zero() { 0.0 } else { libm::exp(diff.log_abs() - ln) };
                    prop_assert!(rel <= tol, "entry ({},{}) {:?} vs {:?}", i, j, x, y);
                }
            }
        }

        #[test]
        fn identity_holds(e in -4.0f64..4.0, v in bernoulli_values()) {
            let r = verify_transfer_det_identity(e, &window(v), 1e-9).unwrap();
            prop_assert!(r.pass, "{:?}", r);
        }
    }
}
