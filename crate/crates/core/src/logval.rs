use core::cmp::Ordering;
use core::f64::consts::LN_2;
use core::ops::{Add, Div, Mul, Neg, Sub};

/// A real number stored as a sign and the natural log of its magnitude.
///
/// Zero is `sign == 0` with `log_abs == -inf`; no other value has a
/// non-finite log except the `±inf` produced by dividing by zero.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LogValue {
    sign: i8,
    log_abs: f64,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { sign: 0, log_abs: f64::NEG_INFINITY };
    pub const ONE: LogValue = LogValue { sign: 1, log_abs: 0.0 };

    /// Builds a value from its parts; a zero sign or `-inf` log gives zero.
    pub fn new(sign: i8, log_abs: f64) -> Self {
        if sign == 0 || log_abs == f64::NEG_INFINITY {
            Self::ZERO
        } else {
            LogValue { sign: sign.signum(), log_abs }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogValue { sign: if x > 0.0 { 1 } else { -1 }, log_abs: libm::log(x.abs()) }
        }
    }

    /// The value `mantissa · 2^exp2`.
    pub fn from_scaled(mantissa: f64, exp2: i64) -> Self {
        let v = Self::from_f64(mantissa);
        if v.sign == 0 {
            v
        } else {
            LogValue { sign: v.sign, log_abs: v.log_abs + exp2 as f64 * LN_2 }
        }
    }

    /// Converts back to a double; underflows to zero and overflows to `±inf`.
    pub fn to_f64(self) -> f64 {
        if self.sign == 0 {
            0.0
        } else {
            f64::from(self.sign) * libm::exp(self.log_abs)
        }
    }

    pub fn sign(self) -> i8 {
        self.sign
    }

    pub fn log_abs(self) -> f64 {
        self.log_abs
    }

    pub fn is_zero(self) -> bool {
        self.sign == 0
    }

    pub fn abs(self) -> Self {
        LogValue { sign: self.sign.abs(), log_abs: self.log_abs }
    }

    pub fn recip(self) -> Self {
        if self.sign == 0 {
            LogValue { sign: 1, log_abs: f64::INFINITY }
        } else {
            LogValue { sign: self.sign, log_abs: -self.log_abs }
        }
    }

    /// Compares magnitudes.
    pub fn cmp_abs(self, other: Self) -> Ordering {
        self.log_abs.partial_cmp(&other.log_abs).unwrap_or(Ordering::Equal)
    }
}

impl Mul for LogValue {
    type Output = LogValue;

    fn mul(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 || rhs.sign == 0 {
            return LogValue::ZERO;
        }
        LogValue { sign: self.sign * rhs.sign, log_abs: self.log_abs + rhs.log_abs }
    }
}

impl Div for LogValue {
    type Output = LogValue;

    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: LogValue) -> LogValue {
        self * rhs.recip()
    }
}

impl Neg for LogValue {
    type Output = LogValue;

    fn neg(self) -> LogValue {
        LogValue { sign: -self.sign, log_abs: self.log_abs }
    }
}

impl Add for LogValue {
    type Output = LogValue;

    fn add(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_abs >= rhs.log_abs { (self, rhs) } else { (rhs, self) };
        if big.log_abs == f64::INFINITY {
            return big;
        }
        let ratio = libm::exp(small.log_abs - big.log_abs);
        if big.sign == small.sign {
            LogValue { sign: big.sign, log_abs: big.log_abs + libm::log1p(ratio) }
        } else if ratio >= 1.0 {
            LogValue::ZERO
        } else {
            LogValue { sign: big.sign, log_abs: big.log_abs + libm::log1p(-ratio) }
        }
    }
}

impl Sub for LogValue {
    type Output = LogValue;

    fn sub(self, rhs: LogValue) -> LogValue {
        self + (-rhs)
    }
}

/// Relative discrepancy between two values in the log domain:
/// `|log|a| - log|b|| / max(1, |log|a||, |log|b||)`; a sign mismatch is
/// infinite, two zeros agree exactly.
pub fn log_discrepancy(a: LogValue, b: LogValue) -> f64 {
    if a.sign() != b.sign() {
        return f64::INFINITY;
    }
    if a.is_zero() {
        return 0.0;
    }
    let scale = a.log_abs().abs().max(b.log_abs().abs()).max(1.0);
    (a.log_abs() - b.log_abs()).abs() / scale
}
