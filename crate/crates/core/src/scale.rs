//! Power-of-two rescaling helpers. Scaling by `2^k` is exact, so the
//! mantissas carried through long products pick up no rounding from it.

/// Exponent `e` with `|x| = f·2^e`, `f ∈ [1/2, 1)`. Zero maps to 0.
#[inline]
pub(crate) fn exponent(x: f64) -> i32 {
    if x == 0.0 {
        0
    } else {
        libm::frexp(x).1
    }
}

#[inline]
pub(crate) fn ldexp(x: f64, e: i32) -> f64 {
    libm::scalbn(x, e)
}

/// True when `m` needs rescaling to keep it inside `[1/2, 2]`.
#[inline]
pub(crate) fn out_of_range(m: f64) -> bool {
    !(0.5..=2.0).contains(&m)
}
