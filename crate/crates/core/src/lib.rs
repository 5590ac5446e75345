//! Numerics for half-line discrete Schrödinger operators
//! `(Hψ)_n = ψ_{n+1} + ψ_{n-1} + v_n ψ_n` with finite-valued aperiodic
//! potentials, the Möbius potential `v_n = λ μ(n)` above all.
//!
//! The crate is `no_std` (it needs `alloc`). Quantities that can overflow a
//! double, such as long transfer products or Green's function entries deep in
//! a localized regime, are carried either as a normalized mantissa with a
//! separate power-of-two exponent or as a [`LogValue`].
//!
//! Module map:
//!
//! - [`potential`]: Möbius sieve, potential generators, arithmetic-progression zeros.
//! - [`transfer`]: scaled transfer-matrix products and determinant recurrences.
//! - [`green`]: restricted Green's functions by Cramér's rule and by a direct solve.
//! - [`dynamics`]: Lyapunov exponents, shooting, growth exponents.
//! - [`localization`]: good windows, good-set densities, corner decay.
//! - [`hull`]: pattern statistics of symbol sequences.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod dynamics;
mod error;
pub mod exec;
pub mod green;
pub mod hull;
pub mod localization;
mod logval;
pub mod potential;
mod scale;
pub mod transfer;

pub use error::{Error, Result};
pub use exec::{ParallelMap, Sequential};
pub use logval::{log_discrepancy, LogValue};
pub use potential::{PotentialKind, PotentialSpec, PotentialWindow};
pub use transfer::ScaledMatrix2;
