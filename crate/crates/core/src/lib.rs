//! Exact polynomial ergodic averages over the rotation on `N` points.
//!
//! Everything here works over `Z/NZ` with the shift `T: x -> x + 1` and the
//! normalized counting measure. Measures, averages and deviations are exact
//! rationals; floating point only appears in cross-checks that are never used
//! to decide whether an inequality holds.
//!
//! Module map:
//!
//! - [`ring`]: factorization, least prime factor, inverses, Legendre symbols.
//! - [`poly`]: integer-valued polynomials, evaluation mod `N`, image
//!   histograms, iterated differences.
//! - [`set`] and [`kernel`]: residue sets as bit vectors and the exact
//!   correlation kernel `h -> |A ∩ (B + h)|` (bit-vector and NTT backends).
//! - [`average`]: polynomial averages, deviation searches, conditional
//!   expectation terms and the prime-power closed form for `n^2`.
//! - [`bounds`]: exponential-sum counts and the norm bounds built on them.
//! - [`combinatorics`]: sumsets, pair counts, coverage, Weil-type solution
//!   counts and the counterexample constructors.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod average;
pub mod bounds;
pub mod combinatorics;
mod error;
pub mod kernel;
pub mod ntt;
pub mod poly;
pub mod rational;
pub mod ring;
pub mod set;

pub use error::{Error, Result};
pub use poly::IntValuedPoly;
pub use rational::Rational;
pub use ring::{Modulus, Residue};
pub use set::ResidueSet;
