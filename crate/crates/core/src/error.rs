use alloc::string::String;

use crate::rational::Rational;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("modulus must be greater than 1, got {0}")]
    InvalidModulus(u64),
    #[error("{value} is not a unit modulo {modulus} (gcd = {gcd})")]
    NotAUnit { value: i128, modulus: u64, gcd: u64 },
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("polynomial is not integer-valued: P({witness}) = {value}")]
    NotIntegerValued { witness: i64, value: Rational },
    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },
    #[error(
        "exhaustive search over subsets of Z/{n}Z exceeds the bound {bound}; use sampling mode"
    )]
    RefuseExhaustive { n: u64, bound: u64 },
    #[error("modulus {n} is not {p}^{k}")]
    NotPrimePower { n: u64, p: u64, k: u32 },
    #[error("level {m} outside 0..={k}")]
    LevelOutOfRange { m: u32, k: u32 },
    #[error("prime {p} is not congruent to {expected} mod 4")]
    ResidueClassMod4 { p: u64, expected: u8 },
    #[error("frequency {j} is 0 modulo {n}")]
    ZeroFrequency { j: u64, n: u64 },
    #[error("degree {degree} too low: {requirement}")]
    DegreeTooLow { degree: usize, requirement: &'static str },
    #[error("{0} does not have integer coefficients")]
    NonIntegerCoefficients(String),
    #[error("{p} does not divide {n}")]
    NotDivisible { p: u64, n: u64 },
    #[error("no suitable prime found below {bound}")]
    NotFound { bound: u64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("signal violates |f| <= 1 at index {0}")]
    SignalOutOfRange(usize),
    #[error("signal does not have mean zero")]
    NotMeanZero,
    #[error("length {len} does not match modulus {n}")]
    LengthMismatch { len: usize, n: u64 },
    #[error("modulus {n} exceeds the supported size {max} for this operation")]
    TooLarge { n: u64, max: u64 },
}
