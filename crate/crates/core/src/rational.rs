//! Exact rationals and the helpers the rest of the crate leans on.

use alloc::string::String;
use core::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision fraction, always in lowest terms.
pub type Rational = BigRational;

pub fn int(n: i128) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num / den`, reduced. Panics on a zero denominator.
pub fn ratio(num: i128, den: i128) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn ratio_big(num: BigInt, den: BigInt) -> Rational {
    Rational::new(num, den)
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    Rational::new_raw(base.numer().pow(exp), base.denom().pow(exp))
}

/// `num/den` with an explicit denominator even for integers.
pub fn to_fraction_string(r: &Rational) -> String {
    alloc::format!("{}/{}", r.numer(), r.denom())
}

/// Parses `a`, `-a` or `a/b` into a reduced rational.
pub fn parse(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num = BigInt::from_str(num).ok()?;
    let den = BigInt::from_str(den).ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

pub fn is_integer(r: &Rational) -> bool {
    r.denom().is_one()
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values
        .into_iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Compares `x^(2^squarings)` against `bound` exactly, for `0 <= x <= 1`.
///
/// Powers of a value in `[0, 1]` only shrink, so the squaring chain stops as
/// soon as an intermediate power is already below the bound.
pub fn repeated_square_le(x: &Rational, squarings: u32, bound: &Rational) -> bool {
    debug_assert!(!x.is_negative() && *x <= Rational::one());
    let mut acc = x.clone();
    if acc <= *bound {
        return true;
    }
    for _ in 0..squarings {
        acc = &acc * &acc;
        if acc <= *bound {
            return true;
        }
    }
    false
}

/// `x^(2^squarings)` computed exactly.
pub fn pow_two_power(x: &Rational, squarings: u32) -> Rational {
    let mut acc = x.clone();
    for _ in 0..squarings {
        acc = &acc * &acc;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("2/4"), Some(ratio(1, 2)));
        assert_eq!(parse("-3"), Some(int(-3)));
        assert_eq!(parse(" 7 / 21 "), Some(ratio(1, 3)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }

    #[test]
    fn fraction_string_keeps_denominator() {
        assert_eq!(to_fraction_string(&int(3)), "3/1");
        assert_eq!(to_fraction_string(&ratio(-2, 450)), "-1/225");
    }

    #[test]
    fn repeated_square_matches_explicit_power() {
        let x = ratio(3, 4);
        for k in 0..5 {
            let explicit = pow_two_power(&x, k);
            for bound in [ratio(1, 10), ratio(1, 2), ratio(9, 16), ratio(3, 4)] {
                assert_eq!(repeated_square_le(&x, k, &bound), explicit <= bound);
            }
        }
    }
}
