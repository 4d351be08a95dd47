//! Integer-valued polynomials over `Q[n]`.
//!
//! A polynomial is kept in two bases: rational monomial coefficients and
//! integer coefficients in the binomial basis `C(n, i)`. The binomial
//! coefficients are the forward differences at 0, so integer-valuedness is
//! decided exactly by checking that they are integers.
//!
//! Expression grammar accepted by [`IntValuedPoly::parse`]:
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' unary) | ('/' INT))*
//! unary := ('-' | '+') unary | power
//! power := atom ('^' INT)?
//! atom  := INT | 'n' | '(' expr ')'
//! ```
//!
//! Division is only allowed by a nonzero integer literal, e.g. `(n^3+2*n)/3`.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::ring::{self, Modulus, Residue};

/// Largest supported degree.
pub const MAX_DEGREE: usize = 20;

/// Dense polynomial with rational coefficients, ascending order, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The variable `n`.
    pub fn var() -> Self {
        Self::from_coeffs(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        let mut p = Self { coeffs };
        while p.coeffs.last().is_some_and(Zero::is_zero) {
            p.coeffs.pop();
        }
        p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..len).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::constant(Rational::one());
        for _ in 0..exp {
            acc = acc.mul(self);
        }
        acc
    }

    /// `n -> P(n + h)`.
    pub fn shift(&self, h: &Rational) -> Self {
        // Horner in the shifted variable: P(n + h) = (...(c_k (n+h) + c_{k-1})(n+h) ...).
        let linear = Self::from_coeffs(vec![h.clone(), Rational::one()]);
        let mut acc = Self::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&linear).add(&Self::constant(c.clone()));
        }
        acc
    }

    /// `n -> P(c n)`.
    pub fn compose_scale(&self, c: &Rational) -> Self {
        let mut factor = Rational::one();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for a in &self.coeffs {
            out.push(a * &factor);
            factor *= c;
        }
        Self::from_coeffs(out)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }
}

impl fmt::Display for RatPoly {
    /// Writes the polynomial in a form the parser accepts back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let negative = c.is_negative();
            let mag = c.abs();
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            first = false;
            let coeff = if mag.is_integer() {
                mag.numer().to_string()
            } else {
                format!("{}/{}", mag.numer(), mag.denom())
            };
            match i {
                0 => write!(f, "{coeff}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{coeff}*")?;
                    }
                    if i == 1 {
                        write!(f, "n")?;
                    } else {
                        write!(f, "n^{i}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// A polynomial `P in Q[n]` with `P(Z) ⊆ Z`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntValuedPoly {
    poly: RatPoly,
    binomial: Vec<BigInt>,
    c_prime: u64,
    c_p: u64,
}

impl IntValuedPoly {
    /// Parses and validates an expression in the polynomial grammar.
    pub fn parse(expr: &str) -> Result<Self> {
        let poly = Parser::new(expr).parse()?;
        Self::new(poly)
    }

    pub fn from_int_coeffs(coeffs: &[i64]) -> Result<Self> {
        Self::new(RatPoly::from_coeffs(
            coeffs.iter().map(|&c| rational::int(c as i128)).collect(),
        ))
    }

    pub fn new(poly: RatPoly) -> Result<Self> {
        let degree = poly.degree().unwrap_or(0);
        if degree > MAX_DEGREE {
            return Err(Error::DegreeTooLarge {
                degree,
                max: MAX_DEGREE,
            });
        }
        // Values at 0..=k determine the binomial coefficients by differencing;
        // any non-integer among them is the witness.
        let values: Vec<Rational> = (0..=degree)
            .map(|n| poly.eval(&rational::int(n as i128)))
            .collect();
        if let Some(n) = values.iter().position(|v| !rational::is_integer(v)) {
            return Err(Error::NotIntegerValued {
                witness: n as i64,
                value: values[n].clone(),
            });
        }
        let mut diffs: Vec<BigInt> = values.into_iter().map(|v| v.to_integer()).collect();
        let mut binomial = Vec::with_capacity(diffs.len());
        for _ in 0..=degree {
            binomial.push(diffs[0].clone());
            for i in 0..diffs.len() - 1 {
                diffs[i] = &diffs[i + 1] - &diffs[i];
            }
            diffs.pop();
        }
        if poly.is_zero() {
            binomial.clear();
        }

        let c_prime_big = rational::common_denominator(poly.coeffs());
        let c_prime = c_prime_big
            .to_u64()
            .ok_or_else(|| Error::InvalidParameter("coefficient denominators too large".into()))?;
        let mut c_p = c_prime.max(degree as u64);
        if let Some(lead) = poly.coeffs().last() {
            let scaled = (lead * Rational::from_integer(c_prime_big)).to_integer().abs();
            if scaled > BigInt::one() {
                let scaled = scaled.to_u64().ok_or_else(|| {
                    Error::InvalidParameter("leading coefficient too large to factor".into())
                })?;
                c_p = c_p.max(ring::factorize(scaled)?.gpf());
            }
        }
        Ok(Self {
            poly,
            binomial,
            c_prime,
            c_p,
        })
    }

    pub fn as_rat_poly(&self) -> &RatPoly {
        &self.poly
    }

    pub fn monomial_coeffs(&self) -> &[Rational] {
        self.poly.coeffs()
    }

    /// `b_i` with `P(n) = Σ b_i C(n, i)`.
    pub fn binomial_coeffs(&self) -> &[BigInt] {
        &self.binomial
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.poly.degree()
    }

    /// Least positive `c'` with `c' P` in `Z[n]`.
    pub fn c_prime(&self) -> u64 {
        self.c_prime
    }

    /// `max(c', degree, largest prime dividing the numerator of c' c_k)`.
    pub fn c_p(&self) -> u64 {
        self.c_p
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.poly.coeffs().last()
    }

    pub fn has_integer_coeffs(&self) -> bool {
        self.c_prime == 1
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.poly.degree().is_none_or(|d| d == 0)
    }

    /// Exact value `P(n)` via the binomial basis.
    pub fn eval(&self, n: &BigInt) -> BigInt {
        let mut binom = BigInt::one();
        let mut acc = BigInt::zero();
        for (i, b) in self.binomial.iter().enumerate() {
            if i > 0 {
                binom = binom * (n - BigInt::from(i - 1)) / BigInt::from(i);
            }
            acc += b * &binom;
        }
        acc
    }

    pub fn eval_mod(&self, n: i128, modulus: &Modulus) -> Residue {
        let value = self.eval(&BigInt::from(n));
        let reduced = value.mod_floor(&BigInt::from(modulus.get()));
        modulus.residue(reduced.to_i128().expect("reduced below N"))
    }

    /// `P(1), ..., P(N)` reduced mod `N`, by forward differences (no division).
    pub fn values_mod(&self, modulus: &Modulus) -> Vec<u64> {
        let n = modulus.get();
        let len = modulus.len();
        if self.binomial.is_empty() {
            return vec![0; len];
        }
        let big_n = BigInt::from(n);
        let k = self.binomial.len();
        // Δ^i P(1) = b_i + b_{i+1}.
        let mut diffs: Vec<u64> = (0..k)
            .map(|i| {
                let next = self.binomial.get(i + 1).cloned().unwrap_or_default();
                (&self.binomial[i] + next)
                    .mod_floor(&big_n)
                    .to_u64()
                    .expect("reduced below N")
            })
            .collect();
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            out.push(diffs[0]);
            for i in 0..k - 1 {
                diffs[i] = ring::add_mod(diffs[i], diffs[i + 1], n);
            }
        }
        out
    }

    /// Multiplicities `c_h = #{n in [1, N] : P(n) ≡ h mod N}`.
    pub fn image_histogram(&self, modulus: &Modulus) -> Histogram {
        let mut counts = vec![0u64; modulus.len()];
        for v in self.values_mod(modulus) {
            counts[v as usize] += 1;
        }
        Histogram { counts }
    }

    /// Whether `P(n + N) ≡ P(n) mod N` for every integer `n`.
    ///
    /// `P(n + N) - P(n)` is integer-valued, and an integer-valued polynomial
    /// vanishes mod `N` everywhere iff all its binomial coefficients do.
    pub fn is_periodic_mod(&self, modulus: &Modulus) -> bool {
        let big_n = rational::int(modulus.get() as i128);
        let diff = self.poly.shift(&big_n).sub(&self.poly);
        let diff = Self::new(diff).expect("difference of integer-valued polynomials");
        let n = BigInt::from(modulus.get());
        diff.binomial.iter().all(|b| b.mod_floor(&n).is_zero())
    }

    pub fn neg(&self) -> Self {
        Self::new(self.poly.neg()).expect("negation preserves integer values")
    }

    /// `c P` for an integer `c`.
    pub fn scale(&self, c: i64) -> Self {
        Self::new(self.poly.scale(&rational::int(c as i128))).expect("integer multiple")
    }

    /// `n -> P(c n)` for an integer `c`.
    pub fn compose_scale(&self, c: i64) -> Self {
        Self::new(self.poly.compose_scale(&rational::int(c as i128))).expect("integer argument")
    }

    pub fn add_constant(&self, c: i64) -> Self {
        Self::new(self.poly.add(&RatPoly::constant(rational::int(c as i128))))
            .expect("integer shift")
    }

    /// `c' P`, which has integer coefficients.
    pub fn integer_multiple(&self) -> Self {
        self.scale(self.c_prime as i64)
    }
}

impl fmt::Display for IntValuedPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

/// Image multiplicities of a polynomial over `n = 1..=N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    counts: Vec<u64>,
}

impl Histogram {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        Self { counts }
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, h: u64) -> u64 {
        self.counts[h as usize]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// `(h, c_h)` for every `h` with `c_h > 0`, ascending in `h`.
    pub fn support(&self) -> Vec<(u64, u64)> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(h, &c)| (h as u64, c))
            .collect()
    }

    /// The image set `S = {P(n) mod N}`.
    pub fn image(&self) -> Vec<u64> {
        self.support().into_iter().map(|(h, _)| h).collect()
    }

    pub fn is_permutation(&self) -> bool {
        self.counts.iter().all(|&c| c == 1)
    }

    pub fn to_map(&self) -> BTreeMap<u64, u64> {
        self.support().into_iter().collect()
    }
}

/// `Δ_d(P(n); h_1, ..., h_d)` as a polynomial in `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceData {
    pub shifts: Vec<i64>,
    pub result: IntValuedPoly,
}

/// Differences `P` successively by each shift: `Δ_1(a; h) = a(n + h) - a(n)`.
pub fn iterated_difference(p: &IntValuedPoly, shifts: &[i64]) -> Result<DifferenceData> {
    if shifts.is_empty() {
        return Err(Error::InvalidParameter(
            "iterated difference needs at least one shift".into(),
        ));
    }
    let mut current = p.as_rat_poly().clone();
    for &h in shifts {
        current = current.shift(&rational::int(h as i128)).sub(&current);
    }
    Ok(DifferenceData {
        shifts: shifts.to_vec(),
        result: IntValuedPoly::new(current)?,
    })
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            src: src.as_bytes(),
            pos: 0,
        }
    }

    fn parse(mut self) -> Result<RatPoly> {
        let p = self.expr()?;
        self.skip_ws();
        if self.pos < self.src.len() {
            return Err(self.error("unexpected trailing input"));
        }
        Ok(p)
    }

    fn error(&self, message: &str) -> Error {
        Error::Parse {
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.add(&self.term()?);
            } else if self.eat(b'-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.mul(&self.unary()?);
                self.check_degree(&acc)?;
            } else if self.eat(b'/') {
                self.skip_ws();
                let at = self.pos;
                let d = self.integer()?;
                if d.is_zero() {
                    self.pos = at;
                    return Err(self.error("division by zero"));
                }
                acc = acc.scale(&Rational::new(BigInt::one(), d));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatPoly> {
        if self.eat(b'-') {
            Ok(self.unary()?.neg())
        } else if self.eat(b'+') {
            self.unary()
        } else {
            self.power()
        }
    }

    fn power(&mut self) -> Result<RatPoly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let at = self.pos;
            let e = self.integer()?;
            let e = e.to_u32().filter(|&e| e as usize <= MAX_DEGREE).ok_or_else(|| {
                self.pos = at;
                self.error("exponent out of range")
            })?;
            let out = base.pow(e);
            self.check_degree(&out)?;
            return Ok(out);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RatPoly> {
        match self.peek() {
            Some(b'n') => {
                self.pos += 1;
                Ok(RatPoly::var())
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(RatPoly::constant(Rational::from_integer(v)))
            }
            Some(_) => Err(self.error("expected a number, 'n' or '('")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an integer literal"));
        }
        let digits = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse::<BigInt>().expect("validated digits"))
    }

    fn check_degree(&self, p: &RatPoly) -> Result<()> {
        match p.degree() {
            Some(d) if d > MAX_DEGREE => Err(Error::DegreeTooLarge {
                degree: d,
                max: MAX_DEGREE,
            }),
            _ => Ok(()),
        }
    }
}

/// Renders a parse error with a caret under the offending column.
pub fn describe_parse_error(expr: &str, column: usize) -> String {
    let mut s = String::from(expr);
    s.push('\n');
    for _ in 1..column {
        s.push(' ');
    }
    s.push('^');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn parse_square() {
        let p = IntValuedPoly::parse("n^2").unwrap();
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.c_prime(), 1);
        assert_eq!(p.binomial_coeffs(), big(&[0, 1, 2]).as_slice());
        assert_eq!(p.c_p(), 2);
    }

    #[test]
    fn parse_triangular() {
        let p = IntValuedPoly::parse("(n^2+n)/2").unwrap();
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.c_prime(), 2);
        assert_eq!(p.binomial_coeffs(), big(&[0, 1, 1]).as_slice());
        assert_eq!(p.c_p(), 2);
    }

    #[test]
    fn rejects_half_square() {
        match IntValuedPoly::parse("n^2/2") {
            Err(Error::NotIntegerValued { witness, value }) => {
                assert_eq!(witness, 1);
                assert_eq!(value, ratio(1, 2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_columns() {
        for (src, col) in [("n^", 3), ("2*x", 3), ("(n+1", 5), ("n/0", 3), ("n n", 3), ("n/n", 3)] {
            match IntValuedPoly::parse(src) {
                Err(Error::Parse { column, .. }) => assert_eq!(column, col, "{src}"),
                other => panic!("{src}: unexpected {other:?}"),
            }
        }
    }

    #[test]
    fn parse_misc_forms() {
        let p = IntValuedPoly::parse("(n^3+2*n)/3").unwrap();
        assert_eq!(p.c_prime(), 3);
        let p = IntValuedPoly::parse("-n^2 + 3*n - 7").unwrap();
        assert_eq!(p.monomial_coeffs(), &[int(-7), int(3), int(-1)]);
        let p = IntValuedPoly::parse("n*(n+1)*(n+2)/6").unwrap();
        assert_eq!(p.binomial_coeffs(), big(&[0, 1, 2, 1]).as_slice());
        assert!(IntValuedPoly::parse("n^21").is_err());
    }

    #[test]
    fn c_p_uses_leading_numerator_primes() {
        let p = IntValuedPoly::parse("14*n^2").unwrap();
        assert_eq!(p.c_p(), 7);
        let p = IntValuedPoly::parse("5*(n^2+n)/2").unwrap();
        assert_eq!(p.c_prime(), 2);
        assert_eq!(p.c_p(), 5);
    }

    #[test]
    fn eval_mod_examples() {
        let sq = IntValuedPoly::parse("n^2").unwrap();
        let m15 = Modulus::new(15).unwrap();
        assert_eq!(sq.eval_mod(4, &m15).value(), 1);
        assert_eq!(sq.eval_mod(15, &m15).value(), 0);
        let tri = IntValuedPoly::parse("(n^2+n)/2").unwrap();
        assert_eq!(tri.eval_mod(3, &Modulus::new(5).unwrap()).value(), 1);
        assert_eq!(tri.eval_mod(-3, &Modulus::new(5).unwrap()).value(), 3);
    }

    #[test]
    fn histogram_examples() {
        let lin = IntValuedPoly::parse("n").unwrap();
        assert!(lin.image_histogram(&Modulus::new(9).unwrap()).is_permutation());

        let sq = IntValuedPoly::parse("n^2").unwrap();
        let h = sq.image_histogram(&Modulus::new(15).unwrap());
        let expected: BTreeMap<u64, u64> =
            [(0, 1), (1, 4), (4, 4), (6, 2), (9, 2), (10, 2)].into_iter().collect();
        assert_eq!(h.to_map(), expected);

        let h = sq.image_histogram(&Modulus::new(7).unwrap());
        let expected: BTreeMap<u64, u64> = [(0, 1), (1, 2), (2, 2), (4, 2)].into_iter().collect();
        assert_eq!(h.to_map(), expected);
    }

    #[test]
    fn triangular_is_not_periodic_mod_two() {
        let tri = IntValuedPoly::parse("(n^2+n)/2").unwrap();
        let m2 = Modulus::new(2).unwrap();
        assert_ne!(tri.eval_mod(0, &m2), tri.eval_mod(2, &m2));
        assert!(!tri.is_periodic_mod(&m2));
        assert!(tri.is_periodic_mod(&Modulus::new(15).unwrap()));
        assert!(IntValuedPoly::parse("n^3").unwrap().is_periodic_mod(&m2));
    }

    #[test]
    fn difference_examples() {
        let sq = IntValuedPoly::parse("n^2").unwrap();
        let d = iterated_difference(&sq, &[5]).unwrap();
        assert_eq!(d.result.monomial_coeffs(), &[int(25), int(10)]);

        let cube = IntValuedPoly::parse("n^3").unwrap();
        let (h1, h2) = (2i64, 7i64);
        let d = iterated_difference(&cube, &[h1, h2]).unwrap();
        let expected = [int((h1 * h2 * 3 * (h1 + h2)) as i128), int((6 * h1 * h2) as i128)];
        assert_eq!(d.result.monomial_coeffs(), &expected);

        let lin = IntValuedPoly::parse("n").unwrap();
        assert!(iterated_difference(&lin, &[3, 4]).unwrap().result.is_zero());
        assert!(iterated_difference(&lin, &[]).is_err());
    }

    #[test]
    fn display_round_trips() {
        for src in ["n^2", "(n^2+n)/2", "-3*n^4 + n - 5", "0", "(n^3+2*n)/3"] {
            let p = IntValuedPoly::parse(src).unwrap();
            let again = IntValuedPoly::parse(&p.to_string()).unwrap();
            assert_eq!(p, again, "{src} -> {p}");
        }
    }
}
