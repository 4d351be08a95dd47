//! Polynomial averages `(1/N) Σ_{n=1}^{N} μ(A ∩ T^{P(n)} B)` and the deviation
//! searches built on them.
//!
//! With `c_h` the image histogram of `P` and `counts[h] = |A ∩ (B + h)|`,
//! the average is `Σ_h c_h counts[h] / N^2`, an exact rational.

use alloc::vec::Vec;

use num_traits::Signed;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::kernel::{self, Backend, CorrelationProfile};
use crate::poly::{Histogram, IntValuedPoly};
use crate::rational::{self, Rational};
use crate::ring::{self, Modulus};
use crate::set::ResidueSet;

/// Default size limit for exhaustive subset searches.
pub const DEFAULT_EXHAUSTIVE_BOUND: u64 = 24;
/// Masks are single machine words.
pub const MAX_EXHAUSTIVE: u64 = 63;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AverageReport {
    pub average: Rational,
    /// `μ(A) μ(B)`.
    pub product: Rational,
    /// `average - product`, signed.
    pub deviation: Rational,
}

impl AverageReport {
    /// Assembles the report from the contracted pair count `s = N^2 · average`.
    pub fn from_pair_count(modulus: &Modulus, s: u128, size_a: usize, size_b: usize) -> Self {
        let n = modulus.get() as i128;
        let average = rational::ratio(s as i128, n * n);
        let product = rational::ratio(size_a as i128 * size_b as i128, n * n);
        let deviation = &average - &product;
        Self {
            average,
            product,
            deviation,
        }
    }

    pub fn abs_deviation(&self) -> Rational {
        self.deviation.abs()
    }
}

pub fn polynomial_average(
    a: &ResidueSet,
    b: &ResidueSet,
    p: &IntValuedPoly,
) -> Result<AverageReport> {
    polynomial_average_with(a, b, p, Backend::Auto)
}

pub fn polynomial_average_with(
    a: &ResidueSet,
    b: &ResidueSet,
    p: &IntValuedPoly,
    backend: Backend,
) -> Result<AverageReport> {
    let profile = kernel::correlation_profile_with(a, b, backend)?;
    let hist = p.image_histogram(a.modulus());
    average_from_parts(&profile, &hist, a.len(), b.len())
}

pub fn average_from_parts(
    profile: &CorrelationProfile,
    hist: &Histogram,
    size_a: usize,
    size_b: usize,
) -> Result<AverageReport> {
    let s = profile.contract(hist)?;
    Ok(AverageReport::from_pair_count(
        profile.modulus(),
        s,
        size_a,
        size_b,
    ))
}

/// Result of a search for `max_A |average(A, A, P) - μ(A)^2|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationSearch {
    pub witness: ResidueSet,
    /// Signed deviation of the witness.
    pub deviation: Rational,
    /// Number of sets scored.
    pub candidates: u64,
    /// True only for exhaustive searches; sampled maxima are lower bounds.
    pub exhaustive: bool,
    pub symmetry: bool,
}

impl DeviationSearch {
    pub fn max_abs(&self) -> Rational {
        self.deviation.abs()
    }
}

/// Scores single-word subsets: `N^2 · (average(A, A, P) - μ(A)^2)`.
#[derive(Debug, Clone)]
pub struct MaskScorer {
    n: u32,
    full: u64,
    support: Vec<(u32, i64)>,
}

impl MaskScorer {
    pub fn new(modulus: &Modulus, p: &IntValuedPoly) -> Result<Self> {
        if modulus.get() > MAX_EXHAUSTIVE {
            return Err(Error::TooLarge {
                n: modulus.get(),
                max: MAX_EXHAUSTIVE,
            });
        }
        let n = modulus.get() as u32;
        let support = p
            .image_histogram(modulus)
            .support()
            .into_iter()
            .map(|(h, c)| (h as u32, c as i64))
            .collect();
        Ok(Self {
            n,
            full: (1u64 << n) - 1,
            support,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The mask of the whole group.
    pub fn full_mask(&self) -> u64 {
        self.full
    }

    /// Bit `x + h` of the result is bit `x` of `mask`, i.e. the set `A + h`.
    #[inline]
    fn rotate(&self, mask: u64, h: u32) -> u64 {
        if h == 0 {
            mask
        } else {
            ((mask << h) | (mask >> (self.n - h))) & self.full
        }
    }

    #[inline]
    pub fn score(&self, mask: u64) -> i64 {
        let size = mask.count_ones() as i64;
        let s: i64 = self
            .support
            .iter()
            .map(|&(h, c)| c * (mask & self.rotate(mask, h)).count_ones() as i64)
            .sum();
        s - size * size
    }
}

/// Running best for a deviation search: larger `|numerator|` wins, ties go
/// to the smaller mask, so merging partial results in any order is exact.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Best {
    pub mask: u64,
    pub numerator: i64,
}

impl Best {
    pub fn new(mask: u64, numerator: i64) -> Self {
        Self { mask, numerator }
    }

    pub fn merge(self, other: Self) -> Self {
        let (a, b) = (self.numerator.unsigned_abs(), other.numerator.unsigned_abs());
        if a > b || (a == b && self.mask <= other.mask) {
            self
        } else {
            other
        }
    }
}

/// Binary necklaces of length `n`, each as its least rotation, ascending.
///
/// Fredricksen–Kessler–Maiorana generation. The first string position is the
/// most significant bit, so lexicographic order agrees with numeric order and
/// the lexicographically least rotation is the numerically least one.
#[derive(Debug, Clone)]
pub struct Necklaces {
    n: usize,
    a: Vec<u8>,
    started: bool,
    done: bool,
}

impl Necklaces {
    pub fn new(n: u32) -> Self {
        Self {
            n: n as usize,
            a: alloc::vec![0; n as usize + 1],
            started: false,
            done: n == 0,
        }
    }

    fn mask(&self) -> u64 {
        (1..=self.n).fold(0u64, |acc, j| (acc << 1) | self.a[j] as u64)
    }
}

impl Iterator for Necklaces {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some(0);
        }
        loop {
            let mut i = self.n;
            while i > 0 && self.a[i] == 1 {
                i -= 1;
            }
            if i == 0 {
                self.done = true;
                return None;
            }
            self.a[i] = 1;
            for j in i + 1..=self.n {
                self.a[j] = self.a[j - i];
            }
            if self.n % i == 0 {
                return Some(self.mask());
            }
        }
    }
}

fn check_exhaustive(modulus: &Modulus, bound: u64) -> Result<()> {
    if modulus.get() > bound.min(MAX_EXHAUSTIVE) {
        return Err(Error::RefuseExhaustive {
            n: modulus.get(),
            bound: bound.min(MAX_EXHAUSTIVE),
        });
    }
    Ok(())
}

/// Searches every subset (or, with `symmetry`, one per rotation class) for
/// the largest `|average(A, A, P) - μ(A)^2|`.
pub fn max_deviation_exhaustive(
    modulus: &Modulus,
    p: &IntValuedPoly,
    symmetry: bool,
    bound: u64,
) -> Result<DeviationSearch> {
    check_exhaustive(modulus, bound)?;
    let scorer = MaskScorer::new(modulus, p)?;
    let mut best = Best::new(0, 0);
    let mut candidates = 0u64;
    if symmetry {
        for mask in Necklaces::new(scorer.n()) {
            best = best.merge(Best::new(mask, scorer.score(mask)));
            candidates += 1;
        }
    } else {
        for mask in 0..=scorer.full {
            best = best.merge(Best::new(mask, scorer.score(mask)));
            candidates += 1;
        }
    }
    finish_search(modulus, best, candidates, symmetry)
}

/// Validates the bound and builds the scorer used by parallel drivers.
pub fn exhaustive_scorer(modulus: &Modulus, p: &IntValuedPoly, bound: u64) -> Result<MaskScorer> {
    check_exhaustive(modulus, bound)?;
    MaskScorer::new(modulus, p)
}

pub fn finish_search(
    modulus: &Modulus,
    best: Best,
    candidates: u64,
    symmetry: bool,
) -> Result<DeviationSearch> {
    let n = modulus.get() as i128;
    Ok(DeviationSearch {
        witness: ResidueSet::from_mask(modulus, best.mask)?,
        deviation: rational::ratio(best.numerator as i128, n * n),
        candidates,
        exhaustive: true,
        symmetry,
    })
}

/// `N^2 · (average(A, A, P) - μ(A)^2)` for a set of any size.
pub fn deviation_numerator(a: &ResidueSet, hist: &Histogram) -> Result<i128> {
    let support = hist.support();
    let shifts: Vec<u64> = support.iter().map(|&(h, _)| h).collect();
    let counts = kernel::counts_at(a, a, &shifts)?;
    let s: i128 = support
        .iter()
        .zip(&counts)
        .map(|(&(_, c), &k)| c as i128 * k as i128)
        .sum();
    let size = a.len() as i128;
    Ok(s - size * size)
}

/// Scores `samples` uniformly random subsets. The result is a lower bound on
/// the true maximum and is marked as not exhaustive.
pub fn max_deviation_sampled<R: RngCore + ?Sized>(
    modulus: &Modulus,
    p: &IntValuedPoly,
    samples: u64,
    rng: &mut R,
) -> Result<DeviationSearch> {
    let hist = p.image_histogram(modulus);
    let mut best: Option<(ResidueSet, i128)> = None;
    for _ in 0..samples {
        let a = ResidueSet::random(modulus, rng);
        let num = deviation_numerator(&a, &hist)?;
        if best.as_ref().is_none_or(|(_, b)| num.abs() > b.abs()) {
            best = Some((a, num));
        }
    }
    let (witness, num) = best.unwrap_or_else(|| (ResidueSet::empty(modulus), 0));
    let n = modulus.get() as i128;
    Ok(DeviationSearch {
        witness,
        deviation: rational::ratio(num, n * n),
        candidates: samples,
        exhaustive: false,
        symmetry: false,
    })
}

/// `⟨E(1_A | B_m), 1_A⟩` where `B_m` is the σ-algebra of `T^{p^m}`-invariant sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalTerm {
    pub m: u32,
    pub inner: Rational,
}

fn check_prime_power(modulus: &Modulus, p: u64, k: u32) -> Result<()> {
    if !ring::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if modulus.prime_power() != Some((p, k)) {
        return Err(Error::NotPrimePower {
            n: modulus.get(),
            p,
            k,
        });
    }
    Ok(())
}

pub fn conditional_inner(a: &ResidueSet, p: u64, k: u32, m: u32) -> Result<ConditionalTerm> {
    check_prime_power(a.modulus(), p, k)?;
    let profile = kernel::correlation_profile(a, a)?;
    conditional_inner_from_profile(&profile, p, k, m)
}

/// `(1/p^{k-m}) Σ_j μ(A ∩ T^{j p^m} A)` read off an autocorrelation profile.
pub fn conditional_inner_from_profile(
    profile: &CorrelationProfile,
    p: u64,
    k: u32,
    m: u32,
) -> Result<ConditionalTerm> {
    check_prime_power(profile.modulus(), p, k)?;
    if m > k {
        return Err(Error::LevelOutOfRange { m, k });
    }
    let step = p.pow(m) as usize;
    let classes = p.pow(k - m) as i128;
    let sum: u128 = profile.counts().iter().step_by(step).map(|&c| c as u128).sum();
    Ok(ConditionalTerm {
        m,
        inner: rational::ratio(sum as i128, profile.modulus().get() as i128 * classes),
    })
}

/// Both sides of the closed form for `(1/p^k) Σ_n μ(A ∩ T^{n^2} A)` on `Z/p^kZ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PkgoalReport {
    pub lhs: Rational,
    pub rhs: Rational,
    pub equal: bool,
    /// False when evaluated outside `p ≡ 3 mod 4`, where equality is not claimed.
    pub asserted: bool,
    /// Levels `m = 0..=k`.
    pub terms: Vec<ConditionalTerm>,
}

/// Compares the `n^2` average on `Z/p^kZ` against
/// `μ^2 + C_k μ / p^{k/2} + Σ_{m=1}^{k-1} (-1)^m p^{-⌈m/2⌉} ⟨E(1_A | B_m), 1_A⟩`
/// with `C_k = 1` for even `k` and `0` for odd `k`.
///
/// Primes `p ≢ 3 mod 4` are refused unless `permissive` is set, in which case
/// both sides are reported without asserting equality.
pub fn pkgoal_check(a: &ResidueSet, p: u64, k: u32, permissive: bool) -> Result<PkgoalReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("exponent k must be positive".into()));
    }
    check_prime_power(a.modulus(), p, k)?;
    let asserted = p % 4 == 3;
    if !asserted && !permissive {
        return Err(Error::ResidueClassMod4 { p, expected: 3 });
    }
    let profile = kernel::correlation_profile(a, a)?;
    let square = IntValuedPoly::from_int_coeffs(&[0, 0, 1])?;
    let lhs = average_from_parts(&profile, &square.image_histogram(a.modulus()), a.len(), a.len())?
        .average;

    let terms = (0..=k)
        .map(|m| conditional_inner_from_profile(&profile, p, k, m))
        .collect::<Result<Vec<_>>>()?;
    let mu = a.measure();
    let mut rhs = &mu * &mu;
    if k % 2 == 0 {
        rhs += &mu / rational::int(p.pow(k / 2) as i128);
    }
    for term in &terms[1..k as usize] {
        let weight = rational::ratio(1, p.pow(term.m.div_ceil(2)) as i128);
        let signed = &weight * &term.inner;
        if term.m % 2 == 0 {
            rhs += signed;
        } else {
            rhs -= signed;
        }
    }
    Ok(PkgoalReport {
        equal: lhs == rhs,
        lhs,
        rhs,
        asserted,
        terms,
    })
}

/// True when `P(n) = c_1 n + c_0` with `gcd(c_1, N) = 1`; the average then
/// equals `μ(A) μ(B)`.
pub fn is_unit_linear(p: &IntValuedPoly, modulus: &Modulus) -> bool {
    p.degree() == Some(1)
        && p.has_integer_coeffs()
        && p.monomial_coeffs()[1]
            .to_integer()
            .try_into()
            .map(|c1: i128| modulus.is_unit(c1))
            .unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use alloc::vec;
    use num_traits::Zero;

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    fn sq() -> IntValuedPoly {
        IntValuedPoly::parse("n^2").unwrap()
    }

    #[test]
    fn worked_example() {
        let n = m(15);
        let a = ResidueSet::from_elements(&n, [0, 7]);
        let r = polynomial_average(&a, &a, &sq()).unwrap();
        assert_eq!(r.average, ratio(2, 225));
        assert_eq!(r.product, ratio(4, 225));
        assert_eq!(r.deviation, ratio(-2, 225));
    }

    #[test]
    fn empty_set_averages_to_zero() {
        let n = m(11);
        let e = ResidueSet::empty(&n);
        let b = ResidueSet::from_elements(&n, [1, 2, 3]);
        assert!(polynomial_average(&e, &b, &sq()).unwrap().average.is_zero());
    }

    #[test]
    fn seven_is_exactly_mixing_for_squares() {
        let n = m(7);
        for mask in 0..128u64 {
            let a = ResidueSet::from_mask(&n, mask).unwrap();
            let r = polynomial_average(&a, &a, &sq()).unwrap();
            assert_eq!(r.average, &a.measure() * &a.measure());
        }
    }

    #[test]
    fn exhaustive_examples() {
        let r = max_deviation_exhaustive(&m(4), &sq(), true, 24).unwrap();
        assert_eq!(r.max_abs(), ratio(1, 8));
        assert_eq!(r.witness.to_vec(), vec![0, 1]);
        let r2 = max_deviation_exhaustive(&m(4), &sq(), false, 24).unwrap();
        assert_eq!(r2.deviation, r.deviation);
        assert_eq!(r2.witness, r.witness);
        assert_eq!(r2.candidates, 16);
        assert_eq!(r.candidates, 6);

        let r = max_deviation_exhaustive(&m(2), &sq(), true, 24).unwrap();
        assert!(r.max_abs().is_zero());
    }

    #[test]
    fn linear_non_unit_witness() {
        let n = m(15);
        let p = IntValuedPoly::parse("5*n").unwrap();
        let a = ResidueSet::from_elements(&n, [0, 5, 10]);
        let r = polynomial_average(&a, &a, &p).unwrap();
        assert_eq!(r.deviation, ratio(4, 25));
        let best = max_deviation_exhaustive(&n, &p, true, 24).unwrap();
        assert!(best.max_abs() >= ratio(4, 25));
    }

    #[test]
    fn refuses_large_exhaustive() {
        assert_eq!(
            max_deviation_exhaustive(&m(25), &sq(), true, 24),
            Err(Error::RefuseExhaustive { n: 25, bound: 24 })
        );
    }

    #[test]
    fn necklace_counts() {
        // Number of binary necklaces: 1, 2, 3, 4, 6, 8, 14, 20, 36 for n = 0..=8.
        let expected = [2usize, 3, 4, 6, 8, 14, 20, 36];
        for (n, &count) in (1..=8).zip(expected.iter()) {
            let all: Vec<u64> = Necklaces::new(n).collect();
            assert_eq!(all.len(), count, "n={n}");
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn conditional_examples() {
        let n = m(9);
        let a = ResidueSet::from_elements(&n, [0, 3, 6]);
        assert_eq!(conditional_inner(&a, 3, 2, 0).unwrap().inner, ratio(1, 9));
        assert_eq!(conditional_inner(&a, 3, 2, 1).unwrap().inner, ratio(1, 3));
        assert_eq!(conditional_inner(&a, 3, 2, 2).unwrap().inner, ratio(1, 3));
        assert_eq!(
            conditional_inner(&a, 3, 3, 1),
            Err(Error::NotPrimePower { n: 9, p: 3, k: 3 })
        );
        assert_eq!(
            conditional_inner(&a, 3, 2, 3),
            Err(Error::LevelOutOfRange { m: 3, k: 2 })
        );
    }

    #[test]
    fn pkgoal_examples() {
        let n = m(9);
        let a = ResidueSet::from_elements(&n, [0, 3, 6]);
        let r = pkgoal_check(&a, 3, 2, false).unwrap();
        assert_eq!((r.lhs.clone(), r.rhs.clone()), (ratio(1, 9), ratio(1, 9)));
        assert!(r.equal && r.asserted);

        let r = pkgoal_check(&ResidueSet::empty(&n), 3, 2, false).unwrap();
        assert!(r.lhs.is_zero() && r.equal);

        let r = pkgoal_check(&ResidueSet::full(&m(27)), 3, 3, false).unwrap();
        assert_eq!(r.lhs, rational::int(1));
        assert!(r.equal);

        let a = ResidueSet::empty(&m(25));
        assert_eq!(
            pkgoal_check(&a, 5, 2, false),
            Err(Error::ResidueClassMod4 { p: 5, expected: 3 })
        );
        let r = pkgoal_check(&a, 5, 2, true).unwrap();
        assert!(!r.asserted);
    }

    #[test]
    fn unit_linear_detection() {
        assert!(is_unit_linear(&IntValuedPoly::parse("2*n+3").unwrap(), &m(15)));
        assert!(!is_unit_linear(&IntValuedPoly::parse("5*n").unwrap(), &m(15)));
        assert!(!is_unit_linear(&sq(), &m(15)));
    }
}
