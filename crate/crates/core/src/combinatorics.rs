//! Sumsets, pair counts, coverage of `Z/NZ` by `A + B + S`, triple-sum
//! solution counts mod `p`, and explicit witnesses of non-uniform averages.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::average::{self, AverageReport};
use crate::bounds::{self, ThresholdReport};
use crate::error::{Error, Result};
use crate::kernel;
use crate::poly::IntValuedPoly;
use crate::rational::{self, Rational};
use crate::ring::{self, Modulus};
use crate::set::ResidueSet;

/// Default prime search limit for [`nonpermutation_witness`].
pub const DEFAULT_PRIME_SEARCH_BOUND: u64 = 1_000_000;
/// Covered residues for which [`coverage_check`] records a decomposition.
pub const MAX_WITNESSES: usize = 16;

/// `A + B = {a + b}`.
pub fn sumset(a: &ResidueSet, b: &ResidueSet) -> Result<ResidueSet> {
    a.check_same(b)?;
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let n = a.modulus().len();
    let words = large.words().len();
    // Doubled copy of the larger set so that every rotation is a window.
    let mut doubled = vec![0u64; 2 * words + 2];
    for x in large.iter() {
        for pos in [x as usize, x as usize + n] {
            doubled[pos / 64] |= 1 << (pos % 64);
        }
    }
    let mut acc = vec![0u64; words];
    for s in small.iter() {
        // Bit x of the window at N - s is large[x - s].
        let start = n - s as usize;
        let (q, r) = (start / 64, start % 64);
        for (i, slot) in acc.iter_mut().enumerate() {
            *slot |= if r == 0 {
                doubled[q + i]
            } else {
                (doubled[q + i] >> r) | (doubled[q + i + 1] << (64 - r))
            };
        }
        if acc.iter().all(|&w| w == !0) {
            break;
        }
    }
    ResidueSet::from_words(a.modulus(), acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairCountReport {
    /// `#{(n, m) : n ∈ B, n + P(m) ∈ A}`.
    pub s: u128,
    /// `|A| |B|`.
    pub expected: u128,
    /// `|s - |A||B|| / (|A||B|)`, absent when either set is empty.
    pub epsilon_achieved: Option<Rational>,
    /// Whether `lpf N` exceeds the density threshold for the requested `ε`;
    /// absent when no `ε` was given, `deg P < 2`, or `B` is empty.
    pub threshold_ok: Option<bool>,
    pub threshold: Option<ThresholdReport>,
}

impl PairCountReport {
    /// `|s - |A||B|| < ε |A||B|`.
    pub fn within(&self, eps: &Rational) -> bool {
        let diff = BigInt::from(self.s) - BigInt::from(self.expected);
        Rational::from_integer(diff.abs()) < eps * Rational::from_integer(self.expected.into())
    }
}

/// Counts pairs through the correlation profile: `s = Σ_h c_h |A ∩ (B + h)|`.
pub fn pair_count(
    a: &ResidueSet,
    b: &ResidueSet,
    p: &IntValuedPoly,
    eps: Option<&Rational>,
) -> Result<PairCountReport> {
    let profile = kernel::correlation_profile(a, b)?;
    let s = profile.contract(&p.image_histogram(a.modulus()))?;
    pair_count_report(a, b, p, s, eps)
}

/// Assembles the report from a pair count computed elsewhere.
pub fn pair_count_report(
    a: &ResidueSet,
    b: &ResidueSet,
    p: &IntValuedPoly,
    s: u128,
    eps: Option<&Rational>,
) -> Result<PairCountReport> {
    let expected = a.len() as u128 * b.len() as u128;
    let epsilon_achieved = (expected != 0).then(|| {
        let diff = BigInt::from(s) - BigInt::from(expected);
        Rational::new(diff.abs(), BigInt::from(expected))
    });
    let threshold = match eps {
        Some(eps) if p.degree().unwrap_or(0) > 1 && !b.is_empty() => Some(bounds::thresholds(
            p,
            &a.measure(),
            &b.measure(),
            eps,
            &rational::int(1),
        )?),
        _ => None,
    };
    let threshold_ok = threshold
        .as_ref()
        .map(|t| t.exceeded_by(a.modulus().lpf()));
    Ok(PairCountReport {
        s,
        expected,
        epsilon_achieved,
        threshold_ok,
        threshold,
    })
}

/// The direct `O(N |B|)` count, kept as an oracle.
pub fn pair_count_naive(a: &ResidueSet, b: &ResidueSet, p: &IntValuedPoly) -> Result<u128> {
    a.check_same(b)?;
    let values = p.values_mod(a.modulus());
    let mut s = 0u128;
    for n in b.iter() {
        for &v in &values {
            if a.contains(n as i128 + v as i128) {
                s += 1;
            }
        }
    }
    Ok(s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoverageWitness {
    pub target: u64,
    pub a: u64,
    pub b: u64,
    pub s: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverageReport {
    pub covered: bool,
    pub missing: Vec<u64>,
    /// Decompositions `target = a + b + s` for up to [`MAX_WITNESSES`]
    /// covered residues spread evenly over `Z/NZ`.
    pub witness_triples: Vec<CoverageWitness>,
}

/// Decides whether `A + B + S = Z/NZ` with `S` the image of `Q`.
pub fn coverage_check(a: &ResidueSet, b: &ResidueSet, q: &IntValuedPoly) -> Result<CoverageReport> {
    a.check_same(b)?;
    let m = a.modulus();
    let s = ResidueSet::image(m, q);
    let ab = sumset(a, b)?;
    let total = sumset(&ab, &s)?;
    let missing = total.complement().to_vec();
    let covered_list: Vec<u64> = total.iter().collect();
    let step = covered_list.len().div_ceil(MAX_WITNESSES).max(1);
    let witness_triples = covered_list
        .iter()
        .step_by(step)
        .filter_map(|&t| decompose(a, b, &s, &ab, t))
        .collect();
    Ok(CoverageReport {
        covered: missing.is_empty(),
        missing,
        witness_triples,
    })
}

fn decompose(
    a: &ResidueSet,
    b: &ResidueSet,
    s: &ResidueSet,
    ab: &ResidueSet,
    target: u64,
) -> Option<CoverageWitness> {
    let t = target as i128;
    let sv = s.iter().find(|&x| ab.contains(t - x as i128))?;
    let rest = t - sv as i128;
    let av = a.iter().find(|&x| b.contains(rest - x as i128))?;
    let n = a.modulus();
    Some(CoverageWitness {
        target,
        a: av,
        b: n.reduce(rest - av as i128),
        s: sv,
    })
}

/// `{x^k + y^k}` covers `Z/NZ`: coverage with `A = S = {n^k}` and `B = {0}`.
pub fn waring_check(modulus: &Modulus, k: u32) -> Result<CoverageReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("power must be positive".into()));
    }
    let mut coeffs = vec![0i64; k as usize + 1];
    coeffs[k as usize] = 1;
    let power = IntValuedPoly::from_int_coeffs(&coeffs)?;
    let a = ResidueSet::image(modulus, &power);
    let b = ResidueSet::from_elements(modulus, [0]);
    coverage_check(&a, &b, &power)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionCount {
    /// `#{(x_1, x_2, x_3) ∈ (Z/pZ)^3 : F_1(x_1) + F_2(x_2) + F_3(x_3) ≡ c}`.
    pub count: u64,
    /// Degrees of the `F_i` reduced mod `p`.
    pub degrees: [usize; 3],
    /// `p^2 (1 - Π(deg F_i - 1) / √p)`, for display only.
    pub weil_lower: f64,
    /// Whether every `F_i` has `1 <= deg < p` and `p ∤ deg` mod `p`.
    pub asserted: bool,
    /// `count >= weil_lower`, decided exactly.
    pub holds: bool,
}

/// Counts solutions from the value histograms of the `F_i` in `O(p^2)`.
pub fn solution_count_three(fs: [&IntValuedPoly; 3], c: i128, p: u64) -> Result<SolutionCount> {
    if !ring::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    for f in fs {
        if !f.has_integer_coeffs() {
            return Err(Error::NonIntegerCoefficients(alloc::format!("{f}")));
        }
    }
    let m = Modulus::new(p)?;
    let pu = p as usize;
    let hists: Vec<Vec<u64>> = fs
        .iter()
        .map(|f| f.image_histogram(&m).counts().to_vec())
        .collect();
    // conv[v] = #{(x_1, x_2) : F_1 + F_2 ≡ v}.
    let mut conv = vec![0u64; pu];
    for (v1, &h1) in hists[0].iter().enumerate() {
        if h1 == 0 {
            continue;
        }
        for (v2, &h2) in hists[1].iter().enumerate() {
            let v = v1 + v2;
            conv[if v >= pu { v - pu } else { v }] += h1 * h2;
        }
    }
    let c = m.reduce(c) as usize;
    let count: u64 = conv
        .iter()
        .enumerate()
        .map(|(v, &w)| w * hists[2][(c + pu - v) % pu])
        .sum();

    let degrees = fs.map(|f| degree_mod(f, p));
    let asserted = degrees
        .iter()
        .all(|&d| d >= 1 && (d as u64) < p && d as u64 % p != 0);
    let defect: u128 = degrees
        .iter()
        .map(|&d| d.saturating_sub(1) as u128)
        .product();
    let p2 = p as u128 * p as u128;
    // count >= p^2 - p^{3/2} D  <=>  count >= p^2 or (p^2 - count)^2 <= p^3 D^2.
    let holds = count as u128 >= p2 || {
        let gap = BigInt::from(p2 - count as u128);
        &gap * &gap <= BigInt::from(p).pow(3) * BigInt::from(defect) * BigInt::from(defect)
    };
    let weil_lower = p2 as f64 * (1.0 - defect as f64 / libm::sqrt(p as f64));
    Ok(SolutionCount {
        count,
        degrees,
        weil_lower,
        asserted,
        holds,
    })
}

fn degree_mod(f: &IntValuedPoly, p: u64) -> usize {
    let p = BigInt::from(p);
    f.monomial_coeffs()
        .iter()
        .rposition(|c| !c.to_integer().mod_floor(&p).is_zero())
        .unwrap_or(0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CounterexampleKind {
    Under,
    Over,
    Nonpermutation,
    Interval,
}

/// The data of a non-permutation witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NonpermutationData {
    pub p: u64,
    /// `c` with `Q(n) = P(c n)` in `Z[n]`.
    pub c: u64,
    pub a: u64,
    /// `#{x ∈ Z/pZ : Q(x) ≡ a}`.
    pub m_a: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleWitness {
    pub kind: CounterexampleKind,
    pub modulus: Modulus,
    pub a: ResidueSet,
    pub b: ResidueSet,
    pub poly: IntValuedPoly,
    /// Closed-form value, absent for the interval witness.
    pub predicted: Option<Rational>,
    pub observed: Rational,
    /// `observed - μ(A) μ(B)`.
    pub deviation: Rational,
    pub nonpermutation: Option<NonpermutationData>,
}

impl CounterexampleWitness {
    pub fn matches_prediction(&self) -> bool {
        self.predicted.as_ref().is_none_or(|p| *p == self.observed)
    }
}

fn squares() -> IntValuedPoly {
    IntValuedPoly::from_int_coeffs(&[0, 0, 1]).expect("n^2")
}

fn two_point_union(p: u64, k: u64, q1: u64) -> Result<(Modulus, ResidueSet)> {
    let m = Modulus::new(p * k)?;
    let a = ResidueSet::from_elements(
        &m,
        (0..k as i128).flat_map(|c| [c * p as i128, c * p as i128 + q1 as i128]),
    );
    Ok((m, a))
}

fn require_one_mod_four(p: u64) -> Result<()> {
    if !ring::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p % 4 != 1 {
        return Err(Error::ResidueClassMod4 { p, expected: 1 });
    }
    Ok(())
}

fn self_average_witness(
    kind: CounterexampleKind,
    m: Modulus,
    a: ResidueSet,
    predicted_factor: Rational,
) -> Result<CounterexampleWitness> {
    let poly = squares();
    let report = average::polynomial_average(&a, &a, &poly)?;
    let mu = a.measure();
    Ok(CounterexampleWitness {
        kind,
        modulus: m,
        b: a.clone(),
        a,
        poly,
        predicted: Some(predicted_factor * &mu * &mu),
        observed: report.average,
        deviation: report.deviation,
        nonpermutation: None,
    })
}

/// On `N = k p` with `p ≡ 1 mod 4`: `A = ∪_c {cp, cp + q}` with `q` the least
/// quadratic nonresidue, so that `-q` is also one; the `n^2` self-average is
/// `μ(A)^2 / 2`.
pub fn underergodic_witness(p: u64, k: u64) -> Result<CounterexampleWitness> {
    require_one_mod_four(p)?;
    if k == 0 {
        return Err(Error::InvalidParameter("multiplier k must be positive".into()));
    }
    let q1 = (2..p)
        .find(|&q| ring::legendre_symbol(q as i128, p) == Ok(-1))
        .expect("odd primes have nonresidues");
    let (m, a) = two_point_union(p, k, q1)?;
    self_average_witness(CounterexampleKind::Under, m, a, rational::ratio(1, 2))
}

/// As [`underergodic_witness`] with `q = 1`; the self-average is `3 μ(A)^2 / 2`.
pub fn overergodic_witness(p: u64, k: u64) -> Result<CounterexampleWitness> {
    require_one_mod_four(p)?;
    if k == 0 {
        return Err(Error::InvalidParameter("multiplier k must be positive".into()));
    }
    let (m, a) = two_point_union(p, k, 1)?;
    self_average_witness(CounterexampleKind::Over, m, a, rational::ratio(3, 2))
}

/// For `deg P = d > 1`: the least prime `p > c` with `d | p - 1` and
/// `p ∤ lc(Q)`, where `Q(n) = P(c n)` and `c = c'`. Then `Q` is not a
/// permutation mod `p`; with `a` the least value taken `m_a >= 2` times,
/// `A = {x ≡ 0}` and `B = {x ≡ a}` mod `p` on `N = p · cofactor`, the average
/// of `μ(A ∩ T^{-P(n)} B)` is `m_a / p^2`.
pub fn nonpermutation_witness(
    poly: &IntValuedPoly,
    cofactor: u64,
    search_bound: u64,
) -> Result<CounterexampleWitness> {
    let d = poly.degree().unwrap_or(0);
    if d <= 1 {
        return Err(Error::DegreeTooLow {
            degree: d,
            requirement: "a non-permutation witness needs degree at least 2",
        });
    }
    if cofactor == 0 {
        return Err(Error::InvalidParameter("cofactor must be positive".into()));
    }
    let c = poly.c_prime();
    let q = poly.compose_scale(c as i64);
    let lead = q.leading().expect("nonzero").to_integer();
    let mut p = ring::next_prime(c + 1);
    let (p, a, m_a) = loop {
        if p > search_bound {
            return Err(Error::NotFound {
                bound: search_bound,
            });
        }
        if (p - 1) % d as u64 == 0 && !lead.mod_floor(&BigInt::from(p)).is_zero() {
            let hist = q.image_histogram(&Modulus::new(p)?);
            if let Some((a, m_a)) = hist.support().into_iter().find(|&(_, c)| c >= 2) {
                break (p, a, m_a);
            }
        }
        p = ring::next_prime(p + 1);
    };
    let n = p
        .checked_mul(cofactor)
        .ok_or_else(|| Error::InvalidParameter("modulus overflows u64".into()))?;
    let m = Modulus::new(n)?;
    let a_set = ResidueSet::residue_class(&m, 0, p)?;
    let b_set = ResidueSet::residue_class(&m, a as i128, p)?;
    let report = average::polynomial_average(&a_set, &b_set, &poly.neg())?;
    Ok(CounterexampleWitness {
        kind: CounterexampleKind::Nonpermutation,
        modulus: m,
        a: a_set,
        b: b_set,
        poly: poly.clone(),
        predicted: Some(rational::ratio(m_a as i128, p as i128 * p as i128)),
        observed: report.average,
        deviation: report.deviation,
        nonpermutation: Some(NonpermutationData { p, c, a, m_a }),
    })
}

/// `(1/N) Σ_{n=1}^{N} |μ(A ∩ T^n A) - μ(A)^2|` for `A = {0, ..., ⌊N/10⌋}`.
pub fn interval_witness(modulus: &Modulus) -> Result<CounterexampleWitness> {
    let n = modulus.get();
    let a = ResidueSet::interval(modulus, n / 10 + 1);
    let profile = kernel::correlation_profile(&a, &a)?;
    let size = a.len() as i128;
    let mut acc = BigInt::zero();
    for &count in profile.counts() {
        acc += BigInt::from((n as i128 * count as i128 - size * size).abs());
    }
    let observed = Rational::new(acc, BigInt::from(n).pow(3));
    let mu = a.measure();
    Ok(CounterexampleWitness {
        kind: CounterexampleKind::Interval,
        modulus: modulus.clone(),
        b: a.clone(),
        a,
        poly: IntValuedPoly::from_int_coeffs(&[0, 1])?,
        predicted: None,
        deviation: &observed - &mu * &mu,
        observed,
        nonpermutation: None,
    })
}

/// `P(n) = p n` never moves `{x ≡ 0 mod p}` onto `{x ≡ 1 mod p}`.
pub fn trivial_disjoint_demo(p: u64, n: u64) -> Result<AverageReport> {
    if !ring::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if n % p != 0 {
        return Err(Error::NotDivisible { p, n });
    }
    let m = Modulus::new(n)?;
    let a = ResidueSet::residue_class(&m, 0, p)?;
    let b = ResidueSet::residue_class(&m, 1, p)?;
    let poly = IntValuedPoly::from_int_coeffs(&[0, p.to_i64().ok_or(Error::TooLarge {
        n: p,
        max: i64::MAX as u64,
    })?])?;
    average::polynomial_average(&a, &b, &poly)
}
