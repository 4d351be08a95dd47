//! Exponential-sum counts and the norm bounds built on them.
//!
//! Every inequality is decided on exact rationals. Where a side involves a
//! root, both sides are raised to a power of two first. Floating point only
//! appears in [`ComplexSignal::approx_values`] and friends, which exist for
//! cross-checks.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::poly::IntValuedPoly;
use crate::rational::{self, Rational};
use crate::ring::{self, Modulus};
use crate::set::ResidueSet;

/// Largest supported signal denominator, keeping all intermediate sums in `i128`.
pub const MAX_SIGNAL_DENOMINATOR: u64 = 1 << 31;
/// Default work limit for one differencing step of the norm check.
pub const DEFAULT_VDC_BUDGET: u64 = 200_000_000;
/// Thresholds and the norm check raise rationals to `2^(d-1)`; beyond this
/// degree the exact powers get impractically large.
pub const MAX_THRESHOLD_DEGREE: usize = 12;

/// An exact comparison `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
    /// `rhs - lhs`.
    pub slack: Rational,
    /// False when the hypotheses of the bound are not met; the sides are
    /// still computed but `holds` carries no claim.
    pub asserted: bool,
}

impl BoundReport {
    pub fn new(lhs: Rational, rhs: Rational, asserted: bool) -> Self {
        Self {
            holds: lhs <= rhs,
            slack: &rhs - &lhs,
            lhs,
            rhs,
            asserted,
        }
    }
}

/// `N^{-d} · #{(h_1, ..., h_d) ∈ [1, N]^d : j h_1 ... h_d ≡ 0 mod N}`.
///
/// This is the value of `(1/N^d) Σ_h (1/N) Σ_n e(j n h_1 ... h_d / N)`.
/// By the Chinese remainder theorem the count factors over the prime powers
/// `p^a || N`; for each, a dynamic program over `p`-adic valuations (capped at
/// `a`) counts tuples whose valuations add up to at least `a - v_p(j)`.
pub fn expsum_exact(modulus: &Modulus, j: i128, d: u32) -> Result<Rational> {
    let n = modulus.get();
    let j = modulus.reduce(j);
    if j == 0 {
        return Err(Error::ZeroFrequency { j, n });
    }
    if d == 0 {
        return Err(Error::InvalidParameter("dimension d must be positive".into()));
    }
    let mut count = BigInt::one();
    for &(p, a) in modulus.factors() {
        let a = a as usize;
        let mut vj = 0usize;
        let mut rest = j;
        while vj < a && rest % p == 0 {
            rest /= p;
            vj += 1;
        }
        let need = a - vj;
        // #{h ∈ [1, p^a] : min(v_p(h), a) = v}
        let weights: Vec<BigInt> = (0..=a)
            .map(|v| {
                if v == a {
                    BigInt::one()
                } else {
                    BigInt::from(p).pow((a - v) as u32) - BigInt::from(p).pow((a - v - 1) as u32)
                }
            })
            .collect();
        let mut dp = vec![BigInt::zero(); need + 1];
        dp[0] = BigInt::one();
        for _ in 0..d {
            let mut next = vec![BigInt::zero(); need + 1];
            for (s, ways) in dp.iter().enumerate() {
                if ways.is_zero() {
                    continue;
                }
                for (v, w) in weights.iter().enumerate() {
                    next[(s + v).min(need)] += ways * w;
                }
            }
            dp = next;
        }
        count *= &dp[need];
    }
    Ok(Rational::new(count, BigInt::from(n).pow(d)))
}

/// Worst case of [`expsum_exact`] over `j` against `d / lpf(N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpsumBound {
    pub report: BoundReport,
    /// Smallest `j` attaining the maximum.
    pub worst_j: u64,
}

/// The value only depends on `gcd(j, N)`, so proper divisors of `N` cover
/// every `j ∈ [1, N-1]`, and the smallest maximizing `j` is a divisor.
pub fn expsum_bound_check(modulus: &Modulus, d: u32) -> Result<ExpsumBound> {
    let mut best: Option<(Rational, u64)> = None;
    for g in modulus.divisors() {
        if g == modulus.get() {
            continue;
        }
        let v = expsum_exact(modulus, g as i128, d)?;
        let better = match &best {
            None => true,
            Some((b, bj)) => v > *b || (v == *b && g < *bj),
        };
        if better {
            best = Some((v, g));
        }
    }
    let (lhs, worst_j) = best.expect("N > 1 has the proper divisor 1");
    let rhs = rational::ratio(d as i128, modulus.lpf() as i128);
    Ok(ExpsumBound {
        report: BoundReport::new(lhs, rhs, true),
        worst_j,
    })
}

/// A function `f : Z/NZ -> C` with exact Gaussian-rational data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexSignal {
    modulus: Modulus,
    repr: SignalRepr,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SignalRepr {
    /// `f(x) = (re[x] + i im[x]) / denom` for `x = 0..N`.
    Values {
        re: Vec<i64>,
        im: Vec<i64>,
        denom: u64,
    },
    /// `f(x) = Σ (re + i im) / denom · e(j x / N)` over the listed `(j, re, im)`,
    /// with distinct `j` in ascending order.
    Spectrum {
        coeffs: Vec<(u64, i64, i64)>,
        denom: u64,
    },
}

fn check_denom(denom: u64) -> Result<()> {
    if denom == 0 || denom > MAX_SIGNAL_DENOMINATOR {
        return Err(Error::InvalidParameter(alloc::format!(
            "signal denominator must lie in 1..={MAX_SIGNAL_DENOMINATOR}"
        )));
    }
    Ok(())
}

impl ComplexSignal {
    /// Pointwise values over a common denominator; requires `|f| <= 1`.
    pub fn from_values(modulus: &Modulus, re: Vec<i64>, im: Vec<i64>, denom: u64) -> Result<Self> {
        check_denom(denom)?;
        for len in [re.len(), im.len()] {
            if len != modulus.len() {
                return Err(Error::LengthMismatch {
                    len,
                    n: modulus.get(),
                });
            }
        }
        let bound = denom as i128 * denom as i128;
        if let Some(x) = (0..re.len())
            .find(|&x| re[x] as i128 * re[x] as i128 + im[x] as i128 * im[x] as i128 > bound)
        {
            return Err(Error::SignalOutOfRange(x));
        }
        Ok(Self {
            modulus: modulus.clone(),
            repr: SignalRepr::Values { re, im, denom },
        })
    }

    pub fn real(modulus: &Modulus, values: Vec<i64>, denom: u64) -> Result<Self> {
        let im = vec![0; values.len()];
        Self::from_values(modulus, values, im, denom)
    }

    pub fn constant(modulus: &Modulus, re: i64, im: i64, denom: u64) -> Result<Self> {
        let n = modulus.len();
        Self::from_values(modulus, vec![re; n], vec![im; n], denom)
    }

    /// `1_A - μ(A)`.
    pub fn centered_indicator(a: &ResidueSet) -> Result<Self> {
        let n = a.modulus().get();
        let size = a.len() as i64;
        let values = (0..n as i128)
            .map(|x| if a.contains(x) { n as i64 - size } else { -size })
            .collect();
        Self::real(a.modulus(), values, n)
    }

    /// Independent uniform signs.
    pub fn random_signs<R: RngCore + ?Sized>(modulus: &Modulus, rng: &mut R) -> Self {
        let values = (0..modulus.len())
            .map(|_| if rng.next_u32() & 1 == 1 { 1 } else { -1 })
            .collect();
        Self::real(modulus, values, 1).expect("unit signs")
    }

    /// A combination of characters `x -> e(j x / N)`. Requires
    /// `Σ (|re| + |im|) <= denom`, which guarantees `|f| <= 1`.
    pub fn from_spectrum(
        modulus: &Modulus,
        coeffs: impl IntoIterator<Item = (u64, i64, i64)>,
        denom: u64,
    ) -> Result<Self> {
        check_denom(denom)?;
        let n = modulus.get();
        let mut merged: alloc::collections::BTreeMap<u64, (i64, i64)> = Default::default();
        for (j, re, im) in coeffs {
            let e = merged.entry(j % n).or_default();
            e.0 += re;
            e.1 += im;
        }
        let coeffs: Vec<(u64, i64, i64)> = merged
            .into_iter()
            .filter(|(_, (re, im))| *re != 0 || *im != 0)
            .map(|(j, (re, im))| (j, re, im))
            .collect();
        let l1: u128 = coeffs
            .iter()
            .map(|&(_, re, im)| re.unsigned_abs() as u128 + im.unsigned_abs() as u128)
            .sum();
        if l1 > denom as u128 {
            return Err(Error::SignalOutOfRange(0));
        }
        Ok(Self {
            modulus: modulus.clone(),
            repr: SignalRepr::Spectrum { coeffs, denom },
        })
    }

    /// `x -> e(j x / N)`.
    pub fn character(modulus: &Modulus, j: u64) -> Result<Self> {
        Self::from_spectrum(modulus, [(j, 1, 0)], 1)
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn repr(&self) -> &SignalRepr {
        &self.repr
    }

    /// `∫ f dμ` as `(re, im)`.
    pub fn mean(&self) -> (Rational, Rational) {
        match &self.repr {
            SignalRepr::Values { re, im, denom } => {
                let d = self.modulus.get() as i128 * *denom as i128;
                let sr: i128 = re.iter().map(|&v| v as i128).sum();
                let si: i128 = im.iter().map(|&v| v as i128).sum();
                (rational::ratio(sr, d), rational::ratio(si, d))
            }
            SignalRepr::Spectrum { coeffs, denom } => coeffs
                .iter()
                .find(|c| c.0 == 0)
                .map(|&(_, re, im)| {
                    (
                        rational::ratio(re as i128, *denom as i128),
                        rational::ratio(im as i128, *denom as i128),
                    )
                })
                .unwrap_or_default(),
        }
    }

    /// `|∫ f dμ|^2`.
    pub fn mean_abs_squared(&self) -> Rational {
        let (re, im) = self.mean();
        &re * &re + &im * &im
    }

    pub fn is_mean_zero(&self) -> bool {
        let (re, im) = self.mean();
        re.is_zero() && im.is_zero()
    }

    /// `‖f‖^2 = (1/N) Σ |f(x)|^2`.
    pub fn norm_squared(&self) -> Rational {
        match &self.repr {
            SignalRepr::Values { re, im, denom } => {
                let s: i128 = re
                    .iter()
                    .zip(im)
                    .map(|(&a, &b)| a as i128 * a as i128 + b as i128 * b as i128)
                    .sum();
                let d = self.modulus.get() as i128 * *denom as i128 * *denom as i128;
                rational::ratio(s, d)
            }
            SignalRepr::Spectrum { coeffs, denom } => {
                let s: i128 = coeffs
                    .iter()
                    .map(|&(_, a, b)| a as i128 * a as i128 + b as i128 * b as i128)
                    .sum();
                rational::ratio(s, *denom as i128 * *denom as i128)
            }
        }
    }

    /// Floating-point values `f(0..N)`, for cross-checks only.
    pub fn approx_values(&self) -> Vec<Complex64> {
        let n = self.modulus.len();
        match &self.repr {
            SignalRepr::Values { re, im, denom } => re
                .iter()
                .zip(im)
                .map(|(&a, &b)| Complex64::new(a as f64, b as f64) / *denom as f64)
                .collect(),
            SignalRepr::Spectrum { coeffs, denom } => (0..n)
                .map(|x| {
                    coeffs
                        .iter()
                        .map(|&(j, a, b)| {
                            Complex64::new(a as f64, b as f64) / *denom as f64
                                * unit_root((j as u128 * x as u128 % n as u128) as u64, n as u64)
                        })
                        .sum()
                })
                .collect(),
        }
    }

    /// Floating-point Fourier coefficients `f̂(j) = (1/N) Σ_x f(x) e(-j x / N)`.
    pub fn approx_spectrum(&self) -> Vec<Complex64> {
        let n = self.modulus.len();
        let values = self.approx_values();
        (0..n)
            .map(|j| {
                values
                    .iter()
                    .enumerate()
                    .map(|(x, v)| {
                        let k = (n as u128 - (j as u128 * x as u128 % n as u128)) % n as u128;
                        v * unit_root(k as u64, n as u64)
                    })
                    .sum::<Complex64>()
                    / n as f64
            })
            .collect()
    }

    /// Gaussian-integer autocorrelation numerators:
    /// `⟨T^k f, f⟩ = (re[k] + i im[k]) / (N denom^2)`.
    fn autocorrelation(&self) -> Option<(Vec<i128>, Vec<i128>, u64)> {
        let SignalRepr::Values { re, im, denom } = &self.repr else {
            return None;
        };
        let n = re.len();
        let mut out_re = vec![0i128; n];
        let mut out_im = vec![0i128; n];
        for k in 0..n {
            let (mut sr, mut si) = (0i128, 0i128);
            for m in 0..n {
                let x = if m + k >= n { m + k - n } else { m + k };
                let (ar, ai) = (re[x] as i128, im[x] as i128);
                let (br, bi) = (re[m] as i128, im[m] as i128);
                sr += ar * br + ai * bi;
                si += ai * br - ar * bi;
            }
            out_re[k] = sr;
            out_im[k] = si;
        }
        Some((out_re, out_im, *denom))
    }

    /// `x -> f(c x)`.
    fn compose_scale(&self, c: u64) -> Option<Self> {
        let SignalRepr::Values { re, im, denom } = &self.repr else {
            return None;
        };
        let n = self.modulus.get();
        let idx = |x: usize| ring::mul_mod(c, x as u64, n) as usize;
        Some(Self {
            modulus: self.modulus.clone(),
            repr: SignalRepr::Values {
                re: (0..re.len()).map(|x| re[idx(x)]).collect(),
                im: (0..im.len()).map(|x| im[idx(x)]).collect(),
                denom: *denom,
            },
        })
    }
}

fn unit_root(k: u64, n: u64) -> Complex64 {
    let theta = 2.0 * core::f64::consts::PI * k as f64 / n as f64;
    Complex64::new(libm::cos(theta), libm::sin(theta))
}

/// `#{(n, h_1, ..., h_d) ∈ [1, N]^{d+1} : n h_1 ... h_d ≡ k}` for every `k`.
fn product_distribution(n: usize, d: u32) -> Vec<u128> {
    let mut dist = vec![1u128; n];
    for _ in 0..d {
        let mut next = vec![0u128; n];
        for (x, &w) in dist.iter().enumerate() {
            if w == 0 {
                continue;
            }
            let mut k = 0usize;
            for _ in 0..n {
                next[k] += w;
                k += x;
                if k >= n {
                    k -= n;
                }
            }
        }
        dist = next;
    }
    dist
}

/// Compares `(1/N^d) Σ_h (1/N) Σ_n ⟨T^{n h_1 ... h_d} f, f⟩` with
/// `|∫ f|^2 + (d / lpf N) ‖f‖^2`.
///
/// For spectral signals the left side is `Σ_j |f̂(j)|^2 E(j)` with `E` the
/// exponential-sum count; for pointwise signals it is a contraction of the
/// autocorrelation against the distribution of `n h_1 ... h_d mod N`.
pub fn weighted_linear_check(f: &ComplexSignal, d: u32) -> Result<BoundReport> {
    if d == 0 {
        return Err(Error::InvalidParameter("dimension d must be positive".into()));
    }
    let m = f.modulus();
    let rhs = f.mean_abs_squared()
        + rational::ratio(d as i128, m.lpf() as i128) * f.norm_squared();
    let lhs = match f.repr() {
        SignalRepr::Spectrum { coeffs, denom } => {
            let mut acc = Rational::zero();
            for &(j, re, im) in coeffs {
                let power = rational::ratio(
                    re as i128 * re as i128 + im as i128 * im as i128,
                    *denom as i128 * *denom as i128,
                );
                let weight = if j == 0 {
                    Rational::one()
                } else {
                    expsum_exact(m, j as i128, d)?
                };
                acc += power * weight;
            }
            acc
        }
        SignalRepr::Values { .. } => {
            let (r_re, r_im, denom) = f.autocorrelation().expect("pointwise signal");
            let dist = product_distribution(m.len(), d);
            let mut re = BigInt::zero();
            let mut im = BigInt::zero();
            for ((w, a), b) in dist.iter().zip(&r_re).zip(&r_im) {
                re += BigInt::from(*w) * BigInt::from(*a);
                im += BigInt::from(*w) * BigInt::from(*b);
            }
            debug_assert!(im.is_zero(), "weights are symmetric under k -> -k");
            let n = BigInt::from(m.get());
            let scale = n.pow(d + 2) * BigInt::from(denom) * BigInt::from(denom);
            Rational::new(re, scale)
        }
    };
    Ok(BoundReport::new(lhs, rhs, true))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NormOptions {
    /// Skip a differencing step when `N^{d+1} 2^d` exceeds this.
    pub vdc_budget: u64,
}

impl Default for NormOptions {
    fn default() -> Self {
        Self {
            vdc_budget: DEFAULT_VDC_BUDGET,
        }
    }
}

/// One step of the differencing chain:
/// `‖avg‖^{2^d} <= (1/N^d) Σ_h ⟨(1/N) Σ_n T^{Δ_d(Q(n); h)} g, g⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VdcStep {
    pub d: u32,
    /// `None` when the step exceeded the work budget.
    pub report: Option<BoundReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormCheck {
    /// `‖(1/N) Σ_{n=1}^{N} T^{P(n)} f‖^2`.
    pub lhs_squared: Rational,
    pub degree: usize,
    /// `(k - 1) / lpf N`.
    pub bound: Rational,
    /// For `k >= 2`: `(lhs^2)^{2^{k-2}}` against `bound`, i.e. the norm against
    /// `bound^{2^{-(k-1)}}` raised to `2^{k-1}`. For `k = 1`: `lhs^2` against 0.
    pub report: BoundReport,
    /// Whether `lpf N > C_P`, the regime where the bound is claimed.
    pub applicable: bool,
    /// `c'` when the chain was run on `c' P` and `f(c'^{-1} x)`.
    pub reindexed_by: Option<u64>,
    pub vdc: Vec<VdcStep>,
}

pub fn average_norm_check_set(
    a: &ResidueSet,
    p: &IntValuedPoly,
    options: NormOptions,
) -> Result<NormCheck> {
    average_norm_check(&ComplexSignal::centered_indicator(a)?, p, options)
}

/// Bounds `‖(1/N) Σ_n T^{P(n)} f‖` by `((k-1)/lpf N)^{2^{-(k-1)}}` for a
/// mean-zero pointwise signal, and checks each differencing step on the way.
pub fn average_norm_check(
    f: &ComplexSignal,
    p: &IntValuedPoly,
    options: NormOptions,
) -> Result<NormCheck> {
    let SignalRepr::Values { re, im, denom } = f.repr() else {
        return Err(Error::InvalidParameter(
            "the norm check needs a pointwise signal".into(),
        ));
    };
    if !f.is_mean_zero() {
        return Err(Error::NotMeanZero);
    }
    let k = match p.degree() {
        Some(k) if k >= 1 => k,
        other => {
            return Err(Error::DegreeTooLow {
                degree: other.unwrap_or(0),
                requirement: "the polynomial must be nonconstant",
            })
        }
    };
    if k > MAX_THRESHOLD_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: k,
            max: MAX_THRESHOLD_DEGREE,
        });
    }
    let m = f.modulus();
    let n = m.len();

    // avg(x) = G(x) / (N denom) with G(x) = Σ_h c_h F(x + h).
    let hist = p.image_histogram(m);
    let support = hist.support();
    let mut energy = BigInt::zero();
    for x in 0..n {
        let (mut gr, mut gi) = (0i128, 0i128);
        for &(h, c) in &support {
            let y = (x + h as usize) % n;
            gr += c as i128 * re[y] as i128;
            gi += c as i128 * im[y] as i128;
        }
        energy += BigInt::from(gr * gr) + BigInt::from(gi * gi);
    }
    let nn = BigInt::from(m.get());
    let lhs_squared = Rational::new(
        energy,
        nn.pow(3) * BigInt::from(*denom) * BigInt::from(*denom),
    );

    let bound = rational::ratio(k as i128 - 1, m.lpf() as i128);
    let applicable = m.lpf() > p.c_p();
    let report = if k == 1 {
        BoundReport::new(lhs_squared.clone(), Rational::zero(), applicable)
    } else {
        let power = rational::pow_two_power(&lhs_squared, k as u32 - 2);
        BoundReport::new(power, bound.clone(), applicable)
    };

    let c_prime = p.c_prime();
    let mut vdc = Vec::new();
    let mut reindexed_by = None;
    if let Ok(inv) = ring::mod_inverse(c_prime as i128, m) {
        let q = p.integer_multiple();
        let g = if c_prime == 1 {
            f.clone()
        } else {
            reindexed_by = Some(c_prime);
            f.compose_scale(inv.value()).expect("pointwise signal")
        };
        let table = q.values_mod(m);
        // values_mod lists Q(1..=N); rotate so table[x] = Q(x) for x in 0..N.
        let mut q_at = vec![0u64; n];
        for (i, v) in table.into_iter().enumerate() {
            q_at[(i + 1) % n] = v;
        }
        let mut autocorrelation = None;
        for d in 1..k as u32 {
            let work = (n as u128).pow(d + 1) << d;
            if work > options.vdc_budget as u128 {
                vdc.push(VdcStep { d, report: None });
                continue;
            }
            let (r_re, _, g_denom) = autocorrelation
                .get_or_insert_with(|| g.autocorrelation().expect("pointwise signal"));
            let g_denom = *g_denom;
            let weights = difference_weights(&q_at, d);
            let mut acc = BigInt::zero();
            for (w, r) in weights.iter().zip(r_re.iter()) {
                if *w != 0 {
                    acc += BigInt::from(*w) * BigInt::from(*r);
                }
            }
            let rhs = Rational::new(
                acc,
                nn.pow(d + 2) * BigInt::from(g_denom) * BigInt::from(g_denom),
            );
            let lhs = rational::pow_two_power(&lhs_squared, d - 1);
            vdc.push(VdcStep {
                d,
                report: Some(BoundReport::new(lhs, rhs, true)),
            });
        }
    }

    Ok(NormCheck {
        lhs_squared,
        degree: k,
        bound,
        report,
        applicable,
        reindexed_by,
        vdc,
    })
}

/// `#{(h_1..h_d, n) ∈ (Z/NZ)^{d+1} : Δ_d(Q; h)(n) ≡ k}` from the value table
/// of an `N`-periodic `Q`, expanding the difference by inclusion–exclusion.
fn difference_weights(q_at: &[u64], d: u32) -> Vec<u64> {
    let n = q_at.len();
    let subsets = 1usize << d;
    let mut weights = vec![0u64; n];
    let mut h = vec![0usize; d as usize];
    let mut offsets = vec![0usize; subsets];
    let signs: Vec<bool> = (0..subsets)
        .map(|s| (d as usize - (s as u32).count_ones() as usize) % 2 == 0)
        .collect();
    loop {
        for (s, off) in offsets.iter_mut().enumerate() {
            *off = (0..d as usize)
                .filter(|i| s >> i & 1 == 1)
                .map(|i| h[i])
                .sum::<usize>()
                % n;
        }
        for x in 0..n {
            let mut v = 0u64;
            for s in 0..subsets {
                let mut y = x + offsets[s];
                if y >= n {
                    y -= n;
                }
                let t = q_at[y];
                v = if signs[s] {
                    ring::add_mod(v, t, n as u64)
                } else {
                    ring::add_mod(v, n as u64 - t, n as u64)
                };
            }
            weights[v as usize] += 1;
        }
        // Odometer over the shifts.
        let mut i = 0;
        loop {
            if i == d as usize {
                return weights;
            }
            h[i] += 1;
            if h[i] < n {
                break;
            }
            h[i] = 0;
            i += 1;
        }
    }
}

/// Size thresholds on `lpf N` for the pair-count statements.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThresholdReport {
    pub c_p: u64,
    /// `max{C_P, (d-1) μ(A)(1-μ(A)) (ε μ(A) √μ(B))^{-2^{d-1}}}`.
    pub threshold: Rational,
    pub epsilon: Rational,
    pub delta: Rational,
    /// `max{C_P, (d-1)/4 · δ^{-2^{d-2}}}`.
    pub c: Rational,
    /// `C / ε^{2^{d-1}}`.
    pub quantitative_threshold: Rational,
    /// Set when `μ(A) ∈ {0, 1}`, where the threshold collapses to `C_P`.
    pub degenerate: bool,
}

impl ThresholdReport {
    /// Whether `lpf N` strictly exceeds the density-dependent threshold.
    pub fn exceeded_by(&self, lpf: u64) -> bool {
        rational::int(lpf as i128) > self.threshold
    }
}

fn in_unit_interval(name: &str, x: &Rational, allow_zero: bool) -> Result<()> {
    let ok = *x <= Rational::one() && (x.is_positive() || (allow_zero && x.is_zero()));
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParameter(alloc::format!(
            "{name} must lie in {}0, 1]",
            if allow_zero { "[" } else { "(" }
        )))
    }
}

pub fn thresholds(
    p: &IntValuedPoly,
    mu_a: &Rational,
    mu_b: &Rational,
    eps: &Rational,
    delta: &Rational,
) -> Result<ThresholdReport> {
    let d = p.degree().unwrap_or(0);
    if d <= 1 {
        return Err(Error::DegreeTooLow {
            degree: d,
            requirement: "thresholds need degree at least 2",
        });
    }
    if d > MAX_THRESHOLD_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: d,
            max: MAX_THRESHOLD_DEGREE,
        });
    }
    in_unit_interval("mu(A)", mu_a, true)?;
    in_unit_interval("mu(B)", mu_b, false)?;
    in_unit_interval("epsilon", eps, false)?;
    in_unit_interval("delta", delta, false)?;

    let c_p = rational::int(p.c_p() as i128);
    let big = 1u32 << (d - 1);
    let half = 1u32 << (d - 2);
    let d1 = rational::int(d as i128 - 1);
    let degenerate = mu_a.is_zero() || mu_a.is_one();
    let threshold = if degenerate {
        c_p.clone()
    } else {
        let numer = &d1 * mu_a * (Rational::one() - mu_a);
        let denom = rational::pow(&(eps * mu_a), big) * rational::pow(mu_b, half);
        (numer / denom).max(c_p.clone())
    };
    let c = (&d1 / rational::int(4) / rational::pow(delta, half)).max(c_p);
    let quantitative_threshold = &c / rational::pow(eps, big);
    Ok(ThresholdReport {
        c_p: p.c_p(),
        threshold,
        epsilon: eps.clone(),
        delta: delta.clone(),
        c,
        quantitative_threshold,
        degenerate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn m(n: u64) -> Modulus {
        Modulus::new(n).unwrap()
    }

    #[test]
    fn expsum_examples() {
        assert_eq!(expsum_exact(&m(15), 5, 1).unwrap(), ratio(1, 3));
        assert_eq!(expsum_exact(&m(15), 1, 1).unwrap(), ratio(1, 15));
        assert_eq!(expsum_exact(&m(9), 3, 2).unwrap(), ratio(5, 9));
        assert_eq!(
            expsum_exact(&m(15), 30, 1),
            Err(Error::ZeroFrequency { j: 0, n: 15 })
        );
    }

    #[test]
    fn expsum_bound_examples() {
        let r = expsum_bound_check(&m(15), 1).unwrap();
        assert_eq!((r.report.lhs.clone(), r.report.rhs.clone()), (ratio(1, 3), ratio(1, 3)));
        assert!(r.report.holds);
        assert_eq!(r.worst_j, 5);
        let r = expsum_bound_check(&m(9), 2).unwrap();
        assert_eq!(r.report.lhs, ratio(5, 9));
        assert_eq!(r.report.rhs, ratio(2, 3));
        let r = expsum_bound_check(&m(13), 1).unwrap();
        assert_eq!(r.report.lhs, ratio(1, 13));
        assert!(r.report.slack.is_zero());
    }

    #[test]
    fn weighted_linear_constant() {
        for d in 1..=3 {
            let f = ComplexSignal::constant(&m(12), 1, 0, 1).unwrap();
            let r = weighted_linear_check(&f, d).unwrap();
            assert_eq!(r.lhs, int(1));
            assert!(r.holds);
        }
    }

    #[test]
    fn weighted_linear_characters() {
        let n = m(15);
        let r = weighted_linear_check(&ComplexSignal::character(&n, 1).unwrap(), 1).unwrap();
        assert_eq!(r.lhs, ratio(1, 15));
        assert_eq!(r.rhs, ratio(1, 3));
        let r = weighted_linear_check(&ComplexSignal::character(&n, 5).unwrap(), 1).unwrap();
        assert_eq!(r.lhs, ratio(1, 3));
        assert!(r.holds && r.slack.is_zero());
    }

    #[test]
    fn weighted_linear_centered_set() {
        let n = m(15);
        let a = ResidueSet::from_elements(&n, [0, 7]);
        let r = weighted_linear_check(&ComplexSignal::centered_indicator(&a).unwrap(), 1).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn norm_check_zero_signal() {
        let f = ComplexSignal::constant(&m(15), 0, 0, 1).unwrap();
        let p = IntValuedPoly::parse("n^2").unwrap();
        let r = average_norm_check(&f, &p, NormOptions::default()).unwrap();
        assert!(r.lhs_squared.is_zero());
        assert!(r.report.holds);
    }

    #[test]
    fn norm_check_worked_set() {
        let n = m(15);
        let a = ResidueSet::from_elements(&n, [0, 7]);
        let p = IntValuedPoly::parse("n^2").unwrap();
        let r = average_norm_check_set(&a, &p, NormOptions::default()).unwrap();
        assert_eq!(r.bound, ratio(1, 3));
        assert!(r.report.holds);
        assert!(r.applicable);
        // The first differencing step is an identity.
        let step = r.vdc[0].report.as_ref().unwrap();
        assert_eq!(step.lhs, step.rhs);
    }

    #[test]
    fn norm_check_rejects_bad_inputs() {
        let f = ComplexSignal::constant(&m(15), 1, 0, 2).unwrap();
        let p = IntValuedPoly::parse("n^2").unwrap();
        assert_eq!(
            average_norm_check(&f, &p, NormOptions::default()),
            Err(Error::NotMeanZero)
        );
        assert!(ComplexSignal::real(&m(3), vec![2, 0, 0], 1).is_err());
    }

    #[test]
    fn threshold_examples() {
        let sq = IntValuedPoly::parse("n^2").unwrap();
        let half = ratio(1, 2);
        let r = thresholds(&sq, &half, &half, &int(1), &ratio(1, 4)).unwrap();
        assert_eq!(r.c_p, 2);
        assert_eq!(r.threshold, int(2));
        assert_eq!(r.c, int(2));
        let tri = IntValuedPoly::parse("(n^2+n)/2").unwrap();
        let r = thresholds(&tri, &half, &half, &int(1), &int(1)).unwrap();
        assert_eq!(r.c_p, 2);
        let r = thresholds(&sq, &int(1), &half, &int(1), &int(1)).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.threshold, int(2));
        let lin = IntValuedPoly::parse("3*n").unwrap();
        assert!(matches!(
            thresholds(&lin, &half, &half, &int(1), &int(1)),
            Err(Error::DegreeTooLow { .. })
        ));
    }
}
