//! The correlation kernel `counts[h] = |A ∩ (B + h)|`.
//!
//! Two backends compute the same integers. The bit-vector backend slides a
//! doubled copy of `B` under `A` and popcounts; it is `O(N^2 / 64)` and
//! splits cleanly into shift ranges. The transform backend folds a linear
//! cross-correlation computed by NTT; it is `O(N log N)`.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::ntt;
use crate::poly::Histogram;
use crate::ring::Modulus;
use crate::set::ResidueSet;

/// Below this size the bit-vector backend is faster than the transform.
const AUTO_TRANSFORM_FROM: u64 = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    BitVector,
    Transform,
    #[default]
    Auto,
}

/// `h -> |A ∩ (B + h)|` for every shift `h` in `Z/NZ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelationProfile {
    modulus: Modulus,
    counts: Vec<u64>,
}

impl CorrelationProfile {
    pub fn from_counts(modulus: &Modulus, counts: Vec<u64>) -> Result<Self> {
        if counts.len() != modulus.len() {
            return Err(Error::LengthMismatch {
                len: counts.len(),
                n: modulus.get(),
            });
        }
        Ok(Self {
            modulus: modulus.clone(),
            counts,
        })
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn get(&self, h: u64) -> u64 {
        self.counts[h as usize]
    }

    /// `Σ_h counts[h]`, which equals `|A| |B|`.
    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// `Σ_h c_h counts[h]` for the image histogram `c` of a polynomial.
    pub fn contract(&self, hist: &Histogram) -> Result<u128> {
        if hist.counts().len() != self.counts.len() {
            return Err(Error::ModulusMismatch {
                left: self.modulus.get(),
                right: hist.counts().len() as u64,
            });
        }
        Ok(hist
            .support()
            .into_iter()
            .map(|(h, c)| c as u128 * self.counts[h as usize] as u128)
            .sum())
    }
}

pub fn correlation_profile(a: &ResidueSet, b: &ResidueSet) -> Result<CorrelationProfile> {
    correlation_profile_with(a, b, Backend::Auto)
}

pub fn correlation_profile_with(
    a: &ResidueSet,
    b: &ResidueSet,
    backend: Backend,
) -> Result<CorrelationProfile> {
    a.check_same(b)?;
    let n = a.modulus().get();
    let fits_transform = 2 * n - 1 <= 1 << ntt::MAX_LOG_LEN;
    let counts = match backend {
        Backend::BitVector => bitvector_range(a, b, 0..n as usize),
        Backend::Transform => transform_counts(a, b)?,
        Backend::Auto if n >= AUTO_TRANSFORM_FROM && fits_transform => transform_counts(a, b)?,
        Backend::Auto => bitvector_range(a, b, 0..n as usize),
    };
    CorrelationProfile::from_counts(a.modulus(), counts)
}

/// Bit-vector counts for the shifts in `range`; the pieces of a partition of
/// `0..N` concatenate to the full profile.
pub fn correlation_range(a: &ResidueSet, b: &ResidueSet, range: Range<usize>) -> Result<Vec<u64>> {
    a.check_same(b)?;
    if range.end > a.modulus().len() || range.start > range.end {
        return Err(Error::InvalidParameter("shift range outside 0..N".into()));
    }
    Ok(bitvector_range(a, b, range))
}

/// Counts at selected shifts only.
pub fn counts_at(a: &ResidueSet, b: &ResidueSet, shifts: &[u64]) -> Result<Vec<u64>> {
    a.check_same(b)?;
    let n = a.modulus().get();
    let doubled = doubled_words(b);
    Ok(shifts
        .iter()
        .map(|&h| {
            let s = (n - h % n) as usize;
            a.words()
                .iter()
                .enumerate()
                .map(|(w, &aw)| (aw & extract(&doubled, s + 64 * w)).count_ones() as u64)
                .sum()
        })
        .collect())
}

/// Bit `i` of the result is `B[i mod N]` for `0 <= i < 2N`, with zero padding.
fn doubled_words(b: &ResidueSet) -> Vec<u64> {
    let n = b.modulus().len();
    let words = b.words().len();
    let mut d = vec![0u64; 2 * words + 3];
    for x in b.iter() {
        for pos in [x as usize, x as usize + n] {
            d[pos / 64] |= 1 << (pos % 64);
        }
    }
    d
}

#[inline]
fn extract(d: &[u64], pos: usize) -> u64 {
    let (q, r) = (pos / 64, pos % 64);
    if r == 0 {
        d[q]
    } else {
        (d[q] >> r) | (d[q + 1] << (64 - r))
    }
}

// Bit x of the window starting at N - h of the doubled B is B[x - h], so
// counts[h] = popcount(A & window). Shifts sharing (N - h) mod 64 read the same
// realigned copy of the doubled B at different word offsets.
fn bitvector_range(a: &ResidueSet, b: &ResidueSet, range: Range<usize>) -> Vec<u64> {
    let n = a.modulus().len();
    let aw = a.words();
    let mut out = vec![0u64; range.len()];
    if a.is_empty() || b.is_empty() || range.is_empty() {
        return out;
    }
    let doubled = doubled_words(b);
    let aligned_len = doubled.len() - 1;
    let mut aligned = vec![0u64; aligned_len];
    for r in 0..64usize {
        let mut hs = range
            .clone()
            .filter(|&h| (n - h) % 64 == r)
            .peekable();
        if hs.peek().is_none() {
            continue;
        }
        for (q, slot) in aligned.iter_mut().enumerate() {
            *slot = extract(&doubled, 64 * q + r);
        }
        for h in hs {
            let q0 = (n - h) / 64;
            out[h - range.start] = aw
                .iter()
                .zip(&aligned[q0..q0 + aw.len()])
                .map(|(x, y)| (x & y).count_ones() as u64)
                .sum();
        }
    }
    out
}

// lin[h + N - 1] = #{x : x ∈ A, x - h ∈ B, both in 0..N} from convolving A with
// reversed B; the cyclic count adds the wrapped-around part lin(h - N).
fn transform_counts(a: &ResidueSet, b: &ResidueSet) -> Result<Vec<u64>> {
    let n = a.modulus().len();
    let mut fa = vec![0u64; n];
    for x in a.iter() {
        fa[x as usize] = 1;
    }
    let mut fb = vec![0u64; n];
    for y in b.iter() {
        fb[n - 1 - y as usize] = 1;
    }
    let lin = ntt::convolve(&fa, &fb)?;
    Ok((0..n)
        .map(|h| {
            let direct = lin[h + n - 1];
            let wrapped = if h >= 1 { lin[h - 1] } else { 0 };
            direct + wrapped
        })
        .collect())
}
