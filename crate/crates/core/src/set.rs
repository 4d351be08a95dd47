//! Subsets of `Z/NZ` as packed bit vectors.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::poly::IntValuedPoly;
use crate::rational::{self, Rational};
use crate::ring::Modulus;

/// A subset `A ⊆ Z/NZ`. Bit `x` of the packed words is set iff `x ∈ A`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    modulus: Modulus,
    words: Vec<u64>,
    size: usize,
}

fn word_count(n: usize) -> usize {
    n.div_ceil(64)
}

impl ResidueSet {
    pub fn empty(modulus: &Modulus) -> Self {
        Self {
            modulus: modulus.clone(),
            words: vec![0; word_count(modulus.len())],
            size: 0,
        }
    }

    pub fn full(modulus: &Modulus) -> Self {
        let mut s = Self::empty(modulus);
        for x in 0..modulus.len() {
            s.insert_unchecked(x);
        }
        s
    }

    /// Collects arbitrary integer representatives, reducing each mod `N`.
    pub fn from_elements<I: IntoIterator<Item = i128>>(modulus: &Modulus, items: I) -> Self {
        let mut s = Self::empty(modulus);
        for v in items {
            s.insert(v);
        }
        s
    }

    /// Builds a set from a bit mask; only valid for `N <= 64`.
    pub fn from_mask(modulus: &Modulus, mask: u64) -> Result<Self> {
        if modulus.get() > 64 {
            return Err(Error::TooLarge {
                n: modulus.get(),
                max: 64,
            });
        }
        let mask = if modulus.get() == 64 {
            mask
        } else {
            mask & ((1u64 << modulus.get()) - 1)
        };
        Ok(Self {
            modulus: modulus.clone(),
            words: vec![mask],
            size: mask.count_ones() as usize,
        })
    }

    /// Rebuilds a set from packed words; bits at or beyond `N` are cleared.
    pub fn from_words(modulus: &Modulus, mut words: Vec<u64>) -> Result<Self> {
        let need = word_count(modulus.len());
        if words.len() != need {
            return Err(Error::LengthMismatch {
                len: words.len() * 64,
                n: modulus.get(),
            });
        }
        let tail = modulus.len() % 64;
        if tail != 0 {
            words[need - 1] &= (1u64 << tail) - 1;
        }
        let size = words.iter().map(|w| w.count_ones() as usize).sum();
        Ok(Self {
            modulus: modulus.clone(),
            words,
            size,
        })
    }

    /// `{x : x ≡ a mod q}` over the representatives `0..N`.
    pub fn residue_class(modulus: &Modulus, a: i128, q: u64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidParameter("residue class modulus must be positive".into()));
        }
        let start = a.rem_euclid(q as i128) as usize;
        let mut s = Self::empty(modulus);
        for x in (start..modulus.len()).step_by(q as usize) {
            s.insert_unchecked(x);
        }
        Ok(s)
    }

    /// `{start + i * step : 0 <= i < count}` reduced mod `N`.
    pub fn progression(modulus: &Modulus, start: i128, step: i128, count: u64) -> Self {
        Self::from_elements(modulus, (0..count as i128).map(|i| start + i * step))
    }

    /// `{0, 1, ..., len - 1}`.
    pub fn interval(modulus: &Modulus, len: u64) -> Self {
        Self::progression(modulus, 0, 1, len.min(modulus.get()))
    }

    /// The image `{P(n) mod N}`.
    pub fn image(modulus: &Modulus, p: &IntValuedPoly) -> Self {
        let mut s = Self::empty(modulus);
        for v in p.values_mod(modulus) {
            s.insert_unchecked(v as usize);
        }
        s
    }

    /// A uniformly random subset: every bit is an independent fair coin.
    pub fn random<R: RngCore + ?Sized>(modulus: &Modulus, rng: &mut R) -> Self {
        let words = (0..word_count(modulus.len()))
            .map(|_| rng.next_u64())
            .collect();
        Self::from_words(modulus, words).expect("word count matches")
    }

    /// A random subset where each element is kept with probability `num / den`.
    pub fn random_with_density<R: RngCore + ?Sized>(
        modulus: &Modulus,
        num: u64,
        den: u64,
        rng: &mut R,
    ) -> Result<Self> {
        if den == 0 || num > den {
            return Err(Error::InvalidParameter("density must lie in [0, 1]".into()));
        }
        let mut s = Self::empty(modulus);
        for x in 0..modulus.len() {
            // Rejection-free: compare a uniform u64 scaled into [0, den).
            let r = ((rng.next_u64() as u128 * den as u128) >> 64) as u64;
            if r < num {
                s.insert_unchecked(x);
            }
        }
        Ok(s)
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The bit mask of a set with `N <= 64`.
    pub fn to_mask(&self) -> Option<u64> {
        (self.modulus.get() <= 64).then(|| self.words[0])
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// `μ(A) = |A| / N`.
    pub fn measure(&self) -> Rational {
        rational::ratio(self.size as i128, self.modulus.get() as i128)
    }

    pub fn contains(&self, x: i128) -> bool {
        let x = self.modulus.reduce(x) as usize;
        self.words[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn insert(&mut self, x: i128) {
        let x = self.modulus.reduce(x) as usize;
        self.insert_unchecked(x);
    }

    fn insert_unchecked(&mut self, x: usize) {
        let bit = 1u64 << (x % 64);
        let w = &mut self.words[x / 64];
        if *w & bit == 0 {
            *w |= bit;
            self.size += 1;
        }
    }

    /// Elements in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            core::iter::from_fn(move || {
                (w != 0).then(|| {
                    let bit = w.trailing_zeros() as u64;
                    w &= w - 1;
                    i as u64 * 64 + bit
                })
            })
        })
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    pub(crate) fn check_same(&self, other: &Self) -> Result<()> {
        if self.modulus.get() != other.modulus.get() {
            return Err(Error::ModulusMismatch {
                left: self.modulus.get(),
                right: other.modulus.get(),
            });
        }
        Ok(())
    }

    pub fn complement(&self) -> Self {
        let words = self.words.iter().map(|w| !w).collect();
        Self::from_words(&self.modulus, words).expect("same shape")
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        Self::from_words(&self.modulus, words)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect();
        Self::from_words(&self.modulus, words)
    }

    /// `A + c`.
    pub fn shift(&self, c: i128) -> Self {
        let c = self.modulus.reduce(c) as i128;
        Self::from_elements(&self.modulus, self.iter().map(|x| x as i128 + c))
    }

    /// `-A`.
    pub fn negate(&self) -> Self {
        Self::from_elements(&self.modulus, self.iter().map(|x| -(x as i128)))
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}
