//! Number-theoretic transform over `Z/998244353Z`.
//!
//! Used for exact counting convolutions: as long as every true coefficient of
//! the product is below the prime, the result is exact.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::ring::pow_mod;

pub const PRIME: u64 = 998_244_353;
const GENERATOR: u64 = 3;
/// `PRIME - 1 = 119 * 2^23`.
pub const MAX_LOG_LEN: u32 = 23;

// Both operands are below 2^30, so the product fits in a u64.
#[inline]
fn mul_mod(a: u64, b: u64) -> u64 {
    a * b % PRIME
}

fn transform(a: &mut [u64], invert: bool) {
    let n = a.len();
    let mut j = 0;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let mut w_len = pow_mod(GENERATOR, (PRIME - 1) / len as u64, PRIME);
        if invert {
            w_len = pow_mod(w_len, PRIME - 2, PRIME);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut w = 1u64;
        for _ in 0..half {
            twiddles.push(w);
            w = mul_mod(w, w_len);
        }
        for chunk in a.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((u, v), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let x = *u;
                let y = mul_mod(*v, w);
                *u = if x + y >= PRIME { x + y - PRIME } else { x + y };
                *v = if x >= y { x - y } else { x + PRIME - y };
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = pow_mod(n as u64, PRIME - 2, PRIME);
        for x in a.iter_mut() {
            *x = mul_mod(*x, n_inv);
        }
    }
}

/// Linear convolution of two sequences with entries reduced mod [`PRIME`].
pub fn convolve(a: &[u64], b: &[u64]) -> Result<Vec<u64>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let out_len = a.len() + b.len() - 1;
    let size = out_len.next_power_of_two();
    if size > 1 << MAX_LOG_LEN {
        return Err(Error::TooLarge {
            n: out_len as u64,
            max: 1 << MAX_LOG_LEN,
        });
    }
    let mut fa: Vec<u64> = a.iter().map(|&x| x % PRIME).collect();
    let mut fb: Vec<u64> = b.iter().map(|&x| x % PRIME).collect();
    fa.resize(size, 0);
    fb.resize(size, 0);
    transform(&mut fa, false);
    transform(&mut fb, false);
    for (x, y) in fa.iter_mut().zip(&fb) {
        *x = mul_mod(*x, *y);
    }
    transform(&mut fa, true);
    fa.truncate(out_len);
    Ok(fa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn naive(a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        out
    }

    #[test]
    fn matches_schoolbook() {
        let a = [1, 2, 3, 0, 5];
        let b = [7, 0, 1];
        assert_eq!(convolve(&a, &b).unwrap(), naive(&a, &b));
        let a: Vec<u64> = (0..300).map(|i| (i * i) % 17).collect();
        let b: Vec<u64> = (0..211).map(|i| (i * 7 + 3) % 11).collect();
        assert_eq!(convolve(&a, &b).unwrap(), naive(&a, &b));
    }

    #[test]
    fn empty_inputs() {
        assert!(convolve(&[], &[1]).unwrap().is_empty());
    }
}
