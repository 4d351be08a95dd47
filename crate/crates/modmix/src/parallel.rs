//! Rayon drivers for the loops that split cleanly. Results never depend on
//! the worker count: maxima merge with deterministic tie-breaks and sampled
//! work is cut into fixed chunks, each with its own ChaCha stream.

use modmix_core::average::{self, Best, DeviationSearch, Necklaces};
use modmix_core::kernel::{self, Backend, CorrelationProfile};
use modmix_core::rational::ratio;
use modmix_core::{IntValuedPoly, Modulus, ResidueSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// Samples per RNG stream.
const SAMPLE_CHUNK: u64 = 1024;
/// Shifts per bit-vector task.
const SHIFT_CHUNK: usize = 4096;

/// Runs `f` on a pool with `workers` threads (at least one).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> anyhow::Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()?;
    Ok(pool.install(f))
}

pub fn exhaustive_deviation(
    modulus: &Modulus,
    p: &IntValuedPoly,
    symmetry: bool,
    bound: u64,
) -> modmix_core::Result<DeviationSearch> {
    let scorer = average::exhaustive_scorer(modulus, p, bound)?;
    let score = |mask: u64| (Best::new(mask, scorer.score(mask)), 1u64);
    let merge = |(a, x): (Best, u64), (b, y): (Best, u64)| (a.merge(b), x + y);
    let (best, candidates) = if symmetry {
        Necklaces::new(scorer.n())
            .par_bridge()
            .map(score)
            .reduce(|| (Best::new(0, 0), 0), merge)
    } else {
        (0..=scorer.full_mask())
            .into_par_iter()
            .map(score)
            .reduce(|| (Best::new(0, 0), 0), merge)
    };
    average::finish_search(modulus, best, candidates, symmetry)
}

/// Scores `samples` uniform random subsets; sample `i` comes from stream
/// `i / 1024` of a ChaCha generator seeded with `seed`.
pub fn sampled_deviation(
    modulus: &Modulus,
    p: &IntValuedPoly,
    samples: u64,
    seed: u64,
) -> modmix_core::Result<DeviationSearch> {
    let hist = p.image_histogram(modulus);
    let chunks = samples.div_ceil(SAMPLE_CHUNK);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| -> modmix_core::Result<Option<(u64, ResidueSet, i128)>> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let mut best: Option<(u64, ResidueSet, i128)> = None;
            let end = ((c + 1) * SAMPLE_CHUNK).min(samples);
            for i in c * SAMPLE_CHUNK..end {
                let a = ResidueSet::random(modulus, &mut rng);
                let num = average::deviation_numerator(&a, &hist)?;
                if best.as_ref().is_none_or(|(_, _, b)| num.abs() > b.abs()) {
                    best = Some((i, a, num));
                }
            }
            Ok(best)
        })
        .try_reduce(
            || None,
            |x, y| {
                Ok(match (x, y) {
                    (None, v) | (v, None) => v,
                    (Some(x), Some(y)) => {
                        let y_wins = y.2.abs() > x.2.abs() || (y.2.abs() == x.2.abs() && y.0 < x.0);
                        Some(if y_wins { y } else { x })
                    }
                })
            },
        )?;
    let (witness, num) = best
        .map(|(_, a, n)| (a, n))
        .unwrap_or_else(|| (ResidueSet::empty(modulus), 0));
    let n = modulus.get() as i128;
    Ok(DeviationSearch {
        witness,
        deviation: ratio(num, n * n),
        candidates: samples,
        exhaustive: false,
        symmetry: false,
    })
}

/// The correlation profile, with the bit-vector backend split over shift ranges.
pub fn correlation_profile(
    a: &ResidueSet,
    b: &ResidueSet,
    backend: Backend,
) -> modmix_core::Result<CorrelationProfile> {
    if backend != Backend::BitVector {
        return kernel::correlation_profile_with(a, b, backend);
    }
    let n = a.modulus().len();
    let pieces: Vec<Vec<u64>> = (0..n.div_ceil(SHIFT_CHUNK))
        .into_par_iter()
        .map(|i| kernel::correlation_range(a, b, i * SHIFT_CHUNK..((i + 1) * SHIFT_CHUNK).min(n)))
        .collect::<modmix_core::Result<_>>()?;
    CorrelationProfile::from_counts(a.modulus(), pieces.concat())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_matches_serial() {
        let m = Modulus::new(13).unwrap();
        let p = IntValuedPoly::parse("n^3").unwrap();
        for symmetry in [false, true] {
            let serial = average::max_deviation_exhaustive(&m, &p, symmetry, 24).unwrap();
            let par = with_workers(3, || exhaustive_deviation(&m, &p, symmetry, 24))
                .unwrap()
                .unwrap();
            assert_eq!(serial, par);
        }
    }

    #[test]
    fn sampling_ignores_worker_count() {
        let m = Modulus::new(40).unwrap();
        let p = IntValuedPoly::parse("n^2").unwrap();
        let one = with_workers(1, || sampled_deviation(&m, &p, 3000, 7)).unwrap().unwrap();
        let four = with_workers(4, || sampled_deviation(&m, &p, 3000, 7)).unwrap().unwrap();
        assert_eq!(one, four);
    }

    #[test]
    fn split_profile_matches() {
        let m = Modulus::new(9000).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = ResidueSet::random(&m, &mut rng);
        let b = ResidueSet::random(&m, &mut rng);
        let whole = kernel::correlation_profile_with(&a, &b, Backend::Transform).unwrap();
        let split = correlation_profile(&a, &b, Backend::BitVector).unwrap();
        assert_eq!(whole, split);
    }
}
