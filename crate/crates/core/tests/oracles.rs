//! Fast paths checked against direct enumeration from the definitions.

use modmix_core::average::{self, max_deviation_exhaustive};
use modmix_core::bounds::{self, ComplexSignal, NormOptions};
use modmix_core::combinatorics::{self, interval_witness, pair_count_naive};
use modmix_core::kernel::{self, Backend};
use modmix_core::rational::{int, ratio};
use modmix_core::{IntValuedPoly, Modulus, Rational, ResidueSet};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn modulus(n: u64) -> Modulus {
    Modulus::new(n).unwrap()
}

fn poly(expr: &str) -> IntValuedPoly {
    IntValuedPoly::parse(expr).unwrap()
}

/// `(1/N) Σ_{n=1}^{N} μ(A ∩ (B + P(n)))` straight from the definition.
fn average_by_definition(a: &ResidueSet, b: &ResidueSet, p: &IntValuedPoly) -> Rational {
    let n = a.modulus().get() as i128;
    let mut hits = 0i128;
    for m in 1..=n {
        let shift = p.eval(&BigInt::from(m));
        let shift = (shift % BigInt::from(n)).to_i128().unwrap();
        hits += a.iter().filter(|&x| b.contains(x as i128 - shift)).count() as i128;
    }
    ratio(hits, n * n)
}

#[test]
fn averages_match_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in [2u64, 5, 12, 15, 33, 64, 65, 90] {
        let m = modulus(n);
        for expr in ["n^2", "n^3 - 2*n", "(n^2+n)/2", "5*n", "-n^2 + 3"] {
            let p = poly(expr);
            let a = ResidueSet::random(&m, &mut rng);
            let b = ResidueSet::random(&m, &mut rng);
            let expected = average_by_definition(&a, &b, &p);
            for backend in [Backend::BitVector, Backend::Transform] {
                let r = average::polynomial_average_with(&a, &b, &p, backend).unwrap();
                assert_eq!(r.average, expected, "N={n} P={expr} {backend:?}");
            }
        }
    }
}

#[test]
fn exhaustive_search_matches_all_subsets() {
    for n in [3u64, 5, 6, 8, 10, 12] {
        let m = modulus(n);
        for expr in ["n^2", "n^3", "2*n"] {
            let p = poly(expr);
            let mut best = Rational::zero();
            for mask in 0..1u64 << n {
                let a = ResidueSet::from_mask(&m, mask).unwrap();
                let mu = a.measure();
                let dev = (average_by_definition(&a, &a, &p) - &mu * &mu).abs();
                if dev > best {
                    best = dev;
                }
            }
            for symmetry in [false, true] {
                let r = max_deviation_exhaustive(&m, &p, symmetry, 24).unwrap();
                assert_eq!(r.max_abs(), best, "N={n} P={expr} symmetry={symmetry}");
            }
        }
    }
}

#[test]
fn expsum_matches_tuple_count() {
    for n in 2u64..=40 {
        let m = modulus(n);
        for j in 1..n {
            for d in 1..=2u32 {
                let mut hits = 0i128;
                if d == 1 {
                    hits = (1..=n).filter(|h| j * h % n == 0).count() as i128;
                } else {
                    for h1 in 1..=n {
                        hits += (1..=n).filter(|h2| j * h1 % n * h2 % n == 0).count() as i128;
                    }
                }
                let expected = ratio(hits, (n as i128).pow(d));
                assert_eq!(bounds::expsum_exact(&m, j as i128, d).unwrap(), expected);
            }
        }
    }
}

#[test]
fn expsum_matches_complex_exponentials() {
    for n in [6u64, 9, 10, 25, 30] {
        let m = modulus(n);
        for j in 1..n {
            // (1/N^2) Σ_h (1/N) Σ_x e(j x h / N), d = 1.
            let mut total = Complex64::new(0.0, 0.0);
            for h in 1..=n {
                for x in 1..=n {
                    let theta = 2.0 * std::f64::consts::PI * (j * x * h % n) as f64 / n as f64;
                    total += Complex64::new(theta.cos(), theta.sin());
                }
            }
            total /= (n * n) as f64;
            let exact = bounds::expsum_exact(&m, j as i128, 1).unwrap().to_f64().unwrap();
            assert!((total.re - exact).abs() < 1e-9 && total.im.abs() < 1e-9);
        }
    }
}

#[test]
fn weighted_linear_values_agree_with_spectrum() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for n in [9u64, 15, 21, 35] {
        let m = modulus(n);
        for d in 1..=2u32 {
            let f = ComplexSignal::random_signs(&m, &mut rng);
            let r = bounds::weighted_linear_check(&f, d).unwrap();
            let spectrum = f.approx_spectrum();
            let mut lhs = 0.0;
            for (j, c) in spectrum.iter().enumerate() {
                let weight = if j == 0 {
                    1.0
                } else {
                    bounds::expsum_exact(&m, j as i128, d).unwrap().to_f64().unwrap()
                };
                lhs += c.norm_sqr() * weight;
            }
            assert!((r.lhs.to_f64().unwrap() - lhs).abs() < 1e-9, "N={n} d={d}");
            assert!(r.holds);
        }
    }
}

#[test]
fn norm_squared_matches_float_average() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let m = modulus(35);
    let p = poly("n^2");
    let a = ResidueSet::random(&m, &mut rng);
    let f = ComplexSignal::centered_indicator(&a).unwrap();
    let r = bounds::average_norm_check(&f, &p, NormOptions::default()).unwrap();
    let values = f.approx_values();
    let image = p.values_mod(&m);
    let mut energy = 0.0;
    for x in 0..35usize {
        let g: Complex64 = image.iter().map(|&v| values[(x + v as usize) % 35]).sum::<Complex64>() / 35.0;
        energy += g.norm_sqr();
    }
    assert!((r.lhs_squared.to_f64().unwrap() - energy / 35.0).abs() < 1e-12);
}

#[test]
fn differencing_chain_holds_for_cubic_signs() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let m = modulus(77);
    let p = poly("n^3");
    for _ in 0..3 {
        let mut values: Vec<i64> = (0..77).map(|_| if rng.random::<bool>() { 1 } else { -1 }).collect();
        // Force mean zero by pairing up the last entry with the rest.
        let sum: i64 = values[..76].iter().sum();
        values[76] = 0;
        let f = if sum == 0 {
            ComplexSignal::real(&m, values, 1).unwrap()
        } else {
            let mut v: Vec<i64> = values.iter().map(|x| x * 76).collect();
            v.iter_mut().take(76).for_each(|x| *x -= sum);
            let denom = v.iter().map(|x| x.unsigned_abs()).max().unwrap();
            ComplexSignal::real(&m, v, denom).unwrap()
        };
        let r = bounds::average_norm_check(&f, &p, NormOptions::default()).unwrap();
        assert_eq!(r.vdc.len(), 2);
        for step in &r.vdc {
            let report = step.report.as_ref().expect("within budget");
            assert!(report.holds, "step {}", step.d);
        }
        let first = r.vdc[0].report.as_ref().unwrap();
        assert_eq!(first.lhs, first.rhs);
    }
}

#[test]
fn pair_counts_match_loop() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in [7u64, 64, 100, 512] {
        let m = modulus(n);
        for expr in ["n^2", "n^3 + n", "(n^2-n)/2"] {
            let p = poly(expr);
            let a = ResidueSet::random(&m, &mut rng);
            let b = ResidueSet::random(&m, &mut rng);
            let r = combinatorics::pair_count(&a, &b, &p, None).unwrap();
            assert_eq!(r.s, pair_count_naive(&a, &b, &p).unwrap());
            // s / N^2 is the polynomial average.
            let avg = average::polynomial_average(&a, &b, &p).unwrap().average;
            assert_eq!(ratio(r.s as i128, (n * n) as i128), avg);
        }
    }
}

#[test]
fn sumsets_match_pairwise_sums() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for n in [5u64, 63, 64, 130] {
        let m = modulus(n);
        let a = ResidueSet::random_with_density(&m, 1, 8, &mut rng).unwrap();
        let b = ResidueSet::random_with_density(&m, 1, 5, &mut rng).unwrap();
        let expected = ResidueSet::from_elements(
            &m,
            a.iter()
                .flat_map(|x| b.iter().map(move |y| x as i128 + y as i128)),
        );
        assert_eq!(combinatorics::sumset(&a, &b).unwrap(), expected);
    }
}

#[test]
fn solution_counts_match_cubic_loop() {
    for p in [5u64, 7, 11, 13] {
        let fs = [poly("n^2"), poly("n^3 + 1"), poly("2*n^2 - n")];
        let vals: Vec<Vec<u64>> = fs
            .iter()
            .map(|f| (1..=p).map(|x| f.eval_mod(x as i128, &modulus(p)).value()).collect())
            .collect();
        for c in 0..p {
            let mut count = 0u64;
            for x in &vals[0] {
                for y in &vals[1] {
                    for z in &vals[2] {
                        count += u64::from((x + y + z) % p == c);
                    }
                }
            }
            let r = combinatorics::solution_count_three([&fs[0], &fs[1], &fs[2]], c as i128, p).unwrap();
            assert_eq!(r.count, count, "p={p} c={c}");
        }
    }
}

#[test]
fn interval_witness_matches_direct_sum() {
    for n in [10u64, 37, 100] {
        let m = modulus(n);
        let w = interval_witness(&m).unwrap();
        let a = &w.a;
        let mu = a.measure();
        let mut total = Rational::zero();
        for h in 1..=n {
            let meet = a.intersection(&a.shift(h as i128)).unwrap().measure();
            total += (meet - &mu * &mu).abs();
        }
        assert_eq!(w.observed, total / int(n as i128));
    }
}

#[test]
fn pkgoal_agrees_with_direct_average() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let sq = poly("n^2");
    for (p, k) in [(3u64, 2u32), (7, 2), (3, 3), (11, 1)] {
        let m = modulus(p.pow(k));
        for _ in 0..20 {
            let a = ResidueSet::random(&m, &mut rng);
            let r = average::pkgoal_check(&a, p, k, false).unwrap();
            assert_eq!(r.lhs, average_by_definition(&a, &a, &sq));
            assert!(r.equal);
        }
    }
}

#[test]
fn correlation_counts_match_definition() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let m = modulus(257);
    let a = ResidueSet::random(&m, &mut rng);
    let b = ResidueSet::random(&m, &mut rng);
    let profile = kernel::correlation_profile(&a, &b).unwrap();
    for h in 0..257u64 {
        let direct = a.intersection(&b.shift(h as i128)).unwrap().len() as u64;
        assert_eq!(profile.get(h), direct);
    }
}
