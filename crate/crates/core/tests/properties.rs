use modmix_core::average;
use modmix_core::bounds;
use modmix_core::combinatorics;
use modmix_core::kernel::{self, Backend};
use modmix_core::rational::{self, int, ratio};
use modmix_core::ring;
use modmix_core::{IntValuedPoly, Modulus, Rational, ResidueSet};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn set_strategy(max_n: u64) -> impl Strategy<Value = ResidueSet> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n as usize).prop_map(move |bits| {
            let m = Modulus::new(n).unwrap();
            ResidueSet::from_elements(
                &m,
                bits.iter()
                    .enumerate()
                    .filter(|(_, &b)| b)
                    .map(|(i, _)| i as i128),
            )
        })
    })
}

fn pair_strategy(max_n: u64) -> impl Strategy<Value = (ResidueSet, ResidueSet)> {
    (2..=max_n).prop_flat_map(|n| {
        let bits = proptest::collection::vec(any::<bool>(), n as usize);
        (bits.clone(), bits).prop_map(move |(x, y)| {
            let m = Modulus::new(n).unwrap();
            let build = |bits: &[bool]| {
                ResidueSet::from_elements(
                    &m,
                    bits.iter()
                        .enumerate()
                        .filter(|(_, &b)| b)
                        .map(|(i, _)| i as i128),
                )
            };
            (build(&x), build(&y))
        })
    })
}

fn poly_strategy() -> impl Strategy<Value = IntValuedPoly> {
    (proptest::collection::vec(-6i64..=6, 1..=4), 1i64..=3).prop_map(|(coeffs, scale)| {
        let p = IntValuedPoly::from_int_coeffs(&coeffs).unwrap();
        // Rescaling the argument keeps the polynomial integer-valued.
        p.compose_scale(scale)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profile_total_is_product((a, b) in pair_strategy(200)) {
        let p = kernel::correlation_profile_with(&a, &b, Backend::BitVector).unwrap();
        let q = kernel::correlation_profile_with(&a, &b, Backend::Transform).unwrap();
        prop_assert_eq!(p.counts(), q.counts());
        prop_assert_eq!(p.total(), a.len() as u128 * b.len() as u128);
    }

    #[test]
    fn average_bounded_by_measures((a, b) in pair_strategy(90), p in poly_strategy()) {
        let r = average::polynomial_average(&a, &b, &p).unwrap();
        prop_assert!(r.average >= Rational::zero());
        prop_assert!(r.average <= a.measure().min(b.measure()));
    }

    #[test]
    fn average_is_translation_invariant((a, b) in pair_strategy(70), p in poly_strategy(), c in 0i128..100) {
        let r = average::polynomial_average(&a, &b, &p).unwrap();
        let s = average::polynomial_average(&a.shift(c), &b.shift(c), &p).unwrap();
        prop_assert_eq!(r.average, s.average);
    }

    #[test]
    fn complement_splits_the_average((a, b) in pair_strategy(70), p in poly_strategy()) {
        let r = average::polynomial_average(&a, &b, &p).unwrap();
        let s = average::polynomial_average(&a.complement(), &b, &p).unwrap();
        prop_assert_eq!(r.average + s.average, b.measure());
    }

    #[test]
    fn unit_linear_polynomials_mix_exactly((a, b) in pair_strategy(80), u in 1i64..40, c in -20i64..20) {
        let m = a.modulus().clone();
        let p = IntValuedPoly::from_int_coeffs(&[c, u]).unwrap();
        prop_assume!(ring::gcd(u as u64, m.get()) == 1);
        prop_assert!(average::is_unit_linear(&p, &m));
        let r = average::polynomial_average(&a, &b, &p).unwrap();
        prop_assert!(r.deviation.is_zero());
    }

    #[test]
    fn histogram_has_n_entries(n in 2u64..300, p in poly_strategy()) {
        let m = Modulus::new(n).unwrap();
        let h = p.image_histogram(&m);
        prop_assert_eq!(h.total(), n);
        prop_assert!(p.is_periodic_mod(&m) || !p.has_integer_coeffs());
    }

    #[test]
    fn values_mod_agree_with_exact_evaluation(n in 2u64..200, p in poly_strategy()) {
        let m = Modulus::new(n).unwrap();
        let values = p.values_mod(&m);
        for (i, v) in values.iter().enumerate().step_by(7) {
            prop_assert_eq!(*v, p.eval_mod(i as i128 + 1, &m).value());
        }
    }

    #[test]
    fn polynomial_display_round_trips(p in poly_strategy()) {
        let text = p.to_string();
        prop_assert_eq!(IntValuedPoly::parse(&text).unwrap(), p);
    }

    #[test]
    fn sumset_contains_translates((a, b) in pair_strategy(150)) {
        let s = combinatorics::sumset(&a, &b).unwrap();
        prop_assert_eq!(&s, &combinatorics::sumset(&b, &a).unwrap());
        for x in b.iter().take(5) {
            let t = a.shift(x as i128);
            prop_assert_eq!(t.intersection(&s).unwrap(), t);
        }
    }

    #[test]
    fn pair_count_is_bounded((a, b) in pair_strategy(100), p in poly_strategy()) {
        let r = combinatorics::pair_count(&a, &b, &p, None).unwrap();
        prop_assert!(r.s <= a.modulus().get() as u128 * b.len() as u128);
    }

    #[test]
    fn expsum_never_exceeds_lpf_bound(n in 2u64..400, d in 1u32..=3) {
        let m = Modulus::new(n).unwrap();
        let r = bounds::expsum_bound_check(&m, d).unwrap();
        prop_assert!(r.report.holds);
        prop_assert!(r.report.lhs > Rational::zero());
    }

    #[test]
    fn expsum_depends_only_on_gcd(n in 2u64..300, j in 1u64..300) {
        let m = Modulus::new(n).unwrap();
        prop_assume!(j % n != 0);
        let g = ring::gcd(j, n);
        prop_assert_eq!(
            bounds::expsum_exact(&m, j as i128, 2).unwrap(),
            bounds::expsum_exact(&m, g as i128, 2).unwrap()
        );
    }

    #[test]
    fn weighted_linear_holds_for_sets(a in set_strategy(60), d in 1u32..=2) {
        let f = bounds::ComplexSignal::centered_indicator(&a).unwrap();
        prop_assert!(bounds::weighted_linear_check(&f, d).unwrap().holds);
    }

    #[test]
    fn squaring_chain_matches_power(num in 0i128..50, den in 1i128..50, k in 0u32..4, bnum in 0i128..50) {
        prop_assume!(num <= den);
        let x = ratio(num, den);
        let bound = ratio(bnum, 50);
        let direct = rational::pow_two_power(&x, k) <= bound;
        prop_assert_eq!(rational::repeated_square_le(&x, k, &bound), direct);
    }

    #[test]
    fn factorization_multiplies_back(n in 2u64..u64::MAX) {
        let m = Modulus::new(n).unwrap();
        let product = m.factors().iter().fold(1u128, |acc, &(p, e)| acc * (p as u128).pow(e));
        prop_assert_eq!(product, n as u128);
        prop_assert!(m.factors().iter().all(|&(p, _)| ring::is_prime(p)));
    }

    #[test]
    fn thresholds_dominate_c_p(num in 1i128..10, eps in 1i128..10) {
        let p = IntValuedPoly::parse("n^2").unwrap();
        let mu = ratio(num, 10);
        let r = bounds::thresholds(&p, &mu, &mu, &ratio(eps, 10), &Rational::one()).unwrap();
        prop_assert!(r.threshold >= int(2));
        prop_assert!(r.quantitative_threshold >= r.c);
    }
}
