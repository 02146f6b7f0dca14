use motclass::{CountVal, Fp, Poly, DEFAULT_BUDGET};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use zeta::*;

fn fp(p: u64) -> Fp {
    Fp::new(p).unwrap()
}

/// Polynomials in x, y without constant term.
fn small_poly() -> impl Strategy<Value = Poly> {
    prop::collection::vec(((0u32..4, 0u32..4), -2i64..3), 1..5).prop_map(|ts| {
        let terms: Vec<(Vec<u32>, i64)> =
            ts.into_iter().filter(|((a, b), _)| a + b > 0).map(|((a, b), c)| (vec![a, b], c)).collect();
        Poly::from_terms(&["x", "y"], &terms)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn search_agrees_with_explicit_count(f in small_poly(), n in 1u32..4) {
        let q = 7;
        let c = jet_counts(&f, &BasePoint::Origin, fp(q), n, DEFAULT_BUDGET).unwrap();
        let v = c.exact[n as usize].iter().map(|x| BigRational::from_integer(x.clone())).collect();
        let g = jet_set(&JetSpec { f: f.clone(), n, base: BasePoint::Origin, q }).unwrap();
        prop_assert_eq!(CountVal::new(fp(q), v), g.count_val(fp(q), DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn jet_counts_exhaust_all_jets(f in small_poly()) {
        let q = 5u64;
        let c = jet_counts(&f, &BasePoint::Origin, fp(q), 5, DEFAULT_BUDGET).unwrap();
        for n in 1..=5u32 {
            prop_assert_eq!(c.all_jets(n), num_traits::pow(BigInt::from(q), 2 * n as usize));
        }
    }

    #[test]
    fn histogram_and_direct_sums_agree(f in small_poly(), g in small_poly()) {
        let q = 5;
        let a = sum_zeta_pullback(&f, &g, fp(q), 3, DEFAULT_BUDGET, SumMode::Direct).unwrap();
        let b = sum_zeta_pullback(&f, &g, fp(q), 3, DEFAULT_BUDGET, SumMode::Histogram).unwrap();
        prop_assert!(a.agrees(&b));
    }

    #[test]
    fn parallel_search_is_deterministic(f in small_poly()) {
        let a = jet_counts(&f, &BasePoint::Origin, fp(7), 4, DEFAULT_BUDGET).unwrap();
        let b = jet_counts(&f, &BasePoint::Origin, fp(7), 4, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(a, b);
    }
}
