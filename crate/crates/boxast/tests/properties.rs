use boxast::*;
use motclass::{Coeff, CountVal, Fp};
use proptest::prelude::*;
use series::*;

/// Sums of `c T^b L^m T^p / (1 - L^m T^p)` with `m < 0` and constant
/// (trivial action) coefficients.
fn integrable(f: Fp) -> impl Strategy<Value = Seq<CountVal>> {
    prop::collection::vec((-4i64..=4, 0usize..3, -2i64..=-1, 1usize..3), 1..3).prop_map(move |parts| {
        let z = CountVal::zero(f);
        parts
            .into_iter()
            .fold(Seq::zero(&z), |acc, (c, b, m, p)| acc.add(&Seq::geometric(&CountVal::from_ints(f, &[c]), b, m, p)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn one_variable_agreement(a in integrable(Fp::new(7).unwrap()), b in integrable(Fp::new(7).unwrap())) {
        let uni = boxast_uni(&a, &b, "T", "U").unwrap().expand(7, BoundMode::Total);
        let multi = boxast_multi(&from_seq(&a, "T"), &from_seq(&b, "U"), PhiOptions::default())
            .unwrap()
            .expand(7, BoundMode::Total);
        prop_assert!(uni.agrees(&multi));
    }

    #[test]
    fn bilinear_in_first_operand(
        a in integrable(Fp::new(5).unwrap()),
        a2 in integrable(Fp::new(5).unwrap()),
        b in integrable(Fp::new(5).unwrap()),
    ) {
        let lhs = boxast_uni(&a.add(&a2), &b, "T", "U").unwrap().expand(6, BoundMode::Total);
        let r1 = boxast_uni(&a, &b, "T", "U").unwrap().expand(6, BoundMode::Total);
        let r2 = boxast_uni(&a2, &b, "T", "U").unwrap().expand(6, BoundMode::Total);
        prop_assert!(lhs.agrees(&r1.add(&r2).unwrap()));
    }

    #[test]
    fn limit_commutation(a in integrable(Fp::new(7).unwrap()), b in integrable(Fp::new(7).unwrap())) {
        let c = boxast_uni(&a, &b, "T", "U").unwrap().diagonal_seq().unwrap();
        if let (Ok(la), Ok(lb)) = (a.lim(), b.lim()) {
            prop_assert_eq!(c.lim().unwrap(), Coeff::conv(&la, &lb));
        }
    }
}
