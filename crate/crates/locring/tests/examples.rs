use locring::{LaurentPoly, LocError, LocRat, RatFunc};
use num_bigint::BigInt;
use num_rational::BigRational;

fn r(s: &str) -> LocRat {
    s.parse().unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn add_cases() {
    assert!((r("1 / (1-L)") + r("-1 / (1-L)")).is_zero());
    assert_eq!(r("L") + r("L"), r("2*L"));
    let s = r("1 / (1-L)") + r("1 / (1-L^2)");
    assert_eq!(s, r("(2 + L) / (1-L^2)"));
    assert_eq!(s, LocRat::new(&(LaurentPoly::one() + "L".parse().unwrap()) + &LaurentPoly::one(), vec![2]));
}

#[test]
fn mul_cases() {
    assert_eq!(LocRat::l_minus_one() * LocRat::inv_one_minus(1), LocRat::int(-1));
    assert_eq!(LocRat::l_pow(-1) * LocRat::l_pow(1), LocRat::one());
    let x = r("(1 - L^2) / (1-L)");
    assert!(x.den().is_empty());
    assert_eq!(x, r("1 + L"));
}

#[test]
fn eval_cases() {
    assert_eq!(r("(-1 + L) / (1-L^2)").eval_at_int(5).unwrap(), q(-1, 6));
    assert_eq!(r("L^-1").eval_at_int(5).unwrap(), q(1, 5));
    assert!(matches!(
        r("1 / (1-L)").eval_at_int(1),
        Err(LocError::DenominatorVanishes { n: 1, .. })
    ));
}

#[test]
fn render_and_parse() {
    let x = LocRat::new("L^-1 + 1 + 2*L".parse().unwrap(), vec![2, 1]);
    assert_eq!(x.to_string(), "(L^-1 + 1 + 2*L) / (1-L)(1-L^2)");
    assert_eq!(x.to_string().parse::<LocRat>().unwrap(), x);
    assert_eq!(LocRat::zero().to_string(), "0");
    assert_eq!(r("-3*L^2 / (1-L^3)").to_string(), "-3*L^2 / (1-L^3)");
    assert!(matches!("1 + / (1-L)".parse::<LocRat>(), Err(LocError::Parse { pos: 4, .. })));
}

#[test]
fn inverses() {
    for m in [-5i64, -1, 1, 4] {
        let x = LocRat::inv_one_minus_signed(m).unwrap();
        let f = LocRat::one() - LocRat::l_pow(m);
        assert_eq!(&x * &f, LocRat::one());
    }
    let u = r("1 + L - L^3 - L^4");
    let inv = u.try_inverse().unwrap();
    assert_eq!(&inv * &u, LocRat::one());
    assert!(r("2").try_inverse().is_err());
    assert!(r("1 + L + 2*L^2").try_inverse().is_err());
    let v = r("-3*L^-2 / (1-L)(1-L^2)");
    assert!(v.try_inverse().is_err());
    let w = r("-L^-2 + L^-1 / (1-L^6)");
    assert_eq!(&w.try_inverse().unwrap() * &w, LocRat::one());
}

#[test]
fn ratfunc_roundtrip() {
    let x = r("(L^-1 + 3 - 2*L^4) / (1-L)(1-L^3)");
    let f = x.to_ratfunc();
    assert_eq!(LocRat::from_ratfunc(&f).unwrap(), x);
    let half = RatFunc::constant(q(1, 2));
    assert!(LocRat::from_ratfunc(&half).is_err());
    let y = &f * &RatFunc::from_int(2);
    assert_eq!(LocRat::from_ratfunc(&(&y / &RatFunc::from_int(2))).unwrap(), x);
}
