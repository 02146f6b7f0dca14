use locring::LocRat;
use motclass::{Atom, Coeff, CountVal, Fp, SymbolicClass};
use num_bigint::BigInt;
use num_rational::BigRational;
use series::closed::hadamard_closed;
use series::*;

fn fp(p: u64) -> Fp {
    Fp::new(p).unwrap()
}

fn atom(name: &str, order: u64) -> SymbolicClass {
    SymbolicClass::atom(Atom::new(name, "X0", order))
}

fn t() -> Vec<String> {
    vec!["T".into()]
}

fn geo<C: Coeff>(c: C, b: u32, m: i64, n: u32) -> ClosedSeries<C> {
    ClosedSeries::single(t(), Strand::new(c, vec![b], vec![GeomFactor::new(m, vec![n])]))
}

#[test]
fn classify_examples() {
    let one = SymbolicClass::one();
    assert_eq!(geo(one.clone(), 0, -1, 1).classify(), Class::Int);
    assert_eq!(geo(one.clone(), 0, 0, 1).classify(), Class::Ssr);
    assert_eq!(geo(one.clone(), 0, 1, 1).classify(), Class::Sr);
    let mixed = geo(one.clone(), 0, -1, 1).add(&geo(one, 0, 0, 2)).unwrap();
    assert_eq!(mixed.classify(), Class::Ssr);
}

#[test]
fn hadamard_geometric_pair() {
    let one = SymbolicClass::one();
    let a = geo(one.clone(), 0, -1, 1);
    let h = hadamard_closed(&a, &a, |x, y| x.ext_mul(y)).unwrap();
    assert_eq!(h.expand(10, BoundMode::Total), geo(one.clone(), 0, -2, 1).expand(10, BoundMode::Total));
    let z = ClosedSeries::new(t());
    assert!(hadamard_closed(&a, &z, |x, y| x.ext_mul(y)).unwrap().strands.is_empty());
}

#[test]
fn closed_hadamard_matches_refit() {
    let f = fp(13);
    let a = geo(CountVal::from_ints(f, &[2, 0]), 1, -1, 2);
    let b = geo(CountVal::from_ints(f, &[3, 0, 0]), 0, -2, 3);
    let z = CountVal::zero(f);
    let h = hadamard_closed(&a, &b, |x, y| Coeff::conv(x, y)).unwrap();
    let r = a.to_seq(&z).unwrap().hadamard(&b.to_seq(&z).unwrap(), |x, y| Coeff::conv(x, y)).unwrap();
    assert!(h.to_seq(&z).unwrap().same(&r));
}

#[test]
fn expansion_matches_seq() {
    let one = SymbolicClass::one();
    let s = geo(atom("a", 2), 2, -1, 3).add(&geo(one.clone(), 1, -2, 2)).unwrap();
    let e = s.expand(14, BoundMode::Total);
    let q = s.to_seq(&one.zero_like()).unwrap();
    for n in 0..=14u32 {
        assert_eq!(e.coeff_or(&[n], &one), q.coeff(n as usize), "n = {n}");
    }
}

#[test]
fn support_restriction() {
    let one = SymbolicClass::one();
    // L^-1 U / (1 - L^-1 U) restricted to even exponents
    let s = ClosedSeries::single(
        t(),
        Strand::new(one.clone(), vec![0], vec![GeomFactor::new(-1, vec![1])])
            .with_support(Support { period: vec![2], residue: vec![0] }),
    );
    let e = s.expand(9, BoundMode::Total);
    let q = s.to_seq(&one.zero_like()).unwrap();
    for n in 0..=9u32 {
        let want = if n > 0 && n % 2 == 0 { one.scale(&LocRat::l_pow(-(n as i64))) } else { one.zero_like() };
        assert_eq!(e.coeff_or(&[n], &one), want);
        assert_eq!(q.coeff(n as usize), want);
    }
}

#[test]
fn limit_examples() {
    let one = SymbolicClass::one();
    let z = one.zero_like();
    assert_eq!(geo(one.clone(), 0, -1, 1).lim_infty(&z).unwrap(), one.neg());
    let c = atom("c", 3);
    let constant = ClosedSeries::single(t(), Strand::new(c.clone(), vec![0], vec![]));
    assert_eq!(constant.lim_infty(&z).unwrap(), c);
    let poly = ClosedSeries::single(t(), Strand::new(one.clone(), vec![1], vec![]));
    assert!(matches!(poly.lim_infty(&z), Err(SeriesError::NotLimitNormal(_))));
    // two factors: (-1)^2
    let two = ClosedSeries::single(
        vec!["T".into(), "U".into()],
        Strand::new(c.clone(), vec![0, 0], vec![GeomFactor::new(-1, vec![1, 0]), GeomFactor::new(-2, vec![0, 1])]),
    );
    assert_eq!(two.lim_infty(&z).unwrap(), c);
    // degree-deficient strand
    let low = ClosedSeries::single(t(), Strand::new(one.clone(), vec![0], vec![])).add(&geo(one.neg(), 0, 0, 1)).unwrap();
    assert_eq!(low.lim_infty(&z).unwrap(), one.add(&one));
}

#[test]
fn anti_compatibility_symbolic() {
    let z = SymbolicClass::zero();
    for (oa, ob) in [(1, 1), (2, 2), (2, 3), (3, 3)] {
        let (ca, cb) = (atom("a", oa), atom("b", ob));
        let a = geo(ca.clone(), 0, -1, oa as u32);
        let b = geo(cb.clone(), 0, -2, 1);
        let (la, lb) = (a.lim_infty(&z).unwrap(), b.lim_infty(&z).unwrap());
        let hx = hadamard_closed(&a, &b, |x, y| x.ext_mul(y)).unwrap();
        assert_eq!(hx.lim_infty(&z).unwrap(), la.ext_mul(&lb).neg());
        let hc = hadamard_closed(&a, &b, |x, y| x.conv(y)).unwrap();
        assert_eq!(hc.lim_infty(&z).unwrap(), la.conv(&lb).neg());
        // the same through an exact refit over Q(L)
        let r = a.to_seq(&z).unwrap().hadamard(&b.to_seq(&z).unwrap(), |x, y| x.conv(y)).unwrap();
        assert_eq!(r.lim().unwrap(), la.conv(&lb).neg());
    }
}

#[test]
fn strand_fit_examples() {
    let f = fp(5);
    let z = CountVal::zero(f);
    // q^-n
    let vals: Vec<CountVal> =
        (0..12).map(|n| CountVal::constant(f, BigRational::new(BigInt::from(1), BigInt::from(5u64.pow(n))))).collect();
    let fit = strand_fit(&z, "T", &vals, None, 4, 0, 2).unwrap();
    assert_eq!(fit.period, 1);
    assert_eq!(fit.series.strands.len(), 2);
    assert_eq!(fit.series.expand(11, BoundMode::Total).coeff_or(&[7], &z), vals[7]);
    // x^2 jet counts: c_{2k} = 2 q^-k (k >= 1), odd terms vanish
    let vals: Vec<CountVal> = (0..13)
        .map(|n| {
            if n > 0 && n % 2 == 0 {
                CountVal::from_ints(f, &[2, 0]).scale(&LocRat::l_pow(-(n as i64) / 2))
            } else {
                z.clone()
            }
        })
        .collect();
    let fit = strand_fit(&z, "T", &vals, None, 4, 0, 2).unwrap();
    assert_eq!(fit.period, 2);
    assert_eq!(fit.classify(), Class::Int);
    assert_eq!(fit.series.strands.len(), 1);
    // noise
    let noise: Vec<CountVal> = [3, 1, 4, 1, 5, 9, 2, 6, 5, 3, 5, 8].iter().map(|&x| CountVal::from_ints(f, &[x])).collect();
    assert!(matches!(strand_fit(&z, "T", &noise, None, 3, 0, 2), Err(SeriesError::FitFailed(_))));
}

#[test]
fn refit_recovers_library_strands() {
    let f = fp(13);
    let z = CountVal::zero(f);
    let s = geo(CountVal::from_ints(f, &[3, 0, 0]), 0, -1, 3);
    let vals = s.to_seq(&z).unwrap().coeffs(20);
    let fit = strand_fit(&z, "T", &vals, None, 6, 0, 2).unwrap();
    assert_eq!(fit.series, s);
}
