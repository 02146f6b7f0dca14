use locring::LocRat;
use motclass::{bind, gcd, parse_poly, Coeff, CountVal, Fp, Poly, SymbolicClass, DEFAULT_BUDGET};
use num_bigint::BigInt;
use num_rational::BigRational;
use series::BoundMode;
use zeta::*;

fn fp(p: u64) -> Fp {
    Fp::new(p).unwrap()
}

fn poly(s: &str) -> Poly {
    parse_poly(s).unwrap()
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

#[test]
fn histogram_pairing_matches_direct_search() {
    for (f, g, q) in [("x", "y", 7), ("x^2", "y^2", 5), ("x^2", "y^3", 7), ("x^3", "y^3", 7), ("x*y", "z^2", 5)] {
        let d = sum_zeta_pullback(&poly(f), &poly(g), fp(q), 5, DEFAULT_BUDGET, SumMode::Direct).unwrap();
        let h = sum_zeta_pullback(&poly(f), &poly(g), fp(q), 5, DEFAULT_BUDGET, SumMode::Histogram).unwrap();
        assert!(d.agrees(&h), "{f} + {g}, q = {q}");
    }
}

#[test]
fn sum_of_coordinates_is_smooth() {
    // x + y: one linear condition per order, so [X_n] = L^n
    let f = fp(7);
    let s = sum_zeta_pullback(&poly("x"), &poly("y"), f, 6, DEFAULT_BUDGET, SumMode::Direct).unwrap();
    for n in 1..=6u32 {
        let want = CountVal::constant(f, BigRational::new(1.into(), num_traits::pow(BigInt::from(7), n as usize)));
        assert_eq!(s.coeff_or(&[n], &CountVal::zero(f)), want, "n = {n}");
    }
}

#[test]
fn shared_variables_are_renamed_apart() {
    let f = fp(5);
    let a = sum_zeta_pullback(&poly("x^2"), &poly("x^2"), f, 4, DEFAULT_BUDGET, SumMode::Direct).unwrap();
    let b = sum_zeta_pullback(&poly("x^2"), &poly("y^2"), f, 4, DEFAULT_BUDGET, SumMode::Direct).unwrap();
    assert!(a.agrees(&b));
}

#[test]
fn split_adds_up() {
    let f = fp(13);
    for n in 1..=4 {
        let s = sum_split(&poly("x^2"), &poly("y^3"), f, n, DEFAULT_BUDGET).unwrap();
        assert_eq!(s.a1.add(&s.a2).add(&s.a3), s.total, "n = {n}");
    }
    // x + y at n = 1: lead coefficients (u, c - u) with u != 0, c
    let s = sum_split(&poly("x"), &poly("y"), fp(7), 1, DEFAULT_BUDGET).unwrap();
    assert_eq!(s.a1, CountVal::constant(fp(7), rat(5, 49)));
    assert_eq!(s.a2, CountVal::constant(fp(7), rat(2, 49)));
    assert!(s.a3.is_zero());
}

#[test]
fn multizeta_matches_definition() {
    let q = 5;
    for family in [vec!["x", "y"], vec!["x^2", "y"], vec!["x", "y^2"], vec!["x^2", "y*z"]] {
        let fam: Vec<Poly> = family.iter().map(|s| poly(s)).collect();
        let t = multizeta_trunc(&fam, fp(q), 5, DEFAULT_BUDGET).unwrap();
        let zero = CountVal::zero(fp(q));
        let d: usize = fam.iter().map(|f| f.nvars()).sum();
        for n in [[1, 2], [1, 3], [2, 3], [1, 4]].into_iter().filter(|n| d * (n[0] + n[1]) as usize <= 10) {
            let c = t.coeff_or(&n, &zero);
            assert_eq!(c, multizeta_direct(&fam, &n, fp(q), DEFAULT_BUDGET).unwrap(), "{family:?} at {n:?}");
        }
    }
}

#[test]
fn multizeta_for_one_function_is_the_zeta_function() {
    let f = fp(7);
    let a = multizeta_trunc(&[poly("x^2 + y^3")], f, 6, DEFAULT_BUDGET).unwrap();
    let b = zeta_trunc(&poly("x^2 + y^3"), &BasePoint::Origin, f, 6, DEFAULT_BUDGET).unwrap();
    for n in 1..=6u32 {
        assert_eq!(a.coeff_or(&[n], &CountVal::zero(f)), b.coeff_or(&[n], &CountVal::zero(f)));
    }
}

#[test]
fn multizeta_is_empty_without_leading_solutions() {
    // x^2 has no jets of odd order
    let f = fp(5);
    let t = multizeta_trunc(&[poly("x^2"), poly("y")], f, 6, DEFAULT_BUDGET).unwrap();
    for (n, c) in t.iter() {
        if n[0] % 2 == 1 {
            assert!(c.is_zero(), "{n:?}");
        }
    }
}

#[test]
fn multizeta_of_coordinates() {
    // [D_{n,m}(x, y)] L^{-(n+m)2} = L^{-n} L^{-m}
    let f = fp(5);
    let t = multizeta_trunc(&[poly("x"), poly("y")], f, 7, DEFAULT_BUDGET).unwrap();
    for (n, c) in t.iter() {
        let e = (n[0] + n[1]) as usize;
        let want = CountVal::constant(f, BigRational::new(1.into(), num_traits::pow(BigInt::from(5), e)));
        assert_eq!(*c, want, "{n:?}");
    }
}

#[test]
fn closed_zeta_for_monomials() {
    for a in 1..=4u64 {
        let z = zeta_closed(&poly(&format!("x^{a}"))).unwrap();
        let d = ResolutionData::single(&if a == 1 { "1".to_string() } else { format!("mu_{a}") }, a, a as u32, 1);
        assert_eq!(z, dl_eval(&d, None).unwrap(), "a = {a}");
        assert_eq!(nearby_cycles(&z, &SymbolicClass::zero()).unwrap(), mu_atom(a));
    }
    assert_eq!(nearby_cycles(&zeta_closed(&poly("x")).unwrap(), &SymbolicClass::zero()).unwrap(), SymbolicClass::one());
    assert!(matches!(zeta_closed(&poly("x^2 + y")), Err(ZetaError::Unsupported(_))));
}

#[test]
fn single_stratum_matches_jet_counts() {
    let q = 13;
    let f = fp(q);
    for a in 1..=4u64 {
        let atom = if a == 1 { "1".to_string() } else { format!("mu_{a}") };
        let d = ResolutionData::single(&atom, a, a as u32, 1);
        let closed = bind_closed(&dl_eval(&d, None).unwrap(), &d.binding().unwrap(), f, DEFAULT_BUDGET).unwrap();
        let jets = zeta_trunc(&poly(&format!("x^{a}")), &BasePoint::Origin, f, 8, DEFAULT_BUDGET).unwrap();
        assert!(closed.expand(8, BoundMode::Total).agrees(&jets), "a = {a}");
        let s = nearby_cycles(&closed, &CountVal::zero(f)).unwrap();
        let g = gcd(a, q - 1);
        assert_eq!(*s.count(), BigRational::from_integer(BigInt::from(g)), "a = {a}");
    }
}

#[test]
fn fitted_zeta_has_the_monomial_closed_form() {
    let f = fp(13);
    let z = CountVal::zero(f);
    for a in 1..=4u32 {
        let t = zeta_trunc(&poly(&format!("x^{a}")), &BasePoint::Origin, f, 4 * a + 12, DEFAULT_BUDGET).unwrap();
        let c = zeta_fit(&t, &z, 4, 1).unwrap();
        assert_eq!(c.classify(), series::Class::Int);
        let want = bind(&mu_atom(a as u64), &mu_binding(&[a as u64]), f, DEFAULT_BUDGET).unwrap();
        assert_eq!(nearby_cycles(&c, &z).unwrap(), want, "a = {a}");
    }
}

#[test]
fn nearby_cycles_need_limit_normal_input() {
    let one = SymbolicClass::one();
    let s = series::ClosedSeries::single(vec!["T".into()], series::Strand::new(one.clone(), vec![3], vec![]));
    assert!(matches!(nearby_cycles(&s, &one.zero_like()), Err(ZetaError::Series(series::SeriesError::NotLimitNormal(_)))));
}

#[test]
fn limit_gives_minus_nearby_cycles_over_strata() {
    // two crossing divisors and one exceptional stratum: S = sum (1-L)^{|I|-1} [E_I]
    let doc = r#"{"strata": [
        {"I": [1], "atom": "E1", "N": [[2]], "nu": [1]},
        {"I": [2], "atom": "E2", "N": [[3]], "nu": [2]},
        {"I": [1, 2], "atom": "E12", "N": [[2], [3]], "nu": [1, 2]},
        {"I": [3], "atom": "E3", "N": [[1]], "nu": [1], "in_a": false}
    ]}"#;
    let d = ResolutionData::from_json(doc).unwrap();
    let z = dl_eval(&d, None).unwrap();
    let s = nearby_cycles(&z, &SymbolicClass::zero()).unwrap();
    let e = |n: &str| SymbolicClass::atom(motclass::Atom::new(n, "X0", 1));
    let one_minus_l = LocRat::int(1) - LocRat::l_pow(1);
    let want = e("E1").add(&e("E2")).add(&e("E12").scale(&one_minus_l));
    assert_eq!(s, want);
    assert_eq!(ResolutionData::from_json(&d.to_json()).unwrap(), d);
}

#[test]
fn invalid_resolution_data_is_rejected() {
    for doc in [
        r#"{"strata": [{"I": [1], "atom": "E", "N": [[0]], "nu": [1]}]}"#,
        r#"{"strata": [{"I": [1], "atom": "E", "N": [[1]], "nu": [0]}]}"#,
        r#"{"strata": [{"I": [1, 2], "atom": "E", "N": [[1]], "nu": [1, 1]}]}"#,
    ] {
        assert!(matches!(ResolutionData::from_json(doc), Err(ZetaError::InvalidData(_))), "{doc}");
    }
    assert!(matches!(ResolutionData::from_json("{"), Err(ZetaError::Parse(_))));
}

#[test]
fn cone_euler_examples() {
    let ray = ConeSpec { dim: Some(1), cones: vec![ConePiece::open(vec![vec![1]])] };
    assert_eq!(cone_euler(&ray).unwrap(), -1);
    assert_eq!(cone_euler(&ConeSpec::delta(2)).unwrap(), 1);
    let origin = ConeSpec { dim: Some(2), cones: vec![ConePiece::open(vec![])] };
    assert_eq!(cone_euler(&origin).unwrap(), 1);
    // closed quadrant as origin + two rays + open cone
    let quad = ConeSpec {
        dim: Some(2),
        cones: vec![
            ConePiece::open(vec![]),
            ConePiece::open(vec![vec![1, 0]]),
            ConePiece::open(vec![vec![0, 1]]),
            ConePiece::open(vec![vec![1, 0], vec![0, 1]]),
        ],
    };
    assert_eq!(cone_euler(&quad).unwrap(), 0);
    let closed = ConeSpec { dim: Some(1), cones: vec![ConePiece { gens: vec![vec![1]], open_faces: vec![false] }] };
    assert!(matches!(cone_euler(&closed), Err(ZetaError::ConeNotDecomposed(_))));
    let fat = ConeSpec { dim: Some(2), cones: vec![ConePiece::open(vec![vec![1, 1], vec![1, -1]])] };
    assert!(matches!(cone_euler(&fat), Err(ZetaError::ConeNotDecomposed(_))));
    let overlap = ConeSpec { dim: Some(1), cones: vec![ConePiece::open(vec![vec![1]]), ConePiece::open(vec![vec![2]])] };
    assert!(matches!(cone_euler(&overlap), Err(ZetaError::ConeNotDecomposed(_))));
    assert_eq!(ConeSpec::from_json(&quad.to_json()).unwrap(), quad);
}

fn two_function_data(cones: Option<ConeSpec>) -> ResolutionData {
    let mut d = ResolutionData::from_json(
        r#"{"strata": [
            {"I": [1], "atom": "E1", "N": [[1, 2]], "nu": [1]},
            {"I": [1, 2], "atom": "E12", "N": [[1, 0], [0, 1]], "nu": [1, 2]}
        ]}"#,
    )
    .unwrap();
    d.strata[1].cones = cones;
    d
}

#[test]
fn cone_sums_truncated_and_closed_agree() {
    // C = Delta: n_1 < n_2. On E1, N(k) = (k, 2k) always lies in C.
    let mut d = two_function_data(Some(ConeSpec::delta(2)));
    d.strata[0].cones = Some(ConeSpec::orthant(1));
    let c = ConeSpec::delta(2);
    let closed = dl_eval(&d, Some(&c)).unwrap();
    let trunc = dl_trunc(&d, Some(&c), 10).unwrap();
    assert!(closed.expand(10, BoundMode::Total).agrees(&trunc));
    assert!(!trunc.is_empty());
    // a decomposition with closed faces: k_1 <= k_2 and k_1 > k_2
    let split = ConeSpec {
        dim: Some(2),
        cones: vec![
            ConePiece { gens: vec![vec![1, 1], vec![0, 1]], open_faces: vec![true, false] },
            ConePiece::open(vec![vec![1, 1], vec![1, 0]]),
        ],
    };
    let mut e = two_function_data(Some(split));
    e.strata[0].cones = Some(ConeSpec::orthant(1));
    let all = ConeSpec::orthant(2);
    let closed = dl_eval(&e, Some(&all)).unwrap();
    let plain = dl_eval(&e, None).unwrap();
    let bound = 10;
    assert!(closed.expand(bound, BoundMode::Total).agrees(&plain.expand(bound, BoundMode::Total)));
    assert!(closed.expand(bound, BoundMode::Total).agrees(&dl_trunc(&e, Some(&all), bound).unwrap()));
}

#[test]
fn wrong_decompositions_are_caught() {
    let c = ConeSpec::delta(2);
    let missing = dl_eval(&two_function_data(None), Some(&c));
    assert!(matches!(missing, Err(ZetaError::ConeNotDecomposed(_))));
    let mut d = two_function_data(Some(ConeSpec::orthant(2)));
    d.strata[0].cones = Some(ConeSpec::orthant(1));
    assert!(matches!(dl_eval(&d, Some(&c)), Err(ZetaError::ConeNotDecomposed(_))));
}

#[test]
fn cone_limits_are_euler_characteristics() {
    // lim Z^C = sum chi(N_I^{-1}(C)) (L-1)^{|I|-1} [E_I]
    let mut d = two_function_data(Some(ConeSpec::delta(2)));
    d.strata[0].cones = Some(ConeSpec::orthant(1));
    let z = dl_eval(&d, Some(&ConeSpec::delta(2))).unwrap();
    let lim = nearby_cycles(&z, &SymbolicClass::zero()).unwrap().neg();
    let e = |n: &str| SymbolicClass::atom(motclass::Atom::new(n, "X0", 1));
    let chi1 = cone_euler(&ConeSpec::orthant(1)).unwrap();
    let chi12 = cone_euler(&ConeSpec::delta(2)).unwrap();
    let want = e("E1").scale(&LocRat::int(chi1)).add(&e("E12").scale(&(LocRat::l_minus_one() * LocRat::int(chi12))));
    assert_eq!(lim, want);
}

#[test]
fn closed_sum_form_matches_direct_counts() {
    for (a, b, q, deg) in [(1, 1, 5, 8), (2, 2, 13, 10), (2, 3, 7, 16), (2, 3, 13, 13), (3, 3, 7, 10), (2, 4, 5, 12), (1, 3, 7, 10)] {
        let (f, g) = (poly(&format!("x^{a}")), poly(&format!("y^{b}")));
        let s = sum_zeta_monomials(&f, &g, fp(q), DEFAULT_BUDGET).unwrap();
        let t = sum_zeta_pullback(&f, &g, fp(q), deg, DEFAULT_BUDGET, SumMode::Direct).unwrap();
        let z = CountVal::zero(fp(q));
        for n in 0..=deg {
            assert_eq!(s.coeff(n as usize), t.coeff_or(&[n], &z), "x^{a} + y^{b}, q = {q}, n = {n}");
        }
    }
}

#[test]
fn closed_sum_form_of_a_smooth_sum() {
    let s = sum_zeta_monomials(&poly("x"), &poly("y"), fp(7), DEFAULT_BUDGET).unwrap();
    assert_eq!(s.lim().unwrap(), CountVal::from_ints(fp(7), &[-1]));
    assert!(matches!(sum_zeta_monomials(&poly("x^2"), &poly("x*y"), fp(7), DEFAULT_BUDGET), Err(ZetaError::Unsupported(_))));
}
