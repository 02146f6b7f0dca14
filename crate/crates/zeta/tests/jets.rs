use motclass::{parse_poly, CountVal, Fp, DEFAULT_BUDGET};
use num_bigint::BigInt;
use num_rational::BigRational;
use zeta::*;

fn fp(p: u64) -> Fp {
    Fp::new(p).unwrap()
}

fn poly(s: &str) -> motclass::Poly {
    parse_poly(s).unwrap()
}

fn oracle(f: &str, n: u32, base: BasePoint, q: u64) -> CountVal {
    let g = jet_set(&JetSpec { f: poly(f), n, base, q }).unwrap();
    g.count_val(fp(q), DEFAULT_BUDGET).unwrap()
}

fn dfs(f: &str, n: u32, base: BasePoint, q: u64) -> CountVal {
    let c = jet_counts(&poly(f), &base, fp(q), n, DEFAULT_BUDGET).unwrap();
    let v = c.exact[n as usize].iter().map(|x| BigRational::from_integer(x.clone())).collect();
    CountVal::new(fp(q), v)
}

#[test]
fn jet_set_of_a_coordinate() {
    let g = jet_set(&JetSpec { f: poly("x"), n: 3, base: BasePoint::Origin, q: 7 }).unwrap();
    assert_eq!(g.vars, vec!["x_1", "x_2", "x_3"]);
    assert_eq!(g.weights, vec![1, 2, 3]);
    assert_eq!(g.count_val(fp(7), DEFAULT_BUDGET).unwrap(), CountVal::from_ints(fp(7), &[1]));
    let z = zeta_trunc(&poly("x"), &BasePoint::Origin, fp(7), 3, DEFAULT_BUDGET).unwrap();
    let want = CountVal::one(fp(7)).scale_rat(&BigRational::new(1.into(), 343.into()));
    assert_eq!(z.coeff_or(&[3], &CountVal::zero(fp(7))), want);
}

#[test]
fn jet_set_of_a_square() {
    assert_eq!(*oracle("x^2", 2, BasePoint::Origin, 5).count(), BigRational::from_integer(10.into()));
    assert!(oracle("x^2", 3, BasePoint::Origin, 5).is_zero());
    // leading coefficient a nonsquare: no solutions of a_1^2 = 2
    assert_eq!(oracle("x^2", 2, BasePoint::Origin, 5), CountVal::from_ints(fp(5), &[10, 0]));
}

#[test]
fn global_jets_record_base_coordinates() {
    let g = jet_set(&JetSpec { f: poly("x*y"), n: 2, base: BasePoint::Global, q: 5 }).unwrap();
    assert_eq!(g.base_coords.len(), 2);
    assert!(g.base_coords.iter().all(|&i| g.weights[i] == 0));
}

#[test]
fn jet_sets_are_equivariant() {
    for (f, n) in [("x^2 + y^3", 3), ("x*y", 4), ("x^3 - y^2", 2)] {
        let g = jet_set(&JetSpec { f: poly(f), n, base: BasePoint::Origin, q: 13 }).unwrap();
        let pts: Vec<Vec<u64>> = (0..20u64).map(|i| (0..g.dim() as u64).map(|j| (i * 7 + j * 3 + 1) % 13).collect()).collect();
        let q = if 12 % n as u64 == 0 { 13 } else { 29 };
        assert!(g.spot_check_equivariance(fp(q), &pts), "{f}, n = {n}");
    }
}

#[test]
fn search_matches_explicit_count() {
    let cases = [
        ("x^2", 5),
        ("x^3", 7),
        ("x^2 + y^3", 5),
        ("x*y", 5),
        ("x^2*y", 7),
        ("x^2 - y^2", 5),
        ("x + y^2", 5),
        ("x^2 + x*y + y^3", 7),
        ("x^5", 5),
    ];
    for (f, q) in cases {
        let d = poly(f).nvars() as u32;
        // the explicit count needs the action order prime to q
        for n in (1..=(if d == 1 { 6 } else { 3 })).filter(|n| n % q as u32 != 0) {
            assert_eq!(dfs(f, n, BasePoint::Origin, q), oracle(f, n, BasePoint::Origin, q), "{f} q={q} n={n}");
        }
    }
}

#[test]
fn search_matches_explicit_count_away_from_origin() {
    for (f, x) in [("x^2 + y^2 - 2", vec![1, 1]), ("x*y - 1", vec![1, 1]), ("x^2 - 1", vec![1])] {
        for n in 1..=3 {
            let b = BasePoint::Point(x.clone());
            assert_eq!(dfs(f, n, b.clone(), 5), oracle(f, n, b, 5), "{f} n={n}");
        }
    }
    for f in ["x^2 - y^3", "x*y", "x^2 + 1"] {
        for n in 1..=2 {
            assert_eq!(dfs(f, n, BasePoint::Global, 5), oracle(f, n, BasePoint::Global, 5), "{f} n={n}");
        }
    }
}

#[test]
fn jets_partition_by_order() {
    let q = 7;
    for f in ["x^2 + y^3", "x*y*(x+y)", "x^3"] {
        let c = jet_counts(&poly(f), &BasePoint::Origin, fp(q), 6, DEFAULT_BUDGET).unwrap();
        for n in 1..=6u32 {
            let all = num_traits::pow(BigInt::from(q), c.d * n as usize);
            assert_eq!(c.all_jets(n), all, "{f} n={n}");
        }
    }
}

#[test]
fn monomial_counts() {
    // n = ak: a_k in mu_a, a_{k+1..ak} free
    let q = 13u64;
    for a in 1..=4u32 {
        let c = jet_counts(&poly(&format!("x^{a}")), &BasePoint::Origin, fp(q), 12, DEFAULT_BUDGET).unwrap();
        for n in 1..=12u32 {
            let want = if n % a == 0 {
                let k = n / a;
                BigInt::from(a) * num_traits::pow(BigInt::from(q), (n - k) as usize)
            } else {
                BigInt::from(0)
            };
            assert_eq!(c.count(n), want, "a={a} n={n}");
        }
    }
}

#[test]
fn budget_is_enforced() {
    let r = jet_counts(&poly("x^2 + y^2 + z^2"), &BasePoint::Origin, fp(7), 8, 10);
    assert!(matches!(r, Err(ZetaError::BudgetExceeded(_))));
}

#[test]
fn histogram_weights_add_up() {
    let q = 5u64;
    for (f, n) in [("x^2 + y^3", 3), ("x^3", 5)] {
        let h = jet_histogram(&poly(f), &BasePoint::Origin, fp(q), n, DEFAULT_BUDGET).unwrap();
        let total: u128 = h.values().sum();
        assert_eq!(total, (q as u128).pow(poly(f).nvars() as u32 * n), "{f}");
    }
}

#[test]
fn base_point_dimension_is_checked() {
    let r = jet_counts(&poly("x*y"), &BasePoint::Point(vec![1]), fp(5), 2, DEFAULT_BUDGET);
    assert!(matches!(r, Err(ZetaError::InvalidData(_))));
}
