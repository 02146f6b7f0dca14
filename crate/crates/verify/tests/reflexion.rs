use boxast::PhiOptions;
use motclass::{parse_poly, DEFAULT_BUDGET};
use verify::reflexion::*;

fn p(s: &str) -> motclass::Poly {
    parse_poly(s).unwrap()
}

fn show(r: &verify::CheckReport) {
    println!("{}", r.summary());
    for e in r.failures().take(5) {
        println!("  {:?} {} lhs {} rhs {}", e.exponent, e.label, e.lhs, e.rhs);
    }
}

#[test]
fn univariate_reflexion_smooth_pair() {
    let r = check_reflexion_uni(&p("x"), &p("y"), 7, 6, DEFAULT_BUDGET).unwrap();
    show(&r);
    assert!(r.passed());
}

#[test]
fn univariate_reflexion_cusp_pair() {
    let r = check_reflexion_uni(&p("x^2"), &p("y^3"), 7, 6, DEFAULT_BUDGET).unwrap();
    show(&r);
    assert!(r.passed());
}

#[test]
fn splits_of_the_sum() {
    let r = check_order_splits(&p("x^2"), &p("y^2"), 5, 5, DEFAULT_BUDGET).unwrap();
    show(&r);
    assert!(r.passed());
}

#[test]
fn admissible_family_counts() {
    assert_eq!(admissible_families(&[1, 1]).len(), 3);
    assert_eq!(admissible_families(&[1, 1, 1]).len(), 13);
    // two chains of length two merge in 13 ways
    assert_eq!(admissible_families(&[2, 2]).len(), 13);
    assert_eq!(admissible_families(&[2, 1]).len(), 5);
}

#[test]
fn multivariate_reflexion_of_two_smooth_functions() {
    let fam = vec![vec![p("x")], vec![p("y")]];
    let r = check_reflexion_multi(&fam, 5, 5, DEFAULT_BUDGET, PhiOptions::default()).unwrap();
    show(&r);
    assert!(r.passed());
}

#[test]
fn three_functions() {
    let r = check_three_function(&p("x"), &p("y"), &p("z"), 5, 4, DEFAULT_BUDGET).unwrap();
    show(&r);
    assert_eq!(r.notes, vec!["13 admissible families".to_string()]);
    assert!(r.passed());
}
