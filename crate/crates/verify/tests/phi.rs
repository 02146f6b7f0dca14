use motclass::{parse_poly, DEFAULT_BUDGET};
use verify::phi::*;

fn p(s: &str) -> motclass::Poly {
    parse_poly(s).unwrap()
}

fn show(r: &verify::CheckReport) {
    println!("{}", r.summary());
    for e in r.failures().take(5) {
        println!("  {:?} {} lhs {} rhs {}", e.exponent, e.label, e.lhs, e.rhs);
    }
    println!("  notes {:?}", r.notes);
}

#[test]
fn phi_round_trips() {
    let r = check_phi_roundtrip(12, 7, 7, 8).unwrap();
    show(&r);
    assert!(r.passed());
}

#[test]
fn phi_inverse_of_the_product_for_coordinates() {
    let r = check_phi_zeta(&[p("x"), p("y")], 5, 8, DEFAULT_BUDGET).unwrap();
    show(&r);
    assert!(r.passed());
}

#[test]
fn phi_inverse_of_the_product_for_a_cusp_pair() {
    let r = check_phi_zeta(&[p("x^2"), p("y^3")], 13, 8, DEFAULT_BUDGET).unwrap();
    show(&r);
    // the standard inverse sums plain tails, zeta_f needs augmented ones
    assert!(!r.passed());
    assert!(r.notes.contains(&"tails over l > 0 augmented: equal".to_string()));
}
