use motclass::{Atom, Coeff, CountVal, Fp, SymbolicClass};
use series::cells::cell_decompose;
use series::*;

fn fp(p: u64) -> Fp {
    Fp::new(p).unwrap()
}

#[test]
fn fubini_counts() {
    assert_eq!(ordered_cells(1).len(), 1);
    assert_eq!(ordered_cells(2).len(), 3);
    assert_eq!(ordered_cells(3).len(), 13);
    assert_eq!(ordered_cells(4).len(), 75);
}

#[test]
fn cell_of_examples() {
    assert_eq!(cells::cell_of(&[1, 2]), CellSpec::chain(2));
    assert_eq!(cells::cell_of(&[2, 1]).to_string(), "n2<n1");
    assert_eq!(cells::cell_of(&[3, 3]).to_string(), "n1=n2");
    let c = CellSpec::from_rho_breaks(&[2, 0, 1], &[0, 1, 3]);
    assert_eq!(c.to_string(), "n3<n1=n2");
    assert_eq!(c.rho(), vec![2, 0, 1]);
    assert_eq!(c.breaks(), vec![0, 1, 3]);
    assert!(c.contains(&[4, 4, 1]));
}

#[test]
fn decomposition_partitions_support() {
    let f = fp(5);
    let mut a = TruncSeries::new(vec!["T".into(), "U".into(), "V".into()], 5);
    for n0 in 0..=5u32 {
        for n1 in 0..=5 - n0 {
            for n2 in 0..=5 - n0 - n1 {
                a.set(vec![n0, n1, n2], CountVal::from_ints(f, &[(n0 * 7 + n1 * 3 + n2 + 1) as i64]));
            }
        }
    }
    let parts = cell_decompose(&a);
    assert_eq!(parts.len(), 13);
    let mut sum = TruncSeries::new(a.vars.clone(), 5);
    for (cell, p) in &parts {
        assert!(p.iter().all(|(n, _)| cell.contains(n)));
        sum = sum.add(p).unwrap();
    }
    assert_eq!(sum, a);
    let chain_only = a.restrict(|n| n[0] < n[1] && n[1] < n[2]);
    let nonzero = cell_decompose(&chain_only).values().filter(|p| !p.is_empty()).count();
    assert_eq!(nonzero, 1);
}

#[test]
fn phi_is_identity_in_one_variable() {
    let one = SymbolicClass::one();
    let mut a = CellSeries::new(vec!["T".into()], &one);
    a.push(CellSpec::chain(1), ProductTerm::new(vec![Seq::geometric(&one, 0, -1, 1)]));
    let e = a.expand(8, BoundMode::Total);
    assert_eq!(a.phi().unwrap().expand(8, BoundMode::Total), e);
    assert_eq!(a.phi_inv(TailBound::Zero, false).unwrap().expand(8, BoundMode::Total), e);
}

#[test]
fn phi_roundtrip_symbolic() {
    let one = SymbolicClass::one();
    let a_ = SymbolicClass::atom(Atom::new("a", "X0", 2));
    let b_ = SymbolicClass::atom(Atom::new("b", "X0", 3));
    let mut a = CellSeries::new(vec!["T".into(), "U".into()], &one);
    a.push(
        CellSpec::chain(2),
        ProductTerm::new(vec![Seq::geometric(&a_, 0, -1, 2), Seq::geometric(&b_, 1, -2, 1)]),
    );
    let e = a.expand(8, BoundMode::Total);
    let back = a.phi_inv(TailBound::Zero, false).unwrap().phi().unwrap();
    assert_eq!(back.expand(8, BoundMode::Total), e);
    let back = a.phi().unwrap().phi_inv(TailBound::Zero, false).unwrap();
    assert_eq!(back.expand(8, BoundMode::Total), e);
}

#[test]
fn tail_bound_one_is_not_inverse() {
    let f = fp(5);
    let one = CountVal::one(f);
    let mut a = CellSeries::new(vec!["T".into(), "U".into()], &one);
    a.push(CellSpec::chain(2), ProductTerm::new(vec![Seq::geometric(&one, 0, -1, 1), Seq::geometric(&one, 0, -1, 1)]));
    let e = a.expand(6, BoundMode::Total);
    let back = a.phi_inv(TailBound::One, false).unwrap().phi().unwrap();
    assert_ne!(back.expand(6, BoundMode::Total), e);
}

#[test]
fn zero_series_expands_to_zero() {
    let one = CountVal::one(fp(7));
    let a = CellSeries::new(vec!["T".into(), "U".into()], &one);
    assert!(a.phi().unwrap().expand(5, BoundMode::Total).is_empty());
    let mut b = a.clone();
    b.push(CellSpec::chain(2), ProductTerm::new(vec![Seq::zero(&one.zero_like()), Seq::geometric(&one, 0, -1, 1)]));
    assert!(b.expand(5, BoundMode::Total).is_empty());
}
