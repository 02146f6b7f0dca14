use locring::{LaurentPoly, LocRat};
use motclass::rewrite::{read_normal, rewrite, Expr};
use motclass::*;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const ATOMS: &[(&str, u64)] = &[("a", 1), ("b", 2), ("c", 2), ("d", 3)];

fn random_scalar(rng: &mut ChaCha8Rng) -> LocRat {
    let p = LaurentPoly::from_terms((0..rng.gen_range(1..3)).map(|_| (rng.gen_range(-2..3), BigInt::from(rng.gen_range(-2..3)))));
    let den = (0..rng.gen_range(0..2)).map(|_| rng.gen_range(1..4)).collect();
    LocRat::new(p, den)
}

fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    let leaf = depth == 0 || rng.gen_bool(0.25);
    if leaf {
        return match rng.gen_range(0..6) {
            0 => Expr::One,
            1 => Expr::Zero,
            _ => {
                let (n, o) = ATOMS[rng.gen_range(0..ATOMS.len())];
                Expr::Atom(Atom::new(n, "X", o))
            }
        };
    }
    match rng.gen_range(0..6) {
        0 => Expr::Scale(random_scalar(rng), Box::new(random_expr(rng, depth - 1))),
        1 => Expr::Add((0..rng.gen_range(1..4)).map(|_| random_expr(rng, depth - 1)).collect()),
        2 => Expr::Mul((0..rng.gen_range(1..4)).map(|_| random_expr(rng, depth - 1)).collect()),
        3 | 4 => {
            let k = if rng.gen_bool(0.5) { ConvKind::Zero } else { ConvKind::One };
            Expr::Conv(k, Box::new(random_expr(rng, depth - 1)), Box::new(random_expr(rng, depth - 1)))
        }
        _ => Expr::Aug(Box::new(random_expr(rng, depth - 1))),
    }
}

/// Normal form does not depend on the order in which redexes are rewritten.
#[test]
fn rewrite_confluence_corpus() {
    let mut rng = ChaCha8Rng::seed_from_u64(20240611);
    let mut checked = 0;
    for _ in 0..400 {
        let e = random_expr(&mut rng, 4);
        if e.size() > 60 {
            continue;
        }
        let reference = e.eval();
        for order in 0..4u64 {
            let mut pick = ChaCha8Rng::seed_from_u64(order);
            let mut choose = |n: usize| match order {
                0 => 0,
                1 => n - 1,
                _ => pick.gen_range(0..n),
            };
            let (nf, _) = rewrite(e.clone(), &mut choose, 200_000);
            let got = read_normal(&nf).unwrap_or_else(|m| panic!("{m}\nfrom {e:?}"));
            assert_eq!(got, reference, "order {order} for {e:?}");
        }
        checked += 1;
    }
    assert!(checked > 300);
}

/// Equal summands are collected, never re-sorted in place.
#[test]
fn last_redex_order_terminates() {
    let u = Expr::Atom(Atom::new("u", "X", 1));
    let e = Expr::Add(vec![u.clone(), u, Expr::One]);
    let (nf, _) = rewrite(e.clone(), &mut |n| n - 1, 1000);
    assert_eq!(read_normal(&nf).unwrap(), e.eval());
}

#[derive(Clone, Debug)]
enum Op {
    Atom(usize),
    Scalar(i64, i64),
    Add(Box<Op>, Box<Op>),
    Mul(Box<Op>, Box<Op>),
    Conv(u8, Box<Op>, Box<Op>),
}

fn op() -> impl Strategy<Value = Op> {
    let leaf = prop_oneof![(0usize..4).prop_map(Op::Atom), (-3i64..4, -2i64..3).prop_map(|(c, e)| Op::Scalar(c, e))];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Op::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Op::Mul(Box::new(a), Box::new(b))),
            (0u8..2, inner.clone(), inner).prop_map(|(k, a, b)| Op::Conv(k, Box::new(a), Box::new(b))),
        ]
    })
}

const BOUND: &[(&str, u64)] = &[("t", 1), ("m2", 2), ("m3", 3), ("f2", 2)];

fn binding() -> Binding {
    let mut b = Binding::new();
    b.insert("t".into(), GeomSet::gm());
    b.insert("m2".into(), GeomSet::mu(2));
    b.insert("m3".into(), GeomSet::mu(3));
    b.insert("f2".into(), GeomSet::fermat(2, 1));
    b
}

fn sym(o: &Op) -> SymbolicClass {
    match o {
        Op::Atom(i) => SymbolicClass::atom(Atom::new(BOUND[*i].0, "X", BOUND[*i].1)),
        Op::Scalar(c, e) => SymbolicClass::scalar(LocRat::from_poly(LaurentPoly::monomial(*c, *e))),
        Op::Add(a, b) => sym(a).add(&sym(b)),
        Op::Mul(a, b) => sym(a).ext_mul(&sym(b)),
        Op::Conv(k, a, b) => {
            if *k == 0 {
                sym(a).conv0(&sym(b))
            } else {
                sym(a).conv1(&sym(b))
            }
        }
    }
}

fn count(o: &Op, f: Fp, b: &Binding) -> CountVal {
    match o {
        Op::Atom(i) => b[BOUND[*i].0].count_val(f, DEFAULT_BUDGET).unwrap(),
        Op::Scalar(..) => bind(&sym(o), b, f, DEFAULT_BUDGET).unwrap(),
        Op::Add(x, y) => count(x, f, b).add(&count(y, f, b)),
        Op::Mul(x, y) => count(x, f, b).mul(&count(y, f, b)),
        Op::Conv(k, x, y) => count(x, f, b).conv(&count(y, f, b), *k),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    /// Binding commutes with +, x and the convolutions on augmentation-free expressions.
    #[test]
    fn bind_is_homomorphism(o in op(), qi in 0usize..2) {
        let f = Fp::new([7u64, 13][qi]).unwrap();
        let b = binding();
        prop_assert_eq!(bind(&sym(&o), &b, f, DEFAULT_BUDGET).unwrap(), count(&o, f, &b));
    }
}
