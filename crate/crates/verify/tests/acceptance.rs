//! One PASS/FAIL line per acceptance criterion.

use boxast::merge_patterns;
use locring::{LaurentPoly, LocRat};
use motclass::rewrite::{read_normal, rewrite, Expr};
use motclass::{gcd, parse_poly, Atom, Coeff, ConvKind, CountVal, Fp, SymbolicClass, DEFAULT_BUDGET};
use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use series::serial::{closed_to_json, from_json, trunc_to_json, AnySeries};
use series::{ordered_cells, BoundMode, Seq};
use verify::case::{cases_from_json, cases_to_json};
use verify::reflexion::admissible_families;
use verify::report::reports_to_json;
use verify::*;
use zeta::{
    bind_closed, dl_eval, jet_counts, mu_atom, mu_binding, nearby_cycles, zeta_trunc, BasePoint, ResolutionData,
};

struct Outcome {
    pass: bool,
    lines: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Self { pass: true, lines: Vec::new() }
    }

    fn check(&mut self, ok: bool, line: impl Into<String>) {
        self.pass &= ok;
        self.lines.push(format!("{} {}", if ok { "PASS" } else { "FAIL" }, line.into()));
    }

    fn report(&mut self, r: &CheckReport) {
        self.pass &= r.passed();
        self.lines.push(r.summary());
        for e in r.failures().take(4) {
            self.lines.push(format!("       {:?} {} lhs {} rhs {}", e.exponent, e.label, e.lhs, e.rhs));
        }
        for n in &r.notes {
            self.lines.push(format!("       {n}"));
        }
    }

    fn reports(&mut self, rs: &[Result<Vec<CheckReport>, VerifyError>]) {
        for r in rs {
            match r {
                Ok(rs) => rs.iter().for_each(|r| self.report(r)),
                Err(e) => self.check(false, format!("error: {e}")),
            }
        }
    }
}

fn fp(q: u64) -> Fp {
    Fp::new(q).unwrap()
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn pair_cases(id: CheckId, degree: u32) -> Vec<CheckCase> {
    PAIRS.iter().map(|(f, g)| CheckCase::new(id, &[&[f], &[g]], &[7, 13], degree)).collect()
}

/// The suite cases behind criteria 1 to 5 and 8, grouped by criterion.
fn criterion_cases() -> Vec<(usize, CheckCase)> {
    use CheckId::*;
    let mut out = Vec::new();
    out.extend(pair_cases(ReflexionUni, 6).into_iter().map(|c| (1, c)));
    out.extend(pair_cases(OrderSplits, 6).into_iter().map(|c| (2, c)));
    out.extend(pair_cases(ThomSebastiani, 0).into_iter().map(|c| (3, c)));
    out.push((3, CheckCase::new(ThomSebastiani, &[&["x"], &["y"]], &[7], 0).symbolic()));
    for (f, g) in [("x", "y"), ("x^2", "y^3")] {
        out.push((3, CheckCase::new(Lm23, &[&[f], &[g]], &[7, 13], 0)));
    }
    out.push((4, CheckCase::new(Commutation, &[&["1", "2", "3"]], &[], 0).symbolic()));
    out.push((4, CheckCase::new(Commutation, &[&["1", "2", "3"]], &[7, 13], 0)));
    out.push((5, CheckCase::new(PhiAuto, &[], &[7], 10)));
    out.push((5, CheckCase::new(PhiAuto, &[&["x", "y"]], &[5], 8)));
    out.push((5, CheckCase::new(PhiAuto, &[&["x^2", "y^3"]], &[13], 8)));
    out.push((8, CheckCase::new(ThreeFunction, &[&["x"], &["y"], &["z"]], &[5], 4)));
    out.push((8, CheckCase::new(ReflexionMulti, &[&["x"], &["y"]], &[5], 5)));
    out
}

fn dl_consistency() -> Outcome {
    let mut o = Outcome::new();
    for q in [5u64, 13] {
        for a in (1..=4u64).filter(|a| (q - 1) % a == 0) {
            let atom = if a == 1 { "1".to_string() } else { format!("mu_{a}") };
            let d = ResolutionData::single(&atom, a, a as u32, 1);
            let run = || -> Result<(bool, BigRational, bool), VerifyError> {
                let sym = dl_eval(&d, None)?;
                let closed = bind_closed(&sym, &d.binding()?, fp(q), DEFAULT_BUDGET)?;
                let f = parse_poly(&format!("x^{a}"))?;
                let jets = zeta_trunc(&f, &BasePoint::Origin, fp(q), 8, DEFAULT_BUDGET)?;
                let expanded = closed.expand(8, BoundMode::Total);
                let same = (1..=8u32).all(|n| expanded.coeff_or(&[n], &CountVal::zero(fp(q))) == jets.coeff_or(&[n], &CountVal::zero(fp(q))));
                let s = nearby_cycles(&closed, &CountVal::zero(fp(q)))?;
                let int = sym.classify().to_string() == "int";
                Ok((same, s.count().clone(), int))
            };
            match run() {
                Ok((same, s, int)) => {
                    let g = gcd(a, q - 1) as i64;
                    o.check(same, format!("q = {q}, a = {a}: Denef-Loeser series equals jet counts through n = 8"));
                    o.check(s == rat(g), format!("q = {q}, a = {a}: -lim counts {s}, gcd(a, q - 1) = {g}"));
                    o.check(int, format!("q = {q}, a = {a}: Denef-Loeser closed form is integrable"));
                }
                Err(e) => o.check(false, format!("q = {q}, a = {a}: {e}")),
            }
        }
    }
    o
}

/// `lim(a x_H b) = -lim a x lim b` and `lim(a *_H b) = -lim a * lim b` on
/// pairs of geometric strands `c L^m T^p / (1 - L^m T^p)`.
fn hadamard_pairs<C: series::SeriesCoeff>(o: &mut Outcome, name: &str, strands: &[Seq<C>]) {
    let mut total = 0;
    let mut bad = Vec::new();
    for (i, a) in strands.iter().enumerate() {
        for (j, b) in strands.iter().enumerate() {
            let run = || -> Result<(bool, bool), series::SeriesError> {
                let (la, lb) = (a.lim()?, b.lim()?);
                let ext = a.hadamard(b, |x, y| x.ext_mul(y))?.lim()?;
                let conv = a.hadamard(b, |x, y| Coeff::conv(x, y))?.lim()?;
                Ok((ext == la.ext_mul(&lb).neg(), conv == Coeff::conv(&la, &lb).neg()))
            };
            total += 2;
            match run() {
                Ok((e, c)) => {
                    if !e {
                        bad.push(format!("x_H on pair ({i}, {j})"));
                    }
                    if !c {
                        bad.push(format!("*_H on pair ({i}, {j})"));
                    }
                }
                Err(e) => bad.push(format!("pair ({i}, {j}): {e}")),
            }
        }
    }
    o.check(bad.is_empty(), format!("{name}: limit anti-compatibility on {total} strand products"));
    for b in bad.iter().take(4) {
        o.lines.push(format!("       {b}"));
    }
}

fn integrability(reports: &[&CheckReport]) -> Outcome {
    let mut o = Outcome::new();
    let mut fits = 0;
    let mut bad = Vec::new();
    for r in reports {
        for f in &r.fits {
            fits += 1;
            if f.class != "int" {
                bad.push(format!("{} in {} [{}] is {}", f.name, r.id, r.case, f.class));
            }
        }
    }
    o.check(bad.is_empty() && fits > 0, format!("{fits} fitted zeta functions classify as int"));
    for b in &bad {
        o.lines.push(format!("       {b}"));
    }
    let q = 7;
    let binding = mu_binding(&[2, 3]);
    let mut counts = Vec::new();
    let mut syms = Vec::new();
    for r in 1..=3u64 {
        let c = motclass::bind(&mu_atom(r), &binding, fp(q), DEFAULT_BUDGET).unwrap();
        for m in [-1i64, -2] {
            for p in [1usize, 2, 3] {
                counts.push(Seq::geometric(&c, 0, m, p));
            }
        }
        syms.push(Seq::geometric(&mu_atom(r), 0, -1, r as usize));
    }
    counts.push(Seq::geometric(&CountVal::from_ints(fp(q), &[1, -1]), 0, 1, 2));
    hadamard_pairs(&mut o, "counts over F_7", &counts);
    hadamard_pairs(&mut o, "symbolic [mu_r]", &syms);
    o
}

fn patterns(o: &mut Outcome) {
    let p11 = merge_patterns(1, 1).len();
    let a11 = admissible_families(&[1, 1]).len();
    let a111 = admissible_families(&[1, 1, 1]).len();
    o.check(p11 == 3 && a11 == 3, format!("r = s = 1: {p11} merge patterns, {a11} admissible families"));
    o.check(a111 == 13, format!("three functions: {a111} admissible families"));
}

fn random_scalar(rng: &mut ChaCha8Rng) -> LocRat {
    let p = LaurentPoly::from_terms((0..rng.gen_range(1..4)).map(|_| (rng.gen_range(-3..4), BigInt::from(rng.gen_range(-4..5)))));
    let den = (0..rng.gen_range(0..3)).map(|_| rng.gen_range(1..5)).collect();
    LocRat::new(p, den)
}

const ATOMS: &[(&str, u64)] = &[("u", 1), ("v", 2), ("w", 2), ("s", 3)];

fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..5) {
            0 => Expr::One,
            1 => Expr::Zero,
            _ => {
                let (n, k) = ATOMS[rng.gen_range(0..ATOMS.len())];
                Expr::Atom(Atom::new(n, "X", k))
            }
        };
    }
    match rng.gen_range(0..5) {
        0 => Expr::Scale(random_scalar(rng), Box::new(random_expr(rng, depth - 1))),
        1 => Expr::Add((0..rng.gen_range(1..4)).map(|_| random_expr(rng, depth - 1)).collect()),
        2 => Expr::Mul((0..rng.gen_range(1..4)).map(|_| random_expr(rng, depth - 1)).collect()),
        3 => {
            let k = if rng.gen_bool(0.5) { ConvKind::Zero } else { ConvKind::One };
            Expr::Conv(k, Box::new(random_expr(rng, depth - 1)), Box::new(random_expr(rng, depth - 1)))
        }
        _ => Expr::Aug(Box::new(random_expr(rng, depth - 1))),
    }
}

#[allow(clippy::eq_op)]
fn infrastructure() -> Outcome {
    let mut o = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(9);

    let mut ring_ok = true;
    let mut eval_ok = true;
    for _ in 0..200 {
        let (a, b, c) = (random_scalar(&mut rng), random_scalar(&mut rng), random_scalar(&mut rng));
        ring_ok &= &(&a + &b) + &c == &a + &(&b + &c)
            && &a + &b == &b + &a
            && &(&a * &b) * &c == &a * &(&b * &c)
            && &a * &b == &b * &a
            && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
            && &a * &LocRat::one() == a
            && (&a - &a).is_zero();
        for q in [2u64, 3, 5, 7, 13] {
            let (ea, eb) = (a.eval_at_int(q).unwrap(), b.eval_at_int(q).unwrap());
            eval_ok &= (&a * &b).eval_at_int(q).unwrap() == &ea * &eb && (&a + &b).eval_at_int(q).unwrap() == ea + eb;
        }
    }
    o.check(ring_ok, "ring axioms on 200 random triples of localized scalars");
    o.check(eval_ok, "L = q is a ring homomorphism for q in {2, 3, 5, 7, 13}");

    let mut confluent = true;
    let mut exprs = 0;
    while exprs < 200 {
        let e = random_expr(&mut rng, 4);
        if e.size() > 50 {
            continue;
        }
        exprs += 1;
        let want = e.eval();
        for order in 0..3u64 {
            let mut pick = ChaCha8Rng::seed_from_u64(100 + order);
            let mut choose = |n: usize| if order == 0 { n - 1 } else { pick.gen_range(0..n) };
            let (nf, _) = rewrite(e.clone(), &mut choose, 200_000);
            confluent &= read_normal(&nf).map(|g| g == want).unwrap_or(false);
        }
    }
    o.check(confluent, format!("rewriting reaches one normal form in three redex orders, {exprs} expressions"));

    let (c2, c3) = (ordered_cells(2).len(), ordered_cells(3).len());
    o.check(c2 == 3 && c3 == 13, format!("ordered cells: {c2} for r = 2, {c3} for r = 3"));

    let serial = || -> Result<bool, VerifyError> {
        let f = fp(7);
        let zero = CountVal::zero(f);
        let t = zeta_trunc(&parse_poly("x^2 + y^3")?, &BasePoint::Origin, f, 8, DEFAULT_BUDGET)?;
        let t_ok = from_json(&trunc_to_json(&t, &zero), &zero)? == AnySeries::Trunc(t.clone());
        let z = fit_zeta(&parse_poly("x^3")?, f, DEFAULT_BUDGET)?.closed;
        let z_ok = from_json(&closed_to_json(&z, &zero), &zero)? == AnySeries::Closed(z.clone());
        let d = dl_eval(&ResolutionData::single("mu_2", 2, 2, 1), None)?;
        let s = SymbolicClass::zero();
        let d_ok = from_json(&closed_to_json(&d, &s), &s)? == AnySeries::Closed(d.clone());
        let r = verify::reflexion::check_reflexion_uni(&parse_poly("x")?, &parse_poly("y^2")?, 5, 3, DEFAULT_BUDGET)?;
        let r_ok = CheckReport::from_json(&r.to_json())? == r;
        let c_ok = cases_from_json(&cases_to_json(&suite()))? == suite();
        Ok(t_ok && z_ok && d_ok && r_ok && c_ok)
    };
    match serial() {
        Ok(ok) => o.check(ok, "series, reports and cases survive a JSON round trip"),
        Err(e) => o.check(false, format!("serialization: {e}")),
    }

    let cases = vec![
        CheckCase::new(CheckId::ReflexionUni, &[&["x^2"], &["y^3"]], &[7], 4),
        CheckCase::new(CheckId::PhiAuto, &[], &[7], 6),
        CheckCase::new(CheckId::ThreeFunction, &[&["x"], &["y"], &["z"]], &[5], 3),
    ];
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let reports: Vec<CheckReport> = run_cases(&cases, DEFAULT_BUDGET, false).into_iter().flat_map(|r| r.unwrap()).collect();
            let jets = jet_counts(&parse_poly("x^2 + y^3").unwrap(), &BasePoint::Origin, fp(13), 6, DEFAULT_BUDGET).unwrap();
            (reports_to_json(&reports), jets)
        })
    };
    let (one, four) = (run(1), run(4));
    o.check(one == four, "reports and jet counts are identical on 1 and 4 workers");
    o
}

#[test]
fn acceptance() {
    let grouped = criterion_cases();
    let cases: Vec<CheckCase> = grouped.iter().map(|(_, c)| c.clone()).collect();
    let results = run_cases(&cases, DEFAULT_BUDGET, false);
    let of = |k: usize| -> Vec<Result<Vec<CheckReport>, VerifyError>> {
        grouped.iter().zip(&results).filter(|((c, _), _)| *c == k).map(|(_, r)| r.clone()).collect()
    };

    let mut outcomes: Vec<(usize, &str, Outcome)> = Vec::new();
    for (k, title) in [
        (1, "Euler reflexion"),
        (2, "order splits of the sum"),
        (3, "Thom-Sebastiani"),
        (4, "limit commutes with the product"),
        (5, "Phi automorphism"),
    ] {
        let mut o = Outcome::new();
        o.reports(&of(k));
        outcomes.push((k, title, o));
    }
    outcomes.push((6, "Denef-Loeser consistency", dl_consistency()));
    let done: Vec<&CheckReport> =
        results.iter().filter_map(|r| r.as_ref().ok()).flatten().filter(|r| r.id != CheckId::ThreeFunction).collect();
    outcomes.push((7, "integrability bookkeeping", integrability(&done)));
    let mut o = Outcome::new();
    o.reports(&of(8));
    patterns(&mut o);
    outcomes.push((8, "multivariate reflexion and associativity", o));
    outcomes.push((9, "infrastructure", infrastructure()));

    for (k, title, o) in &outcomes {
        println!("criterion {k} {}: {title}", if o.pass { "PASS" } else { "FAIL" });
        for l in &o.lines {
            println!("    {l}");
        }
    }
    let failed: Vec<usize> = outcomes.iter().filter(|(_, _, o)| !o.pass).map(|(k, _, _)| *k).collect();
    assert!(failed.is_empty(), "criteria failing: {failed:?}");
}
