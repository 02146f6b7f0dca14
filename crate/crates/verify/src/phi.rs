//! The automorphism `Phi`: round trips on random integrable series, and
//! `Phi^{-1}(Z^{Δ<}_f) = zeta_f` at counts.

use motclass::{CountVal, Fp, Poly};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use series::{ordered_cells, BoundMode, CellSeries, CellSpec, ProductTerm, Seq, TailBound, TruncSeries};
use zeta::multizeta_trunc;

use crate::fits::{fit_zeta, Fitted};
use crate::reflexion::exponents;
use crate::report::{CheckId, CheckReport, Realization};
use crate::VerifyError;

fn field(q: u64) -> Result<Fp, VerifyError> {
    Ok(Fp::new(q)?)
}

fn random_coeff(rng: &mut ChaCha8Rng, fld: Fp) -> CountVal {
    let divisors: Vec<u64> = (1..=fld.p - 1).filter(|d| (fld.p - 1) % d == 0 && *d <= 6).collect();
    let n = *divisors.choose(rng).expect("1 divides q - 1");
    let v: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
    CountVal::from_ints(fld, &v)
}

/// A sum of geometric strands `c T^b x / (1 - x)`, `x = L^m T^p` with
/// `m != 0`, plus a short polynomial; every such sequence has exact tails.
fn random_seq(rng: &mut ChaCha8Rng, fld: Fp) -> Seq<CountVal> {
    let zero = CountVal::zero(fld);
    let mut s = Seq::poly(&zero, (0..rng.gen_range(0..3)).map(|_| random_coeff(rng, fld)).collect());
    for _ in 0..rng.gen_range(1..=2) {
        let m = *[-2i64, -1, 1, 2].choose(rng).expect("nonempty");
        let g = Seq::geometric(&random_coeff(rng, fld), rng.gen_range(0..2), m, rng.gen_range(1..=3));
        s = s.add(&g);
    }
    s
}

/// A random integrable series in `r` variables in product form on one to
/// three ordered cells.
pub fn random_cell_series(rng: &mut ChaCha8Rng, fld: Fp, r: usize) -> CellSeries<CountVal> {
    let vars = (1..=r).map(|i| format!("T{i}")).collect();
    let mut out = CellSeries::new(vars, &CountVal::zero(fld));
    let cells = ordered_cells(r);
    for _ in 0..rng.gen_range(1..=3) {
        let cell = cells.choose(rng).expect("cells exist").clone();
        let factors = (0..cell.blocks().len()).map(|_| random_seq(rng, fld)).collect();
        out.push(cell, ProductTerm::new(factors));
    }
    out
}

fn push_all(
    rep: &mut CheckReport,
    label: &str,
    lhs: &TruncSeries<CountVal>,
    rhs: &TruncSeries<CountVal>,
    degree: u32,
    zero: &CountVal,
) {
    for e in exponents(lhs.nvars(), degree) {
        rep.push(e.clone(), label, &lhs.coeff_or(&e, zero), &rhs.coeff_or(&e, zero));
    }
}

/// `Phi^{-1} Phi = Phi Phi^{-1} = id` with tails over `l > 0`, on `samples`
/// random series alternating `r = 2, 3`, through total degree `degree`. The
/// round trips with tails over `l > 1` are counted in the notes.
pub fn check_phi_roundtrip(samples: usize, seed: u64, q: u64, degree: u32) -> Result<CheckReport, VerifyError> {
    let fld = field(q)?;
    let zero = CountVal::zero(fld);
    let mut rep = CheckReport::new(
        CheckId::PhiAuto,
        format!("{samples} random series, r in {{2, 3}}, D = {degree}, seed {seed}"),
        Realization::Count,
        Some(q),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut one_holds = 0;
    for k in 0..samples {
        let r = 2 + k % 2;
        let a = random_cell_series(&mut rng, fld, r);
        let ea = a.expand(degree, BoundMode::Total);
        let back = a.phi()?.phi_inv(TailBound::Zero, false)?.expand(degree, BoundMode::Total);
        let forth = a.phi_inv(TailBound::Zero, false)?.phi()?.expand(degree, BoundMode::Total);
        push_all(&mut rep, &format!("sample {k}: Phi^-1 Phi"), &back, &ea, degree, &zero);
        push_all(&mut rep, &format!("sample {k}: Phi Phi^-1"), &forth, &ea, degree, &zero);
        let b1 = a.phi()?.phi_inv(TailBound::One, false)?.expand(degree, BoundMode::Total);
        let f1 = a.phi_inv(TailBound::One, false)?.phi()?.expand(degree, BoundMode::Total);
        if b1.agrees(&ea) && f1.agrees(&ea) {
            one_holds += 1;
        }
    }
    rep.note(format!("tails over l > 1: round trips hold on {one_holds} of {samples} samples"));
    Ok(rep)
}

/// `Z^{Δ<}_f`: the product of the `Z_{f_i}(T_i)` on the cell `n_1 < ... < n_r`.
pub fn z_delta(fitted: &[Fitted], fld: Fp) -> CellSeries<CountVal> {
    let r = fitted.len();
    let vars = (1..=r).map(|i| format!("T{i}")).collect();
    let mut out = CellSeries::new(vars, &CountVal::zero(fld));
    out.push(CellSpec::chain(r), ProductTerm::new(fitted.iter().map(|z| z.seq.clone()).collect()));
    out
}

/// `Phi^{-1}(Z^{Δ<}_f) = zeta_f` through `|n| <= degree`, with the standard
/// inverse (plain tails over `l > 0`). The other tail variants are compared
/// too and reported in the notes.
pub fn check_phi_zeta(family: &[Poly], q: u64, degree: u32, budget: u64) -> Result<CheckReport, VerifyError> {
    let fld = field(q)?;
    let zero = CountVal::zero(fld);
    let names: Vec<String> = family.iter().map(|f| f.to_string()).collect();
    let mut rep = CheckReport::new(
        CheckId::PhiAuto,
        format!("Phi^-1(Z^<) = zeta for ({}), D = {degree}", names.join(", ")),
        Realization::Count,
        Some(q),
    );
    let fitted: Vec<Fitted> = family.iter().map(|f| fit_zeta(f, fld, budget)).collect::<Result<_, _>>()?;
    for (f, z) in family.iter().zip(&fitted) {
        rep.fits.push(z.note(&format!("Z_{{{f}}}")));
    }
    let zd = z_delta(&fitted, fld);
    let want = multizeta_trunc(family, fld, degree, budget)?;
    let plain = zd.phi_inv(TailBound::Zero, false)?.expand(degree, BoundMode::Total);
    push_all(&mut rep, "", &plain, &want, degree, &zero);
    for (bound, augment, name) in [
        (TailBound::One, false, "l > 1"),
        (TailBound::Zero, true, "l > 0 augmented"),
        (TailBound::One, true, "l > 1 augmented"),
    ] {
        let got = zd.phi_inv(bound, augment)?.expand(degree, BoundMode::Total);
        let good = exponents(got.nvars(), degree).iter().all(|e| got.coeff_or(e, &zero) == want.coeff_or(e, &zero));
        rep.note(format!("tails over {name}: {}", if good { "equal" } else { "differ" }));
    }
    Ok(rep)
}
