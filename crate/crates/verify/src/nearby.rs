//! Limits: the local Thom-Sebastiani formula, the limits of the two-function
//! zeta functions, and commutation of the limit with the product.

use boxast::boxast_uni;
use locring::LocRat;
use motclass::{bind, lcm, Coeff, CountVal, Fp, Poly, SymbolicClass};
use num_traits::ToPrimitive;
use series::{ClosedSeries, Seq, SeriesCoeff, Strand};
use zeta::{
    mu_atom, mu_binding, multizeta_trunc, nearby_cycles, sum_zeta_monomials, sum_zeta_pullback, zeta_closed,
    zeta_fit, SumMode,
};

use crate::fits::{fit_zeta, seq_note, term_lcm};
use crate::report::{CheckId, CheckReport, Realization};
use crate::VerifyError;

fn field(q: u64) -> Result<Fp, VerifyError> {
    Ok(Fp::new(q)?)
}

fn monomial_exponent(f: &Poly) -> Result<u32, VerifyError> {
    match (f.nvars(), f.degrees().as_slice()) {
        (1, [a]) => Ok(*a),
        _ => Err(VerifyError::Invalid(format!("{f} is not a monomial in one variable"))),
    }
}

/// `S_{f+g} = -S_f * S_g + S_f + S_g` with `S = -lim Z`, for `f = x^a` and
/// `g = y^b`. `Z_{f+g}` is the exact closed form, which is first compared
/// with direct counts through `2 lcm(a, b) + 3`.
pub fn check_thom_sebastiani(f: &Poly, g: &Poly, q: u64, budget: u64) -> Result<CheckReport, VerifyError> {
    let fld = field(q)?;
    let zero = CountVal::zero(fld);
    let mut rep = CheckReport::new(CheckId::ThomSebastiani, format!("f = {f}, g = {g}"), Realization::Count, Some(q));
    let c = lcm(monomial_exponent(f)? as u64, monomial_exponent(g)? as u64) as u32;
    let za = fit_zeta(f, fld, budget)?;
    let zb = fit_zeta(g, fld, budget)?;
    rep.fits.push(za.note("Z_f"));
    rep.fits.push(zb.note("Z_g"));
    let zs = sum_zeta_monomials(f, g, fld, budget)?;
    rep.fits.push(seq_note("Z_{f+g}", &zs, c, 1)?);
    let check_to = 2 * c + 3;
    let direct = sum_zeta_pullback(f, g, fld, check_to, budget, SumMode::Direct)?;
    for n in 1..=check_to {
        rep.push(vec![n], "Z_{f+g}", &zs.coeff(n as usize), &direct.coeff_or(&[n], &zero));
    }
    let sf = za.seq.lim()?.neg();
    let sg = zb.seq.lim()?.neg();
    let lhs = zs.lim()?.neg();
    let rhs = Coeff::conv(&sf, &sg).neg().add(&sf).add(&sg);
    rep.push(vec![], "S_{f+g}", &lhs, &rhs);
    Ok(rep)
}

/// A closed series at counts whose coefficients are integers, read as a
/// series of scalar classes.
pub fn lift_integral(z: &ClosedSeries<CountVal>) -> Option<ClosedSeries<SymbolicClass>> {
    let mut out = ClosedSeries::new(z.vars.clone());
    for s in &z.strands {
        let v = s.coeff.values();
        if v.len() != 1 || !v[0].is_integer() {
            return None;
        }
        let c = SymbolicClass::scalar(LocRat::int(v[0].to_integer().to_i64()?));
        let mut t = Strand::new(c, s.b.clone(), s.factors.clone());
        t.support = s.support.clone();
        out.push(t);
    }
    Some(out)
}

/// The symbolic formula for `f = x`, `g = y`: `Z_x` and `Z_y` in closed form,
/// `Z_{x+y}` fitted at counts and lifted, since its coefficients are integral.
pub fn check_thom_sebastiani_symbolic(q: u64, budget: u64) -> Result<CheckReport, VerifyError> {
    let fld = field(q)?;
    let zero = SymbolicClass::zero();
    let mut rep = CheckReport::new(CheckId::ThomSebastiani, "f = x, g = y", Realization::Symbolic, Some(q));
    let x = motclass::parse_poly("x")?;
    let y = motclass::parse_poly("y")?;
    let sf = nearby_cycles(&zeta_closed(&x)?, &zero)?;
    let sg = nearby_cycles(&zeta_closed(&y)?, &zero)?;
    let zs = fit_zeta(&x.add(&y), fld, budget)?;
    rep.fits.push(zs.note("Z_{x+y}"));
    let lifted = lift_integral(&zs.closed)
        .ok_or_else(|| VerifyError::Invalid("Z_{x+y} has non-integral coefficients".into()))?;
    let lhs = nearby_cycles(&lifted, &zero)?;
    let rhs = Coeff::conv(&sf, &sg).neg().add(&sf).add(&sg);
    rep.push(vec![], "S_{x+y}", &lhs, &rhs);
    Ok(rep)
}

/// `S_{f,g} = -S_f` and `S_{g,f} = -S_g`, where `S_{f,g}` is minus the limit
/// of the diagonal of `zeta_{f,g}`, fitted from counts.
pub fn check_lm23(f: &Poly, g: &Poly, q: u64, budget: u64) -> Result<CheckReport, VerifyError> {
    let fld = field(q)?;
    let zero = CountVal::zero(fld);
    let mut rep = CheckReport::new(CheckId::Lm23, format!("f = {f}, g = {g}"), Realization::Count, Some(q));
    // the diagonal sums over n_1 + n_2 = k, so parities of k separate
    let period = 2 * term_lcm(&[f.clone(), g.clone()]) as u32;
    let degree = 12 * period + 24;
    let za = fit_zeta(f, fld, budget)?;
    let zb = fit_zeta(g, fld, budget)?;
    rep.fits.push(za.note("Z_f"));
    rep.fits.push(zb.note("Z_g"));
    for (name, fam, s) in [("S_{f,g}", [f.clone(), g.clone()], &za), ("S_{g,f}", [g.clone(), f.clone()], &zb)] {
        let diag = multizeta_trunc(&fam, fld, degree, budget)?.diagonal("T");
        let closed = zeta_fit(&diag, &zero, period, 2)?;
        rep.fits.push(crate::report::FitNote {
            name: format!("diagonal of zeta_{{{}, {}}}", fam[0], fam[1]),
            class: closed.classify().to_string(),
            strands: closed.strands.len(),
        });
        let lhs = closed.to_seq(&zero)?.lim()?.neg();
        rep.push(vec![], name, &lhs, &s.seq.lim()?);
    }
    rep.note(format!("diagonals fitted from {degree} orders"));
    Ok(rep)
}

/// `lim (a ⊠∗ b) = lim a * lim b` on pairs `a = [mu_r] L^{-1} T^r / (1 - L^{-1} T^r)`.
fn commutation_pairs<C: SeriesCoeff>(
    rep: &mut CheckReport,
    orders: &[u64],
    coeff: impl Fn(u64) -> Result<C, VerifyError>,
) -> Result<(), VerifyError>
where
    C: series::CoeffText,
{
    for &ra in orders {
        for &rb in orders {
            let a = Seq::geometric(&coeff(ra)?, 0, -1, ra as usize);
            let b = Seq::geometric(&coeff(rb)?, 0, -1, rb as usize);
            let lhs = boxast_uni(&a, &b, "T", "U")?.diagonal_seq()?.lim()?;
            let rhs = Coeff::conv(&a.lim()?, &b.lim()?);
            rep.push(vec![ra as u32, rb as u32], "", &lhs, &rhs);
        }
    }
    Ok(())
}

/// Commutation of the limit with `⊠∗` on the classes `[mu_r]`, `r` in
/// `orders`, symbolically.
pub fn check_commutation(orders: &[u64]) -> Result<CheckReport, VerifyError> {
    let list: Vec<String> = orders.iter().map(|r| r.to_string()).collect();
    let mut rep =
        CheckReport::new(CheckId::Commutation, format!("orders {}", list.join(", ")), Realization::Symbolic, None);
    commutation_pairs(&mut rep, orders, |r| Ok(mu_atom(r)))?;
    Ok(rep)
}

/// The same at counts over `F_q`, with `[mu_r]` bound to its presentation.
pub fn check_commutation_counts(orders: &[u64], q: u64, budget: u64) -> Result<CheckReport, VerifyError> {
    let fld = field(q)?;
    let binding = mu_binding(orders);
    let list: Vec<String> = orders.iter().map(|r| r.to_string()).collect();
    let mut rep =
        CheckReport::new(CheckId::Commutation, format!("orders {}", list.join(", ")), Realization::Count, Some(q));
    commutation_pairs(&mut rep, orders, |r| Ok(bind(&mu_atom(r), &binding, fld, budget)?))?;
    Ok(rep)
}
