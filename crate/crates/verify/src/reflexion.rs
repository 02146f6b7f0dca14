//! Reflexion formulas: univariate, multivariate and for three functions, and
//! the order splits of the `f + g` coefficients.

use std::collections::BTreeSet;

use boxast::{boxast_multi, boxast_uni, from_seq, PhiOptions};
use motclass::{Coeff, CountVal, Fp, Poly};
use series::{BoundMode, CellSeries, CellSpec, ProductTerm, Scalar, SeriesCoeff, TruncSeries};
use zeta::{jet_counts, multizeta_trunc, sum_split, sum_zeta_pullback, BasePoint, SumMode};

use crate::fits::{fit_zeta, Fitted};
use crate::report::{CheckId, CheckReport, Realization};
use crate::VerifyError;

/// All exponent vectors in `r` variables with total degree at most `bound`.
pub fn exponents(r: usize, bound: u32) -> Vec<Vec<u32>> {
    fn rec(r: usize, left: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if acc.len() == r {
            out.push(acc.clone());
            return;
        }
        for k in 0..=left {
            acc.push(k);
            rec(r, left - k, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(r, bound, &mut Vec::new(), &mut out);
    out
}

fn field(q: u64) -> Result<Fp, VerifyError> {
    Ok(Fp::new(q)?)
}

/// `zeta_f(T) ⊠∗ zeta_g(U)` against
/// `zeta_{f,g}(T,U) + zeta_{g,f}(U,T) + iota^* zeta_{f+g}(TU)`, for all
/// `n + m <= degree`.
pub fn check_reflexion_uni(f: &Poly, g: &Poly, q: u64, degree: u32, budget: u64) -> Result<CheckReport, VerifyError> {
    let fld = field(q)?;
    let zero = CountVal::zero(fld);
    let mut rep = CheckReport::new(
        CheckId::ReflexionUni,
        format!("f = {f}, g = {g}, D = {degree}"),
        Realization::Count,
        Some(q),
    );
    let za = fit_zeta(f, fld, budget)?;
    let zb = fit_zeta(g, fld, budget)?;
    rep.fits.push(za.note("Z_f"));
    rep.fits.push(zb.note("Z_g"));
    rep.note(format!("Z_f fitted from {} orders, Z_g from {}", za.degree, zb.degree));
    let lhs = boxast_uni(&za.seq, &zb.seq, "T", "U")?.expand(degree, BoundMode::Total);
    let fg = multizeta_trunc(&[f.clone(), g.clone()], fld, degree, budget)?;
    let gf = multizeta_trunc(&[g.clone(), f.clone()], fld, degree, budget)?;
    let sum = sum_zeta_pullback(f, g, fld, degree, budget, SumMode::Histogram)?;
    for e in exponents(2, degree) {
        let (n, m) = (e[0], e[1]);
        let rhs = if n < m {
            fg.coeff_or(&[n, m], &zero)
        } else if n > m {
            gf.coeff_or(&[m, n], &zero)
        } else {
            sum.coeff_or(&[n], &zero)
        };
        rep.push(e.clone(), "", &lhs.coeff_or(&e, &zero), &rhs);
    }
    Ok(rep)
}

/// The three parts of the `f + g` coefficient at order `n`, by how the orders
/// of `f` and `g` compare, against
/// `a_n *_1 b_n`, `(L-1) sum_{l>n} (a_n x b'_l + a'_l x b_n)` and
/// `sum_{l<n} L^{l-n} a_l *_0 b_l`.
pub fn check_order_splits(f: &Poly, g: &Poly, q: u64, nmax: u32, budget: u64) -> Result<CheckReport, VerifyError> {
    let fld = field(q)?;
    let mut rep = CheckReport::new(
        CheckId::OrderSplits,
        format!("f = {f}, g = {g}, n <= {nmax}"),
        Realization::Count,
        Some(q),
    );
    let ca = jet_counts(f, &BasePoint::Origin, fld, nmax, budget)?;
    let cb = jet_counts(g, &BasePoint::Origin, fld, nmax, budget)?;
    let za = fit_zeta(f, fld, budget)?;
    let zb = fit_zeta(g, fld, budget)?;
    rep.fits.push(za.note("Z_f"));
    rep.fits.push(zb.note("Z_g"));
    let zero = CountVal::zero(fld);
    let lm1 = zero.l_pow(1).sub(&<CountVal as SeriesCoeff>::S::one());
    let ta = za.seq.map(|c| c.augment()).tail(0)?;
    let tb = zb.seq.map(|c| c.augment()).tail(0)?;
    for n in 1..=nmax {
        let s = sum_split(f, g, fld, n, budget)?;
        let (an, bn) = (ca.coeff(n), cb.coeff(n));
        rep.push(vec![n], "A1", &s.a1, &an.conv1(&bn));
        let a2 = an.ext_mul(&tb.coeff(n as usize)).add(&ta.coeff(n as usize).ext_mul(&bn)).mul_s(&lm1);
        rep.push(vec![n], "A2", &s.a2, &a2);
        let mut a3 = zero.clone();
        for l in 1..n {
            a3 = a3.add(&ca.coeff(l).conv0(&cb.coeff(l)).mul_s(&zero.l_pow(l as i64 - n as i64)));
        }
        rep.push(vec![n], "A3", &s.a3, &a3);
    }
    Ok(rep)
}

/// Ordered families for the generalized reflexion formula: sequences of
/// blocks, each block taking at most one function from each family, the
/// functions of every family used once each and in order. Block entries are
/// `(family, index)`.
pub fn admissible_families(sizes: &[usize]) -> Vec<Vec<Vec<(usize, usize)>>> {
    fn rec(sizes: &[usize], used: &mut Vec<usize>, acc: &mut Vec<Vec<(usize, usize)>>, out: &mut Vec<Vec<Vec<(usize, usize)>>>) {
        let open: Vec<usize> = (0..sizes.len()).filter(|&k| used[k] < sizes[k]).collect();
        if open.is_empty() {
            out.push(acc.clone());
            return;
        }
        // nonempty subsets of the families that still have functions left
        for mask in 1u32..(1 << open.len()) {
            let pick: Vec<usize> = open.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &k)| k).collect();
            acc.push(pick.iter().map(|&k| (k, used[k])).collect());
            for &k in &pick {
                used[k] += 1;
            }
            rec(sizes, used, acc, out);
            for &k in &pick {
                used[k] -= 1;
            }
            acc.pop();
        }
    }
    let mut out = Vec::new();
    rec(sizes, &mut vec![0; sizes.len()], &mut Vec::new(), &mut out);
    out
}

const LETTERS: [&str; 8] = ["T", "U", "V", "W", "X", "Y", "Z", "S"];

/// Variable names: one letter per family, indexed when a family has more
/// than one function.
pub fn family_vars(sizes: &[usize]) -> Vec<Vec<String>> {
    sizes
        .iter()
        .enumerate()
        .map(|(k, &r)| {
            let l = LETTERS[k % LETTERS.len()];
            if r == 1 {
                vec![l.to_string()]
            } else {
                (1..=r).map(|i| format!("{l}{i}")).collect()
            }
        })
        .collect()
}

/// `f_1 + ... + f_k` on the product of their spaces; variables are renamed
/// apart when two summands share a name.
pub fn oplus(fs: &[&Poly]) -> Poly {
    let mut seen = BTreeSet::new();
    let clash = fs.iter().any(|f| f.vars().iter().any(|v| !seen.insert(v.clone())));
    fs.iter().enumerate().fold(Poly::zero(), |acc, (k, f)| {
        if clash {
            let names: Vec<String> = f.vars().iter().map(|v| format!("{v}_{k}")).collect();
            let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
            acc.add(&f.rename(&refs))
        } else {
            acc.add(f)
        }
    })
}

/// `zeta_f` of a family as a one-cell series: the leading factor is `Z_{f_1}`
/// and each trailing factor is `(L-1) sum_{l>0} Z_{f_i}'_{n+l}`, the class of
/// `{ord f_i > n}`.
pub fn multizeta_cells(fitted: &[Fitted], vars: Vec<String>) -> Result<CellSeries<CountVal>, VerifyError> {
    let zero = fitted[0].seq.zero_coeff().clone();
    let lm1 = zero.l_pow(1).sub(&<CountVal as SeriesCoeff>::S::one());
    let mut factors = vec![fitted[0].seq.clone()];
    for z in &fitted[1..] {
        factors.push(z.seq.map(|c| c.augment()).tail(0)?.scale_s(&lm1));
    }
    let mut out = CellSeries::new(vars, &zero);
    out.push(CellSpec::chain(fitted.len()), ProductTerm::new(factors));
    Ok(out)
}

/// Sum over admissible families of `iota^* zeta_p` with the monomial
/// substitution of each block, in the joint variables.
fn reflexion_rhs(
    families: &[Vec<Poly>],
    vars: &[Vec<String>],
    fld: Fp,
    degree: u32,
    budget: u64,
) -> Result<(TruncSeries<CountVal>, usize), VerifyError> {
    let sizes: Vec<usize> = families.iter().map(|f| f.len()).collect();
    let all: Vec<String> = vars.iter().flatten().cloned().collect();
    let offset: Vec<usize> = sizes.iter().scan(0, |s, &r| {
        let o = *s;
        *s += r;
        Some(o)
    }).collect();
    let pats = admissible_families(&sizes);
    let mut out = TruncSeries::with_mode(all.clone(), degree, BoundMode::Total);
    for pat in &pats {
        let ps: Vec<Poly> = pat.iter().map(|blk| oplus(&blk.iter().map(|&(k, i)| &families[k][i]).collect::<Vec<_>>())).collect();
        let z = multizeta_trunc(&ps, fld, degree, budget)?;
        let subs: Vec<Vec<u32>> = pat
            .iter()
            .map(|blk| {
                let mut s = vec![0u32; all.len()];
                for &(k, i) in blk {
                    s[offset[k] + i] = 1;
                }
                s
            })
            .collect();
        out = out.add(&z.substitute(all.clone(), &subs, degree))?;
    }
    Ok((out, pats.len()))
}

fn family_text(families: &[Vec<Poly>]) -> String {
    families
        .iter()
        .map(|f| format!("({})", f.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join(" ⊠∗ ")
}

fn lhs_fold(
    cells: &[CellSeries<CountVal>],
    opts: PhiOptions,
    right: bool,
) -> Result<CellSeries<CountVal>, VerifyError> {
    if right {
        let mut acc = cells.last().expect("at least one family").clone();
        for c in cells[..cells.len() - 1].iter().rev() {
            acc = boxast_multi(c, &acc, opts)?;
        }
        Ok(acc)
    } else {
        let mut acc = cells[0].clone();
        for c in &cells[1..] {
            acc = boxast_multi(&acc, c, opts)?;
        }
        Ok(acc)
    }
}

fn family_cells(
    families: &[Vec<Poly>],
    vars: &[Vec<String>],
    fld: Fp,
    budget: u64,
    rep: &mut CheckReport,
) -> Result<Vec<CellSeries<CountVal>>, VerifyError> {
    let mut cells = Vec::new();
    for (k, fam) in families.iter().enumerate() {
        if fam.is_empty() {
            return Err(VerifyError::Invalid(format!("family {k} is empty")));
        }
        let fitted: Vec<Fitted> = fam.iter().map(|f| fit_zeta(f, fld, budget)).collect::<Result<_, _>>()?;
        for (i, z) in fitted.iter().enumerate() {
            rep.fits.push(z.note(&format!("Z_{{{}}}", fam[i])));
        }
        cells.push(if fam.len() == 1 {
            from_seq(&fitted[0].seq, &vars[k][0])
        } else {
            multizeta_cells(&fitted, vars[k].clone())?
        });
    }
    Ok(cells)
}

/// Left-bracketed `zeta_{f^1} ⊠∗ ... ⊠∗ zeta_{f^k}` against the sum over
/// admissible families, coefficientwise through total degree `degree`.
pub fn check_reflexion_multi(
    families: &[Vec<Poly>],
    q: u64,
    degree: u32,
    budget: u64,
    opts: PhiOptions,
) -> Result<CheckReport, VerifyError> {
    if families.len() < 2 {
        return Err(VerifyError::Invalid("reflexion needs at least two families".into()));
    }
    let fld = field(q)?;
    let zero = CountVal::zero(fld);
    let sizes: Vec<usize> = families.iter().map(|f| f.len()).collect();
    let vars = family_vars(&sizes);
    let mut rep = CheckReport::new(
        CheckId::ReflexionMulti,
        format!("{}, D = {degree}", family_text(families)),
        Realization::Count,
        Some(q),
    );
    let cells = family_cells(families, &vars, fld, budget, &mut rep)?;
    let lhs = lhs_fold(&cells, opts, false)?.expand(degree, BoundMode::Total);
    let (rhs, terms) = reflexion_rhs(families, &vars, fld, degree, budget)?;
    rep.note(format!("{terms} admissible families"));
    for e in exponents(lhs.nvars(), degree) {
        rep.push(e.clone(), "", &lhs.coeff_or(&e, &zero), &rhs.coeff_or(&e, &zero));
    }
    Ok(rep)
}

/// `zeta_f(T) ⊠∗ zeta_g(U) ⊠∗ zeta_h(V)` against its thirteen-term expansion,
/// and the two bracketings against each other.
pub fn check_three_function(
    f: &Poly,
    g: &Poly,
    h: &Poly,
    q: u64,
    degree: u32,
    budget: u64,
) -> Result<CheckReport, VerifyError> {
    let fld = field(q)?;
    let zero = CountVal::zero(fld);
    let families = vec![vec![f.clone()], vec![g.clone()], vec![h.clone()]];
    let vars = family_vars(&[1, 1, 1]);
    let mut rep = CheckReport::new(
        CheckId::ThreeFunction,
        format!("f = {f}, g = {g}, h = {h}, D = {degree}"),
        Realization::Count,
        Some(q),
    );
    let cells = family_cells(&families, &vars, fld, budget, &mut rep)?;
    let opts = PhiOptions::default();
    let left = lhs_fold(&cells, opts, false)?.expand(degree, BoundMode::Total);
    let right = lhs_fold(&cells, opts, true)?.expand(degree, BoundMode::Total);
    let (rhs, terms) = reflexion_rhs(&families, &vars, fld, degree, budget)?;
    rep.note(format!("{terms} admissible families"));
    for e in exponents(3, degree) {
        let l = left.coeff_or(&e, &zero);
        rep.push(e.clone(), "(fg)h = sum", &l, &rhs.coeff_or(&e, &zero));
        rep.push(e.clone(), "(fg)h = f(gh)", &l, &right.coeff_or(&e, &zero));
    }
    Ok(rep)
}
