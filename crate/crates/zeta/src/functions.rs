//! Zeta functions as truncated series of twist vectors.

use std::collections::HashMap;

use motclass::{gcd, lcm, Coeff, CountVal, Fp, MotError, Poly, SymbolicClass};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use series::{strand_fit, BoundMode, ClosedSeries, GeomFactor, Seq, SeriesCoeff, Strand, TruncSeries};

use crate::jets::{decode, disjoint, encode, jet_counts, jet_histogram, multi_jet_set, BasePoint, JetCounts};
use crate::nearby::mu_atom;
use crate::ZetaError;

fn q_pow_inv(field: Fp, e: usize) -> BigRational {
    BigRational::new(BigInt::from(1), num_traits::pow(BigInt::from(field.p), e))
}

fn counts_to_val(field: Fp, v: &[BigInt], scale_exp: usize) -> CountVal {
    let s = q_pow_inv(field, scale_exp);
    CountVal::new(field, v.iter().map(|x| BigRational::from_integer(x.clone()) * &s).collect())
}

impl JetCounts {
    /// `[X_n(f)] L^{-nd}` at counts.
    pub fn coeff(&self, n: u32) -> CountVal {
        counts_to_val(self.field, &self.exact[n as usize], n as usize * self.d)
    }

    /// `[{phi : ord f(phi) > n}] L^{-nd}`, with trivial action.
    pub fn beyond_coeff(&self, n: u32) -> CountVal {
        counts_to_val(self.field, &self.beyond[n as usize..=n as usize], n as usize * self.d)
    }
}

/// `Z_f(T)` through `T^degree` from jet counts at `base`.
pub fn zeta_trunc(
    f: &Poly,
    base: &BasePoint,
    field: Fp,
    degree: u32,
    budget: u64,
) -> Result<TruncSeries<CountVal>, ZetaError> {
    let c = jet_counts(f, base, field, degree, budget)?;
    let mut out = TruncSeries::with_mode(vec!["T".into()], degree, BoundMode::Total);
    for n in 1..=degree {
        out.set(vec![n], c.coeff(n));
    }
    Ok(out)
}

/// Closed strand form of a univariate truncated series: periods up to
/// `max_period`, ratio multiplicities up to `mult`. Every stored term is
/// reproduced by the result.
pub fn zeta_fit<C: SeriesCoeff>(
    t: &TruncSeries<C>,
    zero: &C,
    max_period: u32,
    mult: usize,
) -> Result<ClosedSeries<C>, ZetaError> {
    if t.nvars() != 1 {
        return Err(ZetaError::Unsupported("fitting needs a univariate series".into()));
    }
    let vals: Vec<C> = (0..=t.bound).map(|n| t.coeff_or(&[n], zero)).collect();
    let var = &t.vars[0];
    Ok(strand_fit(zero, var, &vals, None, max_period, mult, 2)?.series)
}

/// `Z_{x^a}(T) = [mu_a] L^{-1} T^a / (1 - L^{-1} T^a)` at the origin.
pub fn zeta_closed(f: &Poly) -> Result<ClosedSeries<SymbolicClass>, ZetaError> {
    let a = unit_monomial(f)
        .ok_or_else(|| ZetaError::Unsupported(format!("closed form only for monomials x^a, got {f}")))?;
    let s = Strand::new(mu_atom(a as u64), vec![0], vec![GeomFactor::new(-1, vec![a])]);
    Ok(ClosedSeries::single(vec!["T".into()], s))
}

fn chains(r: usize, degree: u32) -> Vec<Vec<u32>> {
    fn rec(r: usize, lo: u32, left: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if acc.len() == r {
            out.push(acc.clone());
            return;
        }
        let rest = (r - acc.len()) as u32;
        // the remaining entries are at least k, k+1, ...
        let mut k = lo;
        while k * rest + rest * (rest - 1) / 2 <= left {
            acc.push(k);
            rec(r, k + 1, left - k, acc, out);
            acc.pop();
            k += 1;
        }
    }
    let mut out = Vec::new();
    rec(r, 1, degree, &mut Vec::new(), &mut out);
    out
}

/// `zeta_f(T_1, ..., T_r)` for a family, at the origin, through total
/// degree `degree`: the coefficient at `n_1 < ... < n_r` is
/// `[D_n(f)] L^{-|n| d}`. Jets of length `|n|` split into the factors, and
/// beyond order `n_i` the coordinates of factor `i` are free, so each factor
/// contributes its own count.
pub fn multizeta_trunc(
    family: &[Poly],
    field: Fp,
    degree: u32,
    budget: u64,
) -> Result<TruncSeries<CountVal>, ZetaError> {
    if family.is_empty() {
        return Err(ZetaError::InvalidData("empty family".into()));
    }
    let counts: Vec<JetCounts> = family
        .iter()
        .map(|f| jet_counts(f, &BasePoint::Origin, field, degree, budget))
        .collect::<Result<_, _>>()?;
    let r = family.len();
    let vars = (1..=r).map(|i| format!("T{i}")).collect();
    let mut out = TruncSeries::with_mode(vars, degree, BoundMode::Total);
    for n in chains(r, degree) {
        let mut c = counts[0].coeff(n[0]);
        for (k, &ni) in counts[1..].iter().zip(&n[1..]) {
            c = c.ext_mul(&k.beyond_coeff(ni));
        }
        out.set(n, c);
    }
    Ok(out)
}

/// `[D_n(f)] L^{-|n| d}` at one exponent from the explicit presentation with
/// jets of length `|n|` in every factor.
pub fn multizeta_direct(family: &[Poly], n: &[u32], field: Fp, budget: u64) -> Result<CountVal, ZetaError> {
    if n.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ZetaError::InvalidData(format!("exponent {n:?} is not strictly increasing")));
    }
    let g = multi_jet_set(family, n)?;
    let v = g.count_val(field, budget)?;
    let len: u32 = n.iter().sum();
    let d: usize = family.iter().map(|f| f.nvars()).sum();
    Ok(v.scale_rat(&q_pow_inv(field, len as usize * d)))
}

/// How the pulled-back zeta function of `f + g` is counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumMode {
    /// jets of `f + g` directly
    Direct,
    /// jets of `f` and `g` bucketed by value, then paired
    Histogram,
}

/// `f + g` with `g` moved to fresh variables if the two share any.
fn sum_poly(f: &Poly, g: &Poly) -> Poly {
    if disjoint(&[f.clone(), g.clone()]).is_ok() {
        return f.add(g);
    }
    let names: Vec<String> = g.vars().iter().map(|v| format!("{v}_g")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    f.add(&g.rename(&refs))
}

/// `[iota^* X_n(f + g)] L^{-n d}` at counts, through `T^degree`, with jets
/// based at the origin of both factors.
pub fn sum_zeta_pullback(
    f: &Poly,
    g: &Poly,
    field: Fp,
    degree: u32,
    budget: u64,
    mode: SumMode,
) -> Result<TruncSeries<CountVal>, ZetaError> {
    let mut out = TruncSeries::with_mode(vec!["T".into()], degree, BoundMode::Total);
    match mode {
        SumMode::Direct => {
            let c = jet_counts(&sum_poly(f, g), &BasePoint::Origin, field, degree, budget)?;
            for n in 1..=degree {
                out.set(vec![n], c.coeff(n));
            }
        }
        SumMode::Histogram => {
            for n in 1..=degree {
                out.set(vec![n], sum_split(f, g, field, n, budget)?.total);
            }
        }
    }
    Ok(out)
}

/// Coefficient of the pulled-back zeta function of `f + g` at one order, split
/// by how the orders of `f(phi)` and `g(psi)` compare.
#[derive(Clone, Debug, PartialEq)]
pub struct SumSplit {
    pub total: CountVal,
    /// `ord f(phi) = ord g(psi) = n`
    pub a1: CountVal,
    /// the orders differ (one of them is `n`, the other above)
    pub a2: CountVal,
    /// `ord f(phi) = ord g(psi) < n`, cancelling
    pub a3: CountVal,
}

fn hist_order(c: &[u64]) -> Option<usize> {
    c.iter().position(|&x| x != 0).map(|i| i + 1)
}

/// [`SumSplit`] at order `n` by pairing value histograms of `f` and `g`.
pub fn sum_split(f: &Poly, g: &Poly, field: Fp, n: u32, budget: u64) -> Result<SumSplit, ZetaError> {
    let p = field.p;
    let hf = jet_histogram(f, &BasePoint::Origin, field, n, budget)?;
    let hg = jet_histogram(g, &BasePoint::Origin, field, n, budget)?;
    let width = gcd(n as u64, p - 1) as usize;
    let nn = n as usize;
    let mut parts = [vec![BigInt::zero(); width], vec![BigInt::zero(); width], vec![BigInt::zero(); width]];
    let decoded: HashMap<u64, Vec<u64>> = hf.keys().map(|&k| (k, decode(k, nn, p))).collect();
    for s in 0..width {
        let lead = field.omega_pow(s as i64);
        for (key, &cf) in &hf {
            let u = &decoded[key];
            let mut v: Vec<u64> = u.iter().map(|&x| (p - x) % p).collect();
            v[nn - 1] = (v[nn - 1] + lead) % p;
            let Some(&cg) = hg.get(&encode(&v, p)) else { continue };
            let (ou, ov) = (hist_order(u), hist_order(&v));
            let part = match (ou, ov) {
                (Some(a), Some(b)) if a == nn && b == nn => 0,
                (a, b) if a != b => 1,
                _ => 2,
            };
            parts[part][s] += BigInt::from(cf) * BigInt::from(cg);
        }
    }
    let d = f.nvars() + g.nvars();
    let val = |v: &[BigInt]| counts_to_val(field, v, nn * d);
    let [a1, a2, a3] = parts;
    let total: Vec<BigInt> = (0..width).map(|s| &a1[s] + &a2[s] + &a3[s]).collect();
    Ok(SumSplit { total: val(&total), a1: val(&a1), a2: val(&a2), a3: val(&a3) })
}

fn unit_monomial(f: &Poly) -> Option<u32> {
    let terms: Vec<_> = f.terms().collect();
    match (f.nvars(), terms.as_slice()) {
        (1, [(e, c)]) if **c == BigInt::from(1) && e[0] > 0 => Some(e[0]),
        _ => None,
    }
}

/// Closed form of the pulled-back zeta function of `x^a + y^b` at counts.
///
/// With `c = lcm(a, b)` and weights `w = c/a + c/b`, arcs with
/// `ord x >= c/a` and `ord y >= c/b` are `t^{c/a} x~, t^{c/b} y~` for
/// arbitrary arcs `x~, y~`, and `f` becomes `t^c f(x~, y~)`. All other arcs
/// have `ord f < c`. Splitting the rescaled arcs by base point gives
///
/// `Z = P + L^{-w} T^c (M + N L^{-1} T / (1 - L^{-1} T) + Z)`,
///
/// where `P` holds the coefficients below `T^c`, `M` is the twisted count of
/// `f = omega^s` on the plane and `N` counts the zeros of `f` other than the
/// origin, each smooth with coefficient `L^{-m}`.
pub fn sum_zeta_monomials(f: &Poly, g: &Poly, field: Fp, budget: u64) -> Result<Seq<CountVal>, ZetaError> {
    let (Some(a), Some(b)) = (unit_monomial(f), unit_monomial(g)) else {
        return Err(ZetaError::Unsupported(format!("closed sum form only for x^a + y^b, got {f} and {g}")));
    };
    let p = field.p;
    for e in [a, b] {
        if e as u64 % p == 0 {
            return Err(MotError::UnsupportedOrder { order: e as u64, p }.into());
        }
    }
    let c = lcm(a as u64, b as u64) as usize;
    let w = (c / a as usize + c / b as usize) as i64;
    let zero = CountVal::zero(field);

    let low = if c > 1 { sum_zeta_pullback(f, g, field, c as u32 - 1, budget, SumMode::Direct)? } else {
        TruncSeries::with_mode(vec!["T".into()], 0, BoundMode::Total)
    };
    // value histograms of x^a and y^b on F_q
    let mut hx = vec![0u64; p as usize];
    let mut hy = vec![0u64; p as usize];
    for x in 0..p {
        hx[field.pow(x, a as u64) as usize] += 1;
        hy[field.pow(x, b as u64) as usize] += 1;
    }
    let on = |t: u64| -> u64 { (0..p).map(|u| hx[u as usize] * hy[((t + p - u) % p) as usize]).sum() };
    let m = CountVal::new(
        field,
        (0..p - 1).map(|s| BigRational::from_integer(BigInt::from(on(field.omega_pow(s as i64))))).collect(),
    );
    let n0 = BigRational::from_integer(BigInt::from(on(0) - 1));

    let lw = zero.l_pow(-w);
    let l1 = zero.l_pow(-1);
    let one = BigRational::from_integer(BigInt::from(1));
    // numerator P (1 - L^{-1} T) + L^{-w} T^c (M (1 - L^{-1} T) + N L^{-1} T)
    let mut num = vec![zero.clone(); c + 2];
    for n in 1..c {
        let pn = low.coeff_or(&[n as u32], &zero);
        num[n] = num[n].add(&pn);
        num[n + 1] = num[n + 1].sub(&pn.scale_rat(&l1));
    }
    num[c] = num[c].add(&m.scale_rat(&lw));
    let top = CountVal::constant(field, &n0 * &l1).sub(&m.scale_rat(&l1));
    num[c + 1] = num[c + 1].add(&top.scale_rat(&lw));
    // (1 - L^{-w} T^c)(1 - L^{-1} T)
    let mut den = vec![BigRational::zero(); c + 2];
    den[0] = one;
    den[1] = -l1.clone();
    den[c] -= &lw;
    den[c + 1] += &lw * &l1;
    Ok(Seq::new(&zero, num, den))
}
