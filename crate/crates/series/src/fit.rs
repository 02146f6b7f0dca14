use std::collections::{BTreeMap, BTreeSet};

use crate::closed::{Class, ClosedSeries, GeomFactor, Strand};
use crate::coeff::{joint_width, SeriesCoeff};
use crate::field::Field;
use crate::fpoly::FPoly;
use crate::seq::Seq;
use crate::SeriesError;

/// Largest `|m|` tried for a ratio `L^m`.
const MAX_EXPONENT: i64 = 64;

/// Closed strand form of an eventually geometric sequence.
#[derive(Clone, Debug)]
pub struct StrandFit<C> {
    pub period: u32,
    pub series: ClosedSeries<C>,
}

impl<C: SeriesCoeff> StrandFit<C> {
    pub fn classify(&self) -> Class {
        self.series.classify()
    }
}

/// Fit `vals` (coefficients of `T^0, T^1, ...`) by strands of period `p` in
/// which every ratio is a power of `L` with multiplicity at most `d + 1`.
/// With `period = None` the smallest working period up to `max_period` is
/// used. Every term of `vals` is checked against the result.
pub fn strand_fit<C: SeriesCoeff>(
    zero: &C,
    var: &str,
    vals: &[C],
    period: Option<u32>,
    max_period: u32,
    d: usize,
    margin: usize,
) -> Result<StrandFit<C>, SeriesError> {
    let periods: Vec<u32> = match period {
        Some(p) => vec![p],
        None => (1..=max_period).collect(),
    };
    let mut last = SeriesError::FitFailed("no period tried".into());
    for p in periods {
        match fit_period(zero, var, vals, p, d, margin) {
            Ok(f) => return Ok(f),
            Err(e) => last = e,
        }
    }
    Err(last)
}

fn fit_period<C: SeriesCoeff>(
    zero: &C,
    var: &str,
    vals: &[C],
    p: u32,
    d: usize,
    margin: usize,
) -> Result<StrandFit<C>, SeriesError> {
    assert!(p > 0, "period must be positive");
    let mut series = ClosedSeries::new(vec![var.to_string()]);
    for r in 0..p as usize {
        let sub: Vec<C> = vals.iter().skip(r).step_by(p as usize).cloned().collect();
        if sub.is_empty() {
            continue;
        }
        let seq = Seq::fit(zero, &sub, margin)
            .map_err(|e| SeriesError::FitFailed(format!("period {p}, residue {r}: {e}")))?;
        let roots = geometric_roots(zero, seq.denominator())
            .ok_or_else(|| SeriesError::FitFailed(format!("period {p}, residue {r}: ratios are not powers of L")))?;
        if roots.values().any(|&e| e > d + 1) {
            return Err(SeriesError::FitFailed(format!("period {p}, residue {r}: multiplicity above {}", d + 1)));
        }
        for s in solve_strands(zero, &seq, &sub, &roots, margin)? {
            let b = r as u32 + p * s.b[0];
            let factors = s.factors.iter().map(|f| GeomFactor::new(f.m, vec![p])).collect();
            series.push(Strand::new(s.coeff, vec![b], factors));
        }
    }
    let check = series.expand(vals.len().saturating_sub(1) as u32, crate::trunc::BoundMode::Total);
    for (i, v) in vals.iter().enumerate() {
        if check.coeff_or(&[i as u32], zero) != *v {
            return Err(SeriesError::FitFailed(format!("period {p}: term {i} not reproduced")));
        }
    }
    Ok(StrandFit { period: p, series })
}

/// Factor a denominator as `prod (1 - L^m x)^e`; `None` if some factor is not
/// of that shape.
fn geometric_roots<C: SeriesCoeff>(zero: &C, den: &[C::S]) -> Option<BTreeMap<i64, usize>> {
    let mut q = FPoly::new(den.iter().map(C::s_to_f).collect());
    let mut out = BTreeMap::new();
    for k in 0..=MAX_EXPONENT {
        for m in if k == 0 { vec![0] } else { vec![k, -k] } {
            if q.degree() == Some(0) {
                break;
            }
            let lin = FPoly::new(vec![C::F::one(), C::s_to_f(&zero.l_pow(m)).neg()]);
            loop {
                let (quo, rem) = q.divrem(&lin);
                if !rem.is_zero() {
                    break;
                }
                q = quo;
                *out.entry(m).or_insert(0) += 1;
            }
        }
    }
    (q.degree() == Some(0)).then_some(out)
}

/// `x^t` coefficient of `(l x)^e / (1 - l x)^e`: `l^t binom(t-1, e-1)`.
fn geom_basis<F: Field>(l: &F, e: usize, t: usize) -> F {
    if t < e {
        return F::zero();
    }
    let mut b = 1u128;
    for i in 0..(e - 1) as u128 {
        b = b * (t as u128 - 1 - i) / (i + 1);
    }
    let mut v = F::one();
    for _ in 0..t {
        v = v.mul(l);
    }
    v.mul(&F::from_int(b as i64))
}

/// Coefficients of the polynomial part and of every power of every ratio,
/// fixed by an exact linear solve on the first terms, componentwise.
fn solve_strands<C: SeriesCoeff>(
    zero: &C,
    seq: &Seq<C>,
    sub: &[C],
    roots: &BTreeMap<i64, usize>,
    margin: usize,
) -> Result<Vec<Strand<C>>, SeriesError> {
    let dq = seq.denominator().len() - 1;
    let poly_len = seq.numerator().len().saturating_sub(dq).max(1);
    // basis: x^j for j < poly_len, then (m, e) for each root and power
    let mut basis: Vec<(Option<(i64, usize)>, usize)> = (0..poly_len).map(|j| (None, j)).collect();
    for (&m, &mult) in roots {
        for e in 1..=mult {
            basis.push((Some((m, e)), 0));
        }
    }
    let rows = (basis.len() + margin).min(sub.len());
    let lf: BTreeMap<i64, C::F> = roots.keys().map(|&m| (m, C::s_to_f(&zero.l_pow(m)))).collect();
    let mat: Vec<Vec<C::F>> = (0..rows)
        .map(|t| {
            basis
                .iter()
                .map(|(g, j)| match g {
                    None => if t == *j { C::F::one() } else { C::F::zero() },
                    Some((m, e)) => geom_basis(&lf[m], *e, t),
                })
                .collect()
        })
        .collect();
    let width = joint_width(sub);
    let comps: Vec<BTreeMap<C::Key, C::F>> = sub[..rows].iter().map(|v| v.components(width).into_iter().collect()).collect();
    let keys: BTreeSet<C::Key> = comps.iter().flat_map(|m| m.keys().cloned()).collect();
    let rhs: Vec<Vec<C::F>> = comps
        .iter()
        .map(|m| keys.iter().map(|k| m.get(k).cloned().unwrap_or_else(C::F::zero)).collect())
        .collect();
    let sol = solve(mat, rhs, basis.len())
        .ok_or_else(|| SeriesError::FitFailed("strand coefficients are not determined".into()))?;
    let mut out = Vec::new();
    for ((g, j), row) in basis.iter().zip(sol) {
        let m: BTreeMap<C::Key, C::F> =
            keys.iter().cloned().zip(row).filter(|(_, v)| !v.is_zero()).collect();
        let c = zero
            .from_components(width, &m)
            .ok_or_else(|| SeriesError::FitFailed("strand coefficient leaves the coefficient ring".into()))?;
        match g {
            None => out.push(Strand::new(c, vec![*j as u32], vec![])),
            Some((m, e)) => out.push(Strand::new(c, vec![0], vec![GeomFactor::new(*m, vec![1]); *e])),
        }
    }
    Ok(out)
}

/// Unique solution `X` of `A X = B` (`A` is `rows x n`), or `None` when the
/// system is inconsistent or underdetermined.
fn solve<F: Field>(mut a: Vec<Vec<F>>, mut b: Vec<Vec<F>>, n: usize) -> Option<Vec<Vec<F>>> {
    let rows = a.len();
    let k = b.first().map_or(0, |r| r.len());
    let mut piv = 0;
    for col in 0..n {
        let r = (piv..rows).find(|&r| !a[r][col].is_zero())?;
        a.swap(piv, r);
        b.swap(piv, r);
        let inv = a[piv][col].inv();
        for x in a[piv].iter_mut() {
            *x = x.mul(&inv);
        }
        for x in b[piv].iter_mut() {
            *x = x.mul(&inv);
        }
        for r in 0..rows {
            if r == piv || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for c in 0..n {
                let v = a[piv][c].mul(&f);
                a[r][c] = a[r][c].sub(&v);
            }
            for c in 0..k {
                let v = b[piv][c].mul(&f);
                b[r][c] = b[r][c].sub(&v);
            }
        }
        piv += 1;
    }
    if b[n..].iter().any(|row| row.iter().any(|x| !x.is_zero())) {
        return None;
    }
    b.truncate(n);
    Some(b)
}
