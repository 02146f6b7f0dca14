use std::collections::BTreeMap;

use locring::LocRat;
use motclass::{lcm, Coeff};

use crate::coeff::SeriesCoeff;
use crate::field::Scalar;
use crate::seq::Seq;
use crate::trunc::{BoundMode, TruncSeries};
use crate::SeriesError;

/// `L^m T^n / (1 - L^m T^n)` with `n != 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeomFactor {
    pub m: i64,
    pub n: Vec<u32>,
}

impl GeomFactor {
    pub fn new(m: i64, n: Vec<u32>) -> Self {
        assert!(n.iter().any(|&k| k > 0), "geometric factor with zero exponent");
        Self { m, n }
    }
}

/// Restriction to `n_i = residue_i mod period_i`; a zero period leaves the
/// coordinate free.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Support {
    pub period: Vec<u32>,
    pub residue: Vec<u32>,
}

impl Support {
    pub fn contains(&self, n: &[u32]) -> bool {
        n.iter().zip(&self.period).zip(&self.residue).all(|((&k, &p), &r)| p == 0 || k % p == r % p)
    }

    fn common_period(&self) -> u64 {
        self.period.iter().filter(|&&p| p > 0).fold(1, |a, &p| lcm(a, p as u64))
    }
}

/// `coeff * T^b * prod_j L^{m_j} T^{n_j} / (1 - L^{m_j} T^{n_j})`.
#[derive(Clone, Debug, PartialEq)]
pub struct Strand<C> {
    pub coeff: C,
    pub b: Vec<u32>,
    pub factors: Vec<GeomFactor>,
    pub support: Option<Support>,
}

/// Integrable, strongly rational, or only rational.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Class {
    Int,
    Ssr,
    Sr,
}

impl std::fmt::Display for Class {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Class::Int => "int",
            Class::Ssr => "ssr",
            Class::Sr => "sr",
        })
    }
}

impl<C: Coeff> Strand<C> {
    pub fn new(coeff: C, b: Vec<u32>, factors: Vec<GeomFactor>) -> Self {
        Self { coeff, b, factors, support: None }
    }

    pub fn with_support(mut self, s: Support) -> Self {
        self.support = Some(s);
        self
    }

    pub fn classify(&self) -> Class {
        if self.factors.iter().all(|f| f.m < 0) {
            Class::Int
        } else if self.factors.iter().all(|f| f.m <= 0) {
            Class::Ssr
        } else {
            Class::Sr
        }
    }

    /// Terms with all exponents inside the bound of `out`, added into it.
    fn expand_into(&self, out: &mut TruncSeries<C>) {
        fn rec<C: Coeff>(s: &Strand<C>, j: usize, e: &mut Vec<u32>, lpow: i64, out: &mut TruncSeries<C>) {
            if j == s.factors.len() {
                if s.support.as_ref().map_or(true, |sp| sp.contains(e)) {
                    out.add_at(e.clone(), &s.coeff.scale(&LocRat::l_pow(lpow)));
                }
                return;
            }
            let f = &s.factors[j];
            let mut k = 1i64;
            loop {
                for (ei, ni) in e.iter_mut().zip(&f.n) {
                    *ei += ni;
                }
                if !out.in_bound(e) {
                    break;
                }
                rec(s, j + 1, e, lpow + k * f.m, out);
                k += 1;
            }
            for (ei, ni) in e.iter_mut().zip(&f.n) {
                *ei -= ni * k as u32;
            }
        }
        let mut e = self.b.clone();
        if out.in_bound(&e) {
            rec(self, 0, &mut e, 0, out);
        }
    }

    /// Numerator monomials `(L-power, exponent)` and denominator factors of
    /// the strand with its support resolved: each factor splits by residue
    /// `s = 1..P` as `sum_s y^s / (1 - y^P)`.
    fn resolved(&self) -> (Vec<(i64, Vec<u32>)>, Vec<(i64, Vec<u32>)>) {
        let Some(sp) = &self.support else {
            let m: i64 = self.factors.iter().map(|f| f.m).sum();
            let mut e = self.b.clone();
            for f in &self.factors {
                for (ei, ni) in e.iter_mut().zip(&f.n) {
                    *ei += ni;
                }
            }
            let den = self.factors.iter().map(|f| (f.m, f.n.clone())).collect();
            return (vec![(m, e)], den);
        };
        let p = sp.common_period() as u32;
        let mut terms = vec![(0i64, self.b.clone())];
        for f in &self.factors {
            let mut next = Vec::with_capacity(terms.len() * p as usize);
            for (m, e) in &terms {
                for s in 1..=p {
                    let e2: Vec<u32> = e.iter().zip(&f.n).map(|(a, b)| a + s * b).collect();
                    next.push((m + s as i64 * f.m, e2));
                }
            }
            terms = next;
        }
        terms.retain(|(_, e)| sp.contains(e));
        let den = self.factors.iter().map(|f| (f.m * p as i64, f.n.iter().map(|k| k * p).collect())).collect();
        (terms, den)
    }
}

/// Finite sum of strands in named variables.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedSeries<C> {
    pub vars: Vec<String>,
    pub strands: Vec<Strand<C>>,
}

impl<C: Coeff> ClosedSeries<C> {
    pub fn new(vars: Vec<String>) -> Self {
        Self { vars, strands: Vec::new() }
    }

    pub fn single(vars: Vec<String>, s: Strand<C>) -> Self {
        let mut r = Self::new(vars);
        r.push(s);
        r
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn push(&mut self, s: Strand<C>) {
        assert_eq!(s.b.len(), self.nvars(), "strand exponent length differs from variable count");
        assert!(s.factors.iter().all(|f| f.n.len() == self.nvars()), "factor exponent length differs");
        if !s.coeff.is_zero() {
            self.strands.push(s);
        }
    }

    pub fn add(&self, o: &Self) -> Result<Self, SeriesError> {
        if self.vars != o.vars {
            return Err(SeriesError::VariableMismatch(format!("{:?} vs {:?}", self.vars, o.vars)));
        }
        let mut r = self.clone();
        r.strands.extend(o.strands.iter().cloned());
        Ok(r)
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        let mut r = Self::new(self.vars.clone());
        for s in &self.strands {
            r.push(Strand { coeff: f(&s.coeff), ..s.clone() });
        }
        r
    }

    pub fn scale(&self, c: &LocRat) -> Self {
        self.map(|x| x.scale(c))
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.neg())
    }

    /// The weakest class over all strands; the empty sum is integrable.
    pub fn classify(&self) -> Class {
        self.strands.iter().map(|s| s.classify()).max().unwrap_or(Class::Int)
    }

    pub fn expand(&self, bound: u32, mode: BoundMode) -> TruncSeries<C> {
        let mut out = TruncSeries::with_mode(self.vars.clone(), bound, mode);
        for s in &self.strands {
            s.expand_into(&mut out);
        }
        out
    }

    /// All variables set equal to `t`. Support restrictions do not survive the
    /// substitution; resolve them through [`ClosedSeries::diagonal_seq`].
    pub fn diagonal(&self, t: &str) -> Result<Self, SeriesError> {
        let mut r = Self::new(vec![t.to_string()]);
        for s in &self.strands {
            if s.support.is_some() && self.nvars() > 1 {
                return Err(SeriesError::SupportViolation(
                    "support restriction in a multivariate diagonal".into(),
                ));
            }
            let tot = |n: &[u32]| vec![n.iter().sum::<u32>()];
            r.push(Strand {
                coeff: s.coeff.clone(),
                b: tot(&s.b),
                factors: s.factors.iter().map(|f| GeomFactor::new(f.m, tot(&f.n))).collect(),
                support: s.support.clone(),
            });
        }
        Ok(r)
    }
}

impl<C: SeriesCoeff> ClosedSeries<C> {
    /// The diagonal `T_1 = ... = T_r = T` as an exact univariate series.
    /// Strands are put over the least common multiple of their denominators.
    pub fn diagonal_seq(&self, zero: &C) -> Seq<C> {
        let tot = |n: &[u32]| n.iter().sum::<u32>();
        let pieces: Vec<(&C, Vec<(i64, u32)>, BTreeMap<(i64, u32), usize>)> = self
            .strands
            .iter()
            .map(|s| {
                let (num, den) = s.resolved();
                let mut mult = BTreeMap::new();
                for (m, n) in den {
                    *mult.entry((m, tot(&n))).or_insert(0) += 1;
                }
                (&s.coeff, num.into_iter().map(|(m, e)| (m, tot(&e))).collect(), mult)
            })
            .collect();
        let mut common: BTreeMap<(i64, u32), usize> = BTreeMap::new();
        for (_, _, mult) in &pieces {
            for (k, &v) in mult {
                let e = common.entry(*k).or_insert(0);
                *e = (*e).max(v);
            }
        }
        let factor_poly = |(m, n): (i64, u32)| {
            let mut p = vec![C::S::zero(); n as usize + 1];
            p[0] = C::S::one();
            p[n as usize] = zero.l_pow(m).neg();
            p
        };
        let mut den = vec![C::S::one()];
        for (k, &v) in &common {
            for _ in 0..v {
                den = poly_mul(&den, &factor_poly(*k));
            }
        }
        let mut num: Vec<C> = Vec::new();
        for (c, terms, mult) in pieces {
            let mut p: Vec<C::S> = Vec::new();
            for (m, e) in terms {
                if p.len() <= e as usize {
                    p.resize(e as usize + 1, C::S::zero());
                }
                p[e as usize] = p[e as usize].add(&zero.l_pow(m));
            }
            for (k, &v) in &common {
                for _ in mult.get(k).copied().unwrap_or(0)..v {
                    p = poly_mul(&p, &factor_poly(*k));
                }
            }
            if num.len() < p.len() {
                num.resize(p.len(), zero.clone());
            }
            for (i, s) in p.iter().enumerate() {
                if !s.is_zero() {
                    num[i] = num[i].add(&c.mul_s(s));
                }
            }
        }
        Seq::new(zero, num, den)
    }

    /// `lim_{T -> infinity}` with all variables equal.
    pub fn lim_infty(&self, zero: &C) -> Result<C, SeriesError> {
        self.diagonal_seq(zero).lim()
    }

    /// The univariate series itself.
    pub fn to_seq(&self, zero: &C) -> Result<Seq<C>, SeriesError> {
        if self.nvars() != 1 {
            return Err(SeriesError::VariableMismatch(format!("expected one variable, got {:?}", self.vars)));
        }
        Ok(self.diagonal_seq(zero))
    }
}

fn poly_mul<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    out
}

/// Closed Hadamard product of univariate strands with at most one factor and
/// no support restriction. `op` combines the coefficients.
pub fn hadamard_strands<C: Coeff>(
    a: &Strand<C>,
    b: &Strand<C>,
    op: &impl Fn(&C, &C) -> C,
) -> Result<Vec<Strand<C>>, SeriesError> {
    if a.b.len() != 1 || b.b.len() != 1 {
        return Err(SeriesError::VariableMismatch("closed Hadamard needs univariate strands".into()));
    }
    if a.factors.len() > 1 || b.factors.len() > 1 || a.support.is_some() || b.support.is_some() {
        return Err(SeriesError::NotLimitNormal("closed Hadamard needs single-factor strands".into()));
    }
    let l = |e: i64| LocRat::l_pow(e);
    let (ba, bb) = (a.b[0] as i64, b.b[0] as i64);
    match (a.factors.first(), b.factors.first()) {
        (None, None) => Ok(if ba == bb { vec![Strand::new(op(&a.coeff, &b.coeff), vec![ba as u32], vec![])] } else { vec![] }),
        (None, Some(f)) | (Some(f), None) => {
            let (poly, geo, bp, bg) = if a.factors.is_empty() { (a, b, ba, bb) } else { (b, a, bb, ba) };
            let n = f.n[0] as i64;
            let k = bp - bg;
            if k <= 0 || k % n != 0 {
                return Ok(vec![]);
            }
            let s = l((k / n) * f.m);
            let c = if a.factors.is_empty() { op(&poly.coeff, &geo.coeff.scale(&s)) } else { op(&geo.coeff.scale(&s), &poly.coeff) };
            Ok(vec![Strand::new(c, vec![bp as u32], vec![])])
        }
        (Some(fa), Some(fb)) => {
            let (na, nb) = (fa.n[0] as i64, fb.n[0] as i64);
            let p = lcm(na as u64, nb as u64) as i64;
            // least N = ba + k na = bb + j nb with k, j >= 1
            let mut first = None;
            for k in 1..=((bb - ba).abs() + p + nb) / na + 2 {
                let nn = ba + k * na;
                let j = nn - bb;
                if j >= nb && j % nb == 0 {
                    first = Some((k, j / nb, nn));
                    break;
                }
            }
            let Some((k0, j0, n0)) = first else { return Ok(vec![]) };
            let big_m = fa.m * (p / na) + fb.m * (p / nb);
            let c = op(&a.coeff.scale(&l(fa.m * k0)), &b.coeff.scale(&l(fb.m * j0)));
            if n0 >= p {
                Ok(vec![Strand::new(c.scale(&l(-big_m)), vec![(n0 - p) as u32], vec![GeomFactor::new(big_m, vec![p as u32])])])
            } else {
                Ok(vec![
                    Strand::new(c.clone(), vec![n0 as u32], vec![]),
                    Strand::new(c, vec![n0 as u32], vec![GeomFactor::new(big_m, vec![p as u32])]),
                ])
            }
        }
    }
}

/// Closed Hadamard product of univariate closed series whose strands each
/// have at most one factor.
pub fn hadamard_closed<C: Coeff>(
    a: &ClosedSeries<C>,
    b: &ClosedSeries<C>,
    op: impl Fn(&C, &C) -> C,
) -> Result<ClosedSeries<C>, SeriesError> {
    if a.vars != b.vars {
        return Err(SeriesError::VariableMismatch(format!("{:?} vs {:?}", a.vars, b.vars)));
    }
    let mut r = ClosedSeries::new(a.vars.clone());
    for sa in &a.strands {
        for sb in &b.strands {
            for s in hadamard_strands(sa, sb, &op)? {
                r.push(s);
            }
        }
    }
    Ok(r)
}
