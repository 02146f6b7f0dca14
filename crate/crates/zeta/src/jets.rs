//! Jet spaces of a polynomial over `F_q`: explicit presentations and a
//! pruned depth-first count.
//!
//! A jet `phi = a_0 + a_1 t + ... + a_n t^n` (one such per variable) lies in
//! `X_n(f)` when `f(phi) = t^n mod t^{n+1}`. The `mu_n` action has weight `j`
//! on `a_j`, so the twist `s` of `X_n(f)` counts jets with
//! `f(phi) = omega^s t^n mod t^{n+1}`.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use motclass::{gcd, Fp, GeomSet, Poly};
use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;

use crate::ZetaError;

/// Where the jets start.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasePoint {
    /// `a_0 = 0`
    Origin,
    /// `a_0` fixed to the given point
    Point(Vec<u64>),
    /// `a_0` ranges over all points
    Global,
}

/// Jets of order `n` of `f` over `F_q`.
#[derive(Clone, Debug)]
pub struct JetSpec {
    pub f: Poly,
    pub n: u32,
    pub base: BasePoint,
    pub q: u64,
}

/// Name of the jet coordinate `a_j` of variable `v`.
pub fn jet_var(v: &str, j: u32) -> String {
    format!("{v}_{j}")
}

/// `f(phi)` as polynomials in the jet coordinates, one per power of `t`
/// up to `t^n`. `start` is the lowest jet index that is a coordinate;
/// below it the coordinates are replaced by `fixed`.
fn jet_coefficients(f: &Poly, n: u32, start: u32, fixed: Option<&[u64]>) -> Vec<Poly> {
    let len = n as usize + 1;
    let phis: Vec<Vec<Poly>> = f
        .vars()
        .iter()
        .enumerate()
        .map(|(i, v)| {
            (0..=n)
                .map(|j| {
                    if j >= start {
                        Poly::var(&jet_var(v, j))
                    } else {
                        Poly::constant(fixed.map_or(0, |x| x[i]))
                    }
                })
                .collect()
        })
        .collect();
    let mul = |a: &[Poly], b: &[Poly]| -> Vec<Poly> {
        let mut out = vec![Poly::zero(); len];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(len - i) {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        out
    };
    let mut total = vec![Poly::zero(); len];
    for (e, c) in f.terms() {
        let mut acc = vec![Poly::zero(); len];
        acc[0] = Poly::constant(c.clone());
        for (i, &k) in e.iter().enumerate() {
            for _ in 0..k {
                acc = mul(&acc, &phis[i]);
            }
        }
        for (t, a) in total.iter_mut().zip(acc) {
            *t = t.add(&a);
        }
    }
    total
}

fn coordinates(f: &Poly, n: u32, start: u32) -> (Vec<String>, Vec<u64>, Vec<usize>) {
    let mut vars = Vec::new();
    let mut weights = Vec::new();
    let mut base = Vec::new();
    for v in f.vars() {
        for j in start..=n {
            if j == 0 {
                base.push(vars.len());
            }
            vars.push(jet_var(v, j));
            weights.push(j as u64);
        }
    }
    (vars, weights, base)
}

fn start_of(base: &BasePoint) -> u32 {
    match base {
        BasePoint::Global => 0,
        _ => 1,
    }
}

fn fixed_of(base: &BasePoint) -> Option<&[u64]> {
    match base {
        BasePoint::Point(x) => Some(x),
        _ => None,
    }
}

/// Explicit presentation of `X_n(f)`: the coefficient equations of
/// `f(phi) - t^n` through `t^n` in the jet coordinates.
pub fn jet_set(spec: &JetSpec) -> Result<GeomSet, ZetaError> {
    if spec.n == 0 {
        return Err(ZetaError::InvalidData("jet order must be positive".into()));
    }
    check_base(&spec.f, &spec.base)?;
    let start = start_of(&spec.base);
    let cs = jet_coefficients(&spec.f, spec.n, start, fixed_of(&spec.base));
    let (vars, weights, base) = coordinates(&spec.f, spec.n, start);
    let mut eqs: Vec<Poly> = cs[..spec.n as usize].iter().filter(|c| !c.is_zero()).cloned().collect();
    eqs.push(cs[spec.n as usize].sub(&Poly::constant(1)));
    let mut g = GeomSet::new(vars, eqs, vec![], spec.n as u64, weights)?;
    g.base_coords = base;
    Ok(g)
}

/// Explicit presentation of `D_n(f)` for a family on separate variables,
/// with jets of length `|n|` in every factor: `f_1(phi_1) = t^{n_1}` and
/// `ord f_i(phi_i) > n_i` for the others. Jets start at the origin.
pub fn multi_jet_set(family: &[Poly], n: &[u32]) -> Result<GeomSet, ZetaError> {
    if family.is_empty() || family.len() != n.len() || n[0] == 0 {
        return Err(ZetaError::InvalidData("family and exponent must be nonempty and match".into()));
    }
    disjoint(family)?;
    let len: u32 = n.iter().sum();
    let mut vars = Vec::new();
    let mut weights = Vec::new();
    let mut eqs = Vec::new();
    for (i, (f, &ni)) in family.iter().zip(n).enumerate() {
        let cs = jet_coefficients(f, len, 1, None);
        let (v, w, _) = coordinates(f, len, 1);
        vars.extend(v);
        weights.extend(w);
        if i == 0 {
            eqs.extend(cs[..ni as usize].iter().filter(|c| !c.is_zero()).cloned());
            eqs.push(cs[ni as usize].sub(&Poly::constant(1)));
        } else {
            eqs.extend(cs[..=ni as usize].iter().filter(|c| !c.is_zero()).cloned());
        }
    }
    Ok(GeomSet::new(vars, eqs, vec![], n[0] as u64, weights)?)
}

pub(crate) fn disjoint(family: &[Poly]) -> Result<(), ZetaError> {
    for (i, a) in family.iter().enumerate() {
        for b in &family[i + 1..] {
            if let Some(v) = a.vars().iter().find(|v| b.vars().contains(v)) {
                return Err(ZetaError::InvalidData(format!("variable {v} is shared by two functions")));
            }
        }
    }
    Ok(())
}

fn check_base(f: &Poly, base: &BasePoint) -> Result<(), ZetaError> {
    if let BasePoint::Point(x) = base {
        if x.len() != f.nvars() {
            return Err(ZetaError::InvalidData(format!(
                "base point has {} coordinates, f has {} variables",
                x.len(),
                f.nvars()
            )));
        }
    }
    Ok(())
}

/// Twisted jet counts for every order up to a degree.
#[derive(Clone, Debug, PartialEq)]
pub struct JetCounts {
    pub field: Fp,
    /// number of variables of `f`
    pub d: usize,
    pub degree: u32,
    /// `exact[n][s] = #{phi mod t^{n+1} : f(phi) = omega^s t^n}` for
    /// `s < gcd(n, q - 1)`
    pub exact: Vec<Vec<BigInt>>,
    /// `beyond[n] = #{phi mod t^{n+1} : ord f(phi) > n}`
    pub beyond: Vec<BigInt>,
    /// search nodes visited
    pub nodes: u64,
}

/// Truncated power series mod `p`.
fn smul(a: &[u64], b: &[u64], len: usize, p: u64) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for (i, &x) in a.iter().enumerate().take(len) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(len - i) {
            if y != 0 {
                out[i + j] = (out[i + j] + (x as u128 * y as u128 % p as u128) as u64) % p;
            }
        }
    }
    out
}

fn sord(a: &[u64]) -> Option<usize> {
    a.iter().position(|&x| x != 0)
}

fn binom_mod(n: u32, k: u32, p: u64) -> u64 {
    let mut r = 1u128;
    for i in 0..k {
        r = r * (n - i) as u128 / (i + 1) as u128;
    }
    (r % p as u128) as u64
}

type Terms = Vec<(Vec<u32>, u64)>;

/// Hasse derivative `D^beta f` with coefficients mod `p`.
fn hasse(terms: &Terms, beta: &[u32], p: u64) -> Terms {
    terms
        .iter()
        .filter(|(e, _)| e.iter().zip(beta).all(|(a, b)| a >= b))
        .filter_map(|(e, c)| {
            let mut k = *c;
            for (a, b) in e.iter().zip(beta) {
                k = (k as u128 * binom_mod(*a, *b, p) as u128 % p as u128) as u64;
            }
            let ne: Vec<u32> = e.iter().zip(beta).map(|(a, b)| a - b).collect();
            (k != 0).then_some((ne, k))
        })
        .collect()
}

struct Engine {
    field: Fp,
    log: Vec<u64>,
    d: usize,
    degree: usize,
    terms: Terms,
    maxdeg: Vec<u32>,
    /// `(|beta|, D^beta f, beta is a unit vector)` for every `beta != 0`
    derivs: Vec<(usize, Terms, bool)>,
    budget: u64,
    nodes: AtomicU64,
}

#[derive(Clone, Debug)]
struct Acc {
    exact: Vec<Vec<BigInt>>,
    beyond: Vec<BigInt>,
}

impl Acc {
    fn new(e: &Engine) -> Self {
        let q1 = e.field.p - 1;
        Self {
            exact: (0..=e.degree).map(|n| vec![BigInt::zero(); gcd(n.max(1) as u64, q1) as usize]).collect(),
            beyond: vec![BigInt::zero(); e.degree + 1],
        }
    }

    fn merge(mut self, o: Self) -> Self {
        for (a, b) in self.exact.iter_mut().zip(o.exact) {
            for (x, y) in a.iter_mut().zip(b) {
                *x += y;
            }
        }
        for (x, y) in self.beyond.iter_mut().zip(o.beyond) {
            *x += y;
        }
        self
    }
}

impl Engine {
    fn new(f: &Poly, field: Fp, degree: u32, budget: u64) -> Self {
        let p = field.p;
        let terms = f.terms_mod(p);
        let d = f.nvars();
        let mut maxdeg = vec![0u32; d];
        for (e, _) in &terms {
            for (m, &k) in maxdeg.iter_mut().zip(e) {
                *m = (*m).max(k);
            }
        }
        let mut derivs = Vec::new();
        let mut beta = vec![0u32; d];
        loop {
            // odometer over 0 <= beta_i <= maxdeg_i
            let mut i = 0;
            while i < d {
                if beta[i] < maxdeg[i] {
                    beta[i] += 1;
                    break;
                }
                beta[i] = 0;
                i += 1;
            }
            if i == d {
                break;
            }
            let h = hasse(&terms, &beta, p);
            if !h.is_empty() {
                let size: u32 = beta.iter().sum();
                derivs.push((size as usize, h, size == 1));
            }
        }
        Self {
            field,
            log: field.log_table(),
            d,
            degree: degree as usize,
            terms,
            maxdeg,
            derivs,
            budget,
            nodes: AtomicU64::new(0),
        }
    }

    fn tick(&self) -> Result<(), ZetaError> {
        let n = self.nodes.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.budget {
            return Err(ZetaError::BudgetExceeded(format!("jet search passed {} nodes", self.budget)));
        }
        Ok(())
    }

    fn powers(&self, prefix: &[Vec<u64>], len: usize) -> Vec<Vec<Vec<u64>>> {
        let p = self.field.p;
        (0..self.d)
            .map(|i| {
                let mut ps = vec![{
                    let mut one = vec![0u64; len];
                    one[0] = 1;
                    one
                }];
                for e in 1..=self.maxdeg[i] as usize {
                    let next = smul(&ps[e - 1], &prefix[i], len, p);
                    ps.push(next);
                }
                ps
            })
            .collect()
    }

    fn eval(&self, terms: &Terms, pows: &[Vec<Vec<u64>>], len: usize) -> Vec<u64> {
        let p = self.field.p;
        let mut out = vec![0u64; len];
        for (e, c) in terms {
            let mut m = vec![0u64; len];
            m[0] = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    m = smul(&m, &pows[i][k as usize], len, p);
                }
            }
            for (o, x) in out.iter_mut().zip(m) {
                *o = (*o + x) % p;
            }
        }
        out
    }

    /// Prefix value `G = f(phi')` and the first degree `v` where the jet
    /// coordinates from index `k` on can change `f(phi)`, both up to `deg`.
    /// Also reports whether the change at `v` is a unit times a single
    /// coordinate (linear terms reach `v`, nonlinear ones stay above it).
    fn analyse(&self, prefix: &[Vec<u64>], k: usize, deg: usize) -> (Vec<u64>, usize, bool) {
        let len = deg + 1;
        let pows = self.powers(prefix, len);
        let g = self.eval(&self.terms, &pows, len);
        let mut lin = usize::MAX;
        let mut nonlin = usize::MAX;
        for (size, h, unit) in &self.derivs {
            let shift = k * size;
            if shift > deg {
                continue;
            }
            let val = self.eval(h, &pows, deg - shift + 1);
            if let Some(o) = sord(&val) {
                let at = shift + o;
                if *unit {
                    lin = lin.min(at);
                } else {
                    nonlin = nonlin.min(at);
                }
            }
        }
        let v = lin.min(nonlin).min(deg + 1);
        (g, v, lin == v && nonlin > v && v <= deg)
    }

    /// Number of leading coefficients in one class of `F_q^* / (F_q^*)^n`.
    fn coset(&self, n: usize) -> u64 {
        let q1 = self.field.p - 1;
        q1 / gcd(n.max(1) as u64, q1)
    }

    fn qpow(&self, e: usize) -> BigInt {
        num_traits::pow(BigInt::from(self.field.p), e)
    }

    fn children(&self, prefix: &[Vec<u64>], k: usize) -> Vec<Vec<Vec<u64>>> {
        let p = self.field.p;
        let total = (p as usize).pow(self.d as u32);
        (0..total)
            .map(|mut idx| {
                let mut np = prefix.to_vec();
                for row in np.iter_mut() {
                    row[k] = (idx % p as usize) as u64;
                    idx /= p as usize;
                }
                np
            })
            .collect()
    }

    /// Jets extending `prefix` (coordinates below index `k` fixed), counted
    /// for targets `n >= from`.
    fn count(&self, prefix: &[Vec<u64>], k: usize, from: usize) -> Result<Acc, ZetaError> {
        self.tick()?;
        let mut acc = Acc::new(self);
        let deg = self.degree;
        let (g, v, hensel) = self.analyse(prefix, k, deg);
        let first = (k..=deg).find(|&j| g[j] != 0);
        let g_below = (0..k.min(deg + 1)).any(|j| g[j] != 0);
        if g_below {
            return Ok(acc);
        }
        for n in from.max(k)..v.min(deg + 1) {
            let w = self.qpow(self.d * (n + 1 - k));
            match first {
                Some(j) if j < n => break,
                Some(j) if j == n => {
                    let s = self.log[g[n] as usize] as usize % acc.exact[n].len();
                    acc.exact[n][s] += w;
                }
                _ => acc.beyond[n] += w,
            }
        }
        if first.is_some_and(|j| j < v) || v > deg {
            return Ok(acc);
        }
        let from = from.max(v);
        if hensel {
            for n in from..=deg {
                let w = self.qpow(self.d * (n + 1 - k) - (n + 1 - v));
                let coset = &w * BigInt::from(self.coset(n));
                for x in acc.exact[n].iter_mut() {
                    *x += &coset;
                }
                acc.beyond[n] += w;
            }
            return Ok(acc);
        }
        let kids = self.children(prefix, k);
        let sub: Result<Vec<Acc>, ZetaError> = if k <= 2 {
            kids.par_iter().map(|c| self.count(c, k + 1, from)).collect()
        } else {
            kids.iter().map(|c| self.count(c, k + 1, from)).collect()
        };
        Ok(sub?.into_iter().fold(acc, Acc::merge))
    }

    /// Histogram of `f(phi) mod t^{n+1}` (coefficients `1..=n`, base-q
    /// encoded) over jets with `f(phi)` vanishing at `t = 0`.
    fn histogram(&self, prefix: &[Vec<u64>], k: usize, n: usize) -> Result<HashMap<u64, u128>, ZetaError> {
        self.tick()?;
        let (g, v, _) = self.analyse(prefix, k, n);
        if g[0] != 0 {
            return Ok(HashMap::new());
        }
        if v > n {
            let mut h = HashMap::new();
            let w = (self.field.p as u128).pow((self.d * (n + 1 - k)) as u32);
            h.insert(encode(&g[1..], self.field.p), w);
            return Ok(h);
        }
        let kids = self.children(prefix, k);
        let merge = |mut a: HashMap<u64, u128>, b: HashMap<u64, u128>| {
            for (key, c) in b {
                *a.entry(key).or_insert(0) += c;
            }
            a
        };
        if k <= 2 {
            let parts: Result<Vec<_>, ZetaError> = kids.par_iter().map(|c| self.histogram(c, k + 1, n)).collect();
            Ok(parts?.into_iter().fold(HashMap::new(), merge))
        } else {
            let mut out = HashMap::new();
            for c in &kids {
                out = merge(out, self.histogram(c, k + 1, n)?);
            }
            Ok(out)
        }
    }

    fn root(&self, base: &BasePoint, len: usize) -> (Vec<Vec<u64>>, usize) {
        let mut prefix = vec![vec![0u64; len]; self.d];
        match base {
            BasePoint::Origin => (prefix, 1),
            BasePoint::Point(x) => {
                for (row, &xi) in prefix.iter_mut().zip(x) {
                    row[0] = xi % self.field.p;
                }
                (prefix, 1)
            }
            BasePoint::Global => (prefix, 0),
        }
    }
}

pub(crate) fn encode(c: &[u64], p: u64) -> u64 {
    c.iter().rev().fold(0u64, |acc, &x| acc * p + x)
}

pub(crate) fn decode(mut key: u64, n: usize, p: u64) -> Vec<u64> {
    (0..n)
        .map(|_| {
            let x = key % p;
            key /= p;
            x
        })
        .collect()
}

/// Jet counts of `f` for all orders `1..=degree`, by a depth-first search
/// over jet coefficients. A branch stops once the remaining coordinates can
/// no longer affect `f(phi)` through `t^degree`, or once each further order
/// is solved by a single coordinate with a unit coefficient; both cases are
/// counted in closed form.
pub fn jet_counts(f: &Poly, base: &BasePoint, field: Fp, degree: u32, budget: u64) -> Result<JetCounts, ZetaError> {
    check_base(f, base)?;
    let e = Engine::new(f, field, degree, budget);
    let (prefix, k) = e.root(base, degree as usize + 1);
    let mut acc = e.count(&prefix, k, 1)?;
    // `exact` summed over whole classes of leading coefficients so far
    for (n, v) in acc.exact.iter_mut().enumerate() {
        let c = BigInt::from(e.coset(n));
        for x in v.iter_mut() {
            *x = &*x / &c;
        }
    }
    Ok(JetCounts {
        field,
        d: e.d,
        degree,
        exact: acc.exact,
        beyond: acc.beyond,
        nodes: e.nodes.load(Ordering::Relaxed),
    })
}

/// Number of jets `phi mod t^{n+1}` of `f` for every value of
/// `f(phi) mod t^{n+1}` with zero constant term. Keys are the coefficients
/// of `t^1..t^n`, base-q encoded.
pub fn jet_histogram(f: &Poly, base: &BasePoint, field: Fp, n: u32, budget: u64) -> Result<HashMap<u64, u128>, ZetaError> {
    check_base(f, base)?;
    let bits = (n as f64) * (field.p as f64).log2();
    let wbits = (f.nvars() as f64) * (n as f64 + 1.0) * (field.p as f64).log2();
    if bits >= 63.0 || wbits >= 127.0 {
        return Err(ZetaError::BudgetExceeded(format!("histogram keys for n = {n} at q = {} do not fit", field.p)));
    }
    let e = Engine::new(f, field, n, budget);
    let (prefix, k) = e.root(base, n as usize + 1);
    e.histogram(&prefix, k, n as usize)
}

impl JetCounts {
    /// Zero counts, for a function without jets.
    pub fn is_empty(&self) -> bool {
        self.exact.iter().all(|v| v.iter().all(|x| x.is_zero()))
    }

    /// Plain count of `X_n(f)`.
    pub fn count(&self, n: u32) -> BigInt {
        self.exact[n as usize][0].clone()
    }

    pub fn total_exact(&self, n: u32) -> BigInt {
        self.exact[n as usize].iter().fold(BigInt::zero(), |a, x| a + x)
    }

    /// `#{phi mod t^{n+1}}` over the base, for consistency checks:
    /// the exact orders up to `n` (over all leading coefficients) plus
    /// `beyond[n]`, each lifted to length `n`.
    pub fn all_jets(&self, n: u32) -> BigInt {
        let q = BigInt::from(self.field.p);
        let mut s = self.beyond[n as usize].clone();
        for k in 1..=n {
            let per = self.total_exact(k) * BigInt::from((self.field.p - 1) / gcd(k as u64, self.field.p - 1));
            s += per * num_traits::pow(q.clone(), self.d * (n - k) as usize);
        }
        s
    }
}
