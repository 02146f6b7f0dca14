use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::{Arc, Mutex};

use motclass::Coeff;

use crate::bm::fit_rational;
use crate::coeff::{joint_width, SeriesCoeff};
use crate::field::{Field, Scalar};
use crate::fpoly::FPoly;
use crate::SeriesError;

/// Univariate series `N(T)/Q(T)` with class-valued numerator and scalar
/// denominator, `Q(0) = 1`. Every coefficient and every tail sum is exact.
pub struct Seq<C: SeriesCoeff> {
    zero: C,
    num: Vec<C>,
    den: Vec<C::S>,
    cache: Arc<Mutex<Vec<C>>>,
}

impl<C: SeriesCoeff> Clone for Seq<C> {
    fn clone(&self) -> Self {
        Self { zero: self.zero.clone(), num: self.num.clone(), den: self.den.clone(), cache: self.cache.clone() }
    }
}

impl<C: SeriesCoeff> fmt::Debug for Seq<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Seq").field("num", &self.num).field("den", &self.den).finish()
    }
}

fn trim_c<C: Coeff>(v: &mut Vec<C>) {
    while v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

fn trim_s<S: Scalar>(v: &mut Vec<S>) {
    while v.len() > 1 && v.last().is_some_and(|x| x.is_zero()) {
        v.pop();
    }
}

fn mul_ss<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
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

fn mul_cs<C: SeriesCoeff>(zero: &C, a: &[C], b: &[C::S]) -> Vec<C> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut out = vec![zero.clone(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] = out[i + j].add(&x.mul_s(y));
            }
        }
    }
    out
}

fn add_c<C: Coeff>(zero: &C, a: &[C], b: &[C]) -> Vec<C> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| match (a.get(i), b.get(i)) {
            (Some(x), Some(y)) => x.add(y),
            (Some(x), None) | (None, Some(x)) => x.clone(),
            (None, None) => zero.clone(),
        })
        .collect()
}

impl<C: SeriesCoeff> Seq<C> {
    /// `num / den`; `den(0)` must be a unit and is normalized to one.
    pub fn new(zero: &C, num: Vec<C>, den: Vec<C::S>) -> Self {
        assert!(!den.is_empty(), "empty denominator");
        let inv = den[0].try_inv().expect("denominator constant term must be a unit");
        let (mut num, mut den) = if den[0] == C::S::one() {
            (num, den)
        } else {
            (num.iter().map(|c| c.mul_s(&inv)).collect(), den.iter().map(|s| s.mul(&inv)).collect())
        };
        trim_c(&mut num);
        trim_s(&mut den);
        Self { zero: zero.zero_like(), num, den, cache: Arc::new(Mutex::new(Vec::new())) }
    }

    pub fn zero(zero: &C) -> Self {
        Self::new(zero, Vec::new(), vec![C::S::one()])
    }

    /// Finite series with the given coefficients.
    pub fn poly(zero: &C, coeffs: Vec<C>) -> Self {
        Self::new(zero, coeffs, vec![C::S::one()])
    }

    /// `c T^b x/(1-x)` with `x = L^m T^p`.
    pub fn geometric(c: &C, b: usize, m: i64, p: usize) -> Self {
        assert!(p > 0, "geometric factor needs a positive exponent");
        let lm = c.l_pow(m);
        let mut num = vec![c.zero_like(); b + p + 1];
        num[b + p] = c.mul_s(&lm);
        let mut den = vec![C::S::zero(); p + 1];
        den[0] = C::S::one();
        den[p] = lm.neg();
        Self::new(c, num, den)
    }

    pub fn zero_coeff(&self) -> &C {
        &self.zero
    }

    pub fn numerator(&self) -> &[C] {
        &self.num
    }

    pub fn denominator(&self) -> &[C::S] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    /// Bound on the linear complexity of the coefficient sequence.
    pub fn complexity(&self) -> usize {
        self.num.len().max(self.den.len() - 1)
    }

    /// Coefficients `0..=n`.
    pub fn coeffs(&self, n: usize) -> Vec<C> {
        let mut cache = self.cache.lock().unwrap();
        while cache.len() <= n {
            let i = cache.len();
            let mut c = self.num.get(i).cloned().unwrap_or_else(|| self.zero.clone());
            for (j, d) in self.den.iter().enumerate().skip(1) {
                if j > i {
                    break;
                }
                if !d.is_zero() && !cache[i - j].is_zero() {
                    c = c.sub(&cache[i - j].mul_s(d));
                }
            }
            cache.push(c);
        }
        cache[..=n].to_vec()
    }

    pub fn coeff(&self, n: usize) -> C {
        {
            let cache = self.cache.lock().unwrap();
            if let Some(c) = cache.get(n) {
                return c.clone();
            }
        }
        self.coeffs(n).pop().unwrap()
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return Self::new(&self.zero, add_c(&self.zero, &self.num, &o.num), self.den.clone());
        }
        let a = mul_cs(&self.zero, &self.num, &o.den);
        let b = mul_cs(&self.zero, &o.num, &self.den);
        Self::new(&self.zero, add_c(&self.zero, &a, &b), mul_ss(&self.den, &o.den))
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    /// Apply a map that is linear over the scalars to every coefficient.
    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        Self::new(&self.zero, self.num.iter().map(f).collect(), self.den.clone())
    }

    pub fn scale_s(&self, s: &C::S) -> Self {
        self.map(|c| c.mul_s(s))
    }

    /// Multiply by the scalar rational function `p/q`.
    pub fn mul_scalar_gf(&self, p: &[C::S], q: &[C::S]) -> Self {
        Self::new(&self.zero, mul_cs(&self.zero, &self.num, p), mul_ss(&self.den, q))
    }

    /// `T^k` times the series.
    pub fn shift_up(&self, k: usize) -> Self {
        let mut p = vec![C::S::zero(); k + 1];
        p[k] = C::S::one();
        self.mul_scalar_gf(&p, &[C::S::one()])
    }

    /// Drop the first `k` coefficients and shift down: `l -> a_{l+k}`.
    pub fn shift_down(&self, k: usize) -> Self {
        if k == 0 {
            return self.clone();
        }
        let prefix = self.coeffs(k - 1);
        let pq = mul_cs(&self.zero, &prefix, &self.den);
        let r = add_c(&self.zero, &self.num, &pq.iter().map(|c| c.neg()).collect::<Vec<_>>());
        debug_assert!(r.iter().take(k).all(|c| c.is_zero()));
        Self::new(&self.zero, r.into_iter().skip(k).collect(), self.den.clone())
    }

    fn eval_one_s(p: &[C::S]) -> C::S {
        p.iter().fold(C::S::zero(), |a, x| a.add(x))
    }

    /// Sum of all coefficients.
    pub fn total(&self) -> Result<C, SeriesError> {
        let q1 = Self::eval_one_s(&self.den);
        let inv = q1.try_inv().ok_or_else(|| SeriesError::TailNotSummable("denominator vanishes at T = 1".into()))?;
        let n1 = self.num.iter().fold(self.zero.clone(), |a, x| a.add(x));
        Ok(n1.mul_s(&inv))
    }

    /// Tail sums `t_l = sum_{k > l + b} a_k` as a series in `l`.
    pub fn tail(&self, b: usize) -> Result<Self, SeriesError> {
        let q1 = Self::eval_one_s(&self.den);
        let inv = q1.try_inv().ok_or_else(|| SeriesError::TailNotSummable("denominator vanishes at T = 1".into()))?;
        let n1 = self.num.iter().fold(self.zero.clone(), |a, x| a.add(x));
        // (N(1) Q(T) - Q(1) N(T)) / (Q(1) Q(T) (1 - T))
        let a: Vec<C> = self.den.iter().map(|d| n1.mul_s(d)).collect();
        let b_: Vec<C> = self.num.iter().map(|c| c.mul_s(&q1).neg()).collect();
        let m = add_c(&self.zero, &a, &b_);
        let mut r = Vec::with_capacity(m.len());
        let mut acc = self.zero.clone();
        for c in &m {
            acc = acc.add(c);
            r.push(acc.clone());
        }
        debug_assert!(r.last().map_or(true, |c| c.is_zero()));
        let t = Self::new(&self.zero, r.iter().map(|c| c.mul_s(&inv)).collect(), self.den.clone());
        Ok(t.shift_down(b))
    }

    /// Formal value at `T = infinity` by degree comparison.
    pub fn lim(&self) -> Result<C, SeriesError> {
        let Some(dn) = self.num.len().checked_sub(1) else { return Ok(self.zero.clone()) };
        let dq = self.den.len() - 1;
        if dn > dq {
            return Err(SeriesError::NotLimitNormal(format!(
                "numerator degree {dn} exceeds denominator degree {dq}"
            )));
        }
        if dn < dq {
            return Ok(self.zero.clone());
        }
        let inv = self.den[dq]
            .try_inv()
            .ok_or_else(|| SeriesError::NotLimitNormal("leading denominator coefficient is not a unit".into()))?;
        Ok(self.num[dn].mul_s(&inv))
    }

    /// Coefficientwise bilinear product, refitted from enough terms to pin the
    /// product recurrence.
    pub fn hadamard(&self, o: &Self, f: impl Fn(&C, &C) -> C + Sync) -> Result<Self, SeriesError> {
        let n = 2 * self.complexity() * o.complexity() + self.num.len() + o.num.len() + FIT_MARGIN;
        let a = self.coeffs(n);
        let b = o.coeffs(n);
        let vals: Vec<C> = a.iter().zip(&b).map(|(x, y)| f(x, y)).collect();
        Self::fit(&self.zero, &vals, FIT_MARGIN)
    }

    /// Fit a rational series reproducing `vals` exactly, componentwise.
    pub fn fit(zero: &C, vals: &[C], margin: usize) -> Result<Self, SeriesError> {
        let width = joint_width(vals);
        let comps: Vec<BTreeMap<C::Key, C::F>> =
            vals.iter().map(|v| v.components(width).into_iter().collect()).collect();
        let keys: BTreeSet<C::Key> = comps.iter().flat_map(|m| m.keys().cloned()).collect();
        if keys.is_empty() {
            return Ok(Self::zero(zero));
        }
        let mut fits = Vec::new();
        for k in &keys {
            let s: Vec<C::F> = comps.iter().map(|m| m.get(k).cloned().unwrap_or_else(C::F::zero)).collect();
            let (p, q) = fit_rational(&s, margin)
                .ok_or_else(|| SeriesError::FitFailed(format!("component {k:?}: too few terms ({})", s.len())))?;
            fits.push((k.clone(), p, q));
        }
        let mut den = FPoly::<C::F>::one();
        for (_, _, q) in &fits {
            den = den.lcm(q);
        }
        let mut numk = Vec::new();
        let mut len = 0;
        for (k, p, q) in fits {
            let n = p.mul(&den.divrem(&q).0);
            len = len.max(n.coeffs().len());
            numk.push((k, n));
        }
        let mut num = Vec::with_capacity(len);
        for i in 0..len {
            let m: BTreeMap<C::Key, C::F> = numk
                .iter()
                .map(|(k, n)| (k.clone(), n.coeff(i)))
                .filter(|(_, x)| !x.is_zero())
                .collect();
            num.push(
                zero.from_components(width, &m)
                    .ok_or_else(|| SeriesError::FitFailed("numerator leaves the coefficient ring".into()))?,
            );
        }
        let den: Option<Vec<C::S>> = den.coeffs().iter().map(C::f_to_s).collect();
        let den = den.ok_or_else(|| SeriesError::FitFailed("denominator leaves the scalar ring".into()))?;
        let s = Self::new(zero, num, den);
        debug_assert!(s.coeffs(vals.len() - 1) == vals);
        Ok(s)
    }

    /// Exact equality of rational functions.
    pub fn same(&self, o: &Self) -> bool {
        let a = mul_cs(&self.zero, &self.num, &o.den);
        let b = mul_cs(&self.zero, &o.num, &self.den);
        let d = add_c(&self.zero, &a, &b.iter().map(|c| c.neg()).collect::<Vec<_>>());
        d.iter().all(|c| c.is_zero())
    }
}

/// Extra terms beyond twice the complexity that must confirm a fit.
pub const FIT_MARGIN: usize = 8;
