use std::collections::BTreeMap;

use locring::LocRat;
use motclass::Coeff;
use rayon::prelude::*;

use crate::SeriesError;

/// How the degree bound applies to exponent vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoundMode {
    /// `|n| <= D`
    Total,
    /// `n_i <= D` for every `i`
    Componentwise,
}

/// Multivariate series known up to a degree bound.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<C> {
    pub vars: Vec<String>,
    pub bound: u32,
    pub mode: BoundMode,
    coeffs: BTreeMap<Vec<u32>, C>,
}

pub fn total(n: &[u32]) -> u32 {
    n.iter().sum()
}

impl<C: Coeff> TruncSeries<C> {
    pub fn new(vars: Vec<String>, bound: u32) -> Self {
        Self { vars, bound, mode: BoundMode::Total, coeffs: BTreeMap::new() }
    }

    pub fn with_mode(vars: Vec<String>, bound: u32, mode: BoundMode) -> Self {
        Self { vars, bound, mode, coeffs: BTreeMap::new() }
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn in_bound(&self, n: &[u32]) -> bool {
        match self.mode {
            BoundMode::Total => total(n) <= self.bound,
            BoundMode::Componentwise => n.iter().all(|&k| k <= self.bound),
        }
    }

    /// Set a coefficient; zeros and out-of-bound exponents are dropped.
    pub fn set(&mut self, n: Vec<u32>, c: C) {
        assert_eq!(n.len(), self.nvars(), "exponent length differs from variable count");
        if !self.in_bound(&n) || c.is_zero() {
            self.coeffs.remove(&n);
            return;
        }
        self.coeffs.insert(n, c);
    }

    pub fn add_at(&mut self, n: Vec<u32>, c: &C) {
        let v = match self.coeffs.get(&n) {
            Some(x) => x.add(c),
            None => c.clone(),
        };
        self.set(n, v);
    }

    pub fn get(&self, n: &[u32]) -> Option<&C> {
        self.coeffs.get(n)
    }

    pub fn coeff_or(&self, n: &[u32], zero: &C) -> C {
        self.coeffs.get(n).cloned().unwrap_or_else(|| zero.zero_like())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_vars(&self, o: &Self) -> Result<(), SeriesError> {
        if self.vars != o.vars {
            return Err(SeriesError::VariableMismatch(format!("{:?} vs {:?}", self.vars, o.vars)));
        }
        Ok(())
    }

    /// Both series cut to the smaller bound.
    fn common(&self, o: &Self) -> Result<(u32, BoundMode), SeriesError> {
        self.check_vars(o)?;
        if self.mode != o.mode {
            return Err(SeriesError::VariableMismatch("degree bound modes differ".into()));
        }
        Ok((self.bound.min(o.bound), self.mode))
    }

    pub fn truncate(&self, bound: u32) -> Self {
        let mut r = Self::with_mode(self.vars.clone(), bound.min(self.bound), self.mode);
        for (n, c) in &self.coeffs {
            r.set(n.clone(), c.clone());
        }
        r
    }

    pub fn add(&self, o: &Self) -> Result<Self, SeriesError> {
        let (d, mode) = self.common(o)?;
        let mut r = Self::with_mode(self.vars.clone(), d, mode);
        for (n, c) in self.coeffs.iter().chain(&o.coeffs) {
            r.add_at(n.clone(), c);
        }
        Ok(r)
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn sub(&self, o: &Self) -> Result<Self, SeriesError> {
        self.add(&o.neg())
    }

    pub fn scale(&self, s: &LocRat) -> Self {
        self.map(|c| c.scale(s))
    }

    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        let mut r = Self::with_mode(self.vars.clone(), self.bound, self.mode);
        for (n, c) in &self.coeffs {
            r.set(n.clone(), f(c));
        }
        r
    }

    fn coefficientwise(&self, o: &Self, f: impl Fn(&C, &C) -> C + Sync) -> Result<Self, SeriesError> {
        let (d, mode) = self.common(o)?;
        let pairs: Vec<(&Vec<u32>, &C, &C)> =
            self.coeffs.iter().filter_map(|(n, a)| o.coeffs.get(n).map(|b| (n, a, b))).collect();
        let vals: Vec<(Vec<u32>, C)> = pairs.par_iter().map(|(n, a, b)| ((*n).clone(), f(a, b))).collect();
        let mut r = Self::with_mode(self.vars.clone(), d, mode);
        for (n, c) in vals {
            r.set(n, c);
        }
        Ok(r)
    }

    /// `a x_H b`: coefficientwise external product.
    pub fn hadamard_ext(&self, o: &Self) -> Result<Self, SeriesError> {
        self.coefficientwise(o, |a, b| a.ext_mul(b))
    }

    /// `a *_H b`: coefficientwise convolution.
    pub fn hadamard_conv(&self, o: &Self) -> Result<Self, SeriesError> {
        self.coefficientwise(o, |a, b| a.conv(b))
    }

    pub fn hadamard_with(&self, o: &Self, f: impl Fn(&C, &C) -> C + Sync) -> Result<Self, SeriesError> {
        self.coefficientwise(o, f)
    }

    /// V-Hadamard product of `a(T, V)` and `b(U, V)`, with `V` the variables
    /// the two share. The result has variables `(T, U, V)`.
    pub fn v_hadamard(&self, o: &Self) -> Result<Self, SeriesError> {
        if self.mode != o.mode {
            return Err(SeriesError::VariableMismatch("degree bound modes differ".into()));
        }
        let shared: Vec<&String> = self.vars.iter().filter(|v| o.vars.contains(v)).collect();
        let t: Vec<usize> = (0..self.nvars()).filter(|&i| !shared.contains(&&self.vars[i])).collect();
        let u: Vec<usize> = (0..o.nvars()).filter(|&j| !shared.contains(&&o.vars[j])).collect();
        let va: Vec<usize> = shared.iter().map(|v| self.vars.iter().position(|x| x == *v).unwrap()).collect();
        let vb: Vec<usize> = shared.iter().map(|v| o.vars.iter().position(|x| x == *v).unwrap()).collect();
        let mut vars: Vec<String> = t.iter().map(|&i| self.vars[i].clone()).collect();
        vars.extend(u.iter().map(|&j| o.vars[j].clone()));
        vars.extend(shared.iter().map(|v| (*v).clone()));
        let mut r = Self::with_mode(vars, self.bound.min(o.bound), self.mode);
        for (n, a) in &self.coeffs {
            let la: Vec<u32> = va.iter().map(|&i| n[i]).collect();
            for (m, b) in &o.coeffs {
                let lb: Vec<u32> = vb.iter().map(|&j| m[j]).collect();
                if la != lb {
                    continue;
                }
                let mut e: Vec<u32> = t.iter().map(|&i| n[i]).collect();
                e.extend(u.iter().map(|&j| m[j]));
                e.extend(la.iter());
                if r.in_bound(&e) {
                    r.add_at(e, &a.ext_mul(b));
                }
            }
        }
        Ok(r)
    }

    /// Substitute each variable `i` by the monomial with exponent `subs[i]`
    /// in the new variables.
    pub fn substitute(&self, vars: Vec<String>, subs: &[Vec<u32>], bound: u32) -> Self {
        assert_eq!(subs.len(), self.nvars(), "one substitution per variable");
        let mut r = Self::new(vars, bound);
        for (n, c) in &self.coeffs {
            let mut e = vec![0u32; r.nvars()];
            for (k, s) in n.iter().zip(subs) {
                for (ei, si) in e.iter_mut().zip(s) {
                    *ei += k * si;
                }
            }
            if r.in_bound(&e) {
                r.add_at(e, c);
            }
        }
        r
    }

    /// Set every variable equal to one variable `t`.
    pub fn diagonal(&self, t: &str) -> Self {
        let subs = vec![vec![1]; self.nvars()];
        self.substitute(vec![t.to_string()], &subs, self.bound)
    }

    /// Keep only the coefficients whose exponents satisfy `keep`.
    pub fn restrict(&self, keep: impl Fn(&[u32]) -> bool) -> Self {
        let mut r = Self::with_mode(self.vars.clone(), self.bound, self.mode);
        for (n, c) in &self.coeffs {
            if keep(n) {
                r.set(n.clone(), c.clone());
            }
        }
        r
    }

    /// Coefficientwise pushforward along a map of bases.
    pub fn project(&self, f: impl Fn(&C) -> C) -> Self {
        self.map(f)
    }

    /// Exact agreement of all coefficients with `|n|` within both bounds.
    pub fn agrees(&self, o: &Self) -> bool {
        if self.vars != o.vars {
            return false;
        }
        let d = self.bound.min(o.bound);
        let a = self.truncate(d);
        let b = o.truncate(d);
        a.coeffs == b.coeffs
    }
}
