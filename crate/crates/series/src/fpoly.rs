use crate::field::Field;

/// Univariate polynomial over a field, coefficients in increasing degree with
/// no trailing zeros.
#[derive(Clone, Debug, PartialEq)]
pub struct FPoly<F: Field>(Vec<F>);

impl<F: Field> FPoly<F> {
    pub fn zero() -> Self {
        Self(Vec::new())
    }

    pub fn one() -> Self {
        Self(vec![F::one()])
    }

    pub fn new(mut c: Vec<F>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self(c)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> F {
        self.0.get(i).cloned().unwrap_or_else(F::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn lead(&self) -> F {
        self.0.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new((0..n).map(|i| self.coeff(i).add(&o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new((0..n).map(|i| self.coeff(i).sub(&o.coeff(i))).collect())
    }

    pub fn scale(&self, s: &F) -> Self {
        Self::new(self.0.iter().map(|x| x.mul(s)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![F::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(out)
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lead().inv();
        let mut r = self.0.clone();
        let Some(sd) = self.degree() else { return (Self::zero(), Self::zero()) };
        if sd < dd {
            return (Self::zero(), self.clone());
        }
        let mut q = vec![F::zero(); sd - dd + 1];
        for k in (0..=sd - dd).rev() {
            let c = r[k + dd].mul(&inv);
            if c.is_zero() {
                continue;
            }
            for (j, b) in d.0.iter().enumerate() {
                r[k + j] = r[k + j].sub(&c.mul(b));
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Self::new(q), Self::new(r))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.lead().inv())
    }

    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Least common multiple normalized to constant term one when that is
    /// nonzero.
    pub fn lcm(&self, o: &Self) -> Self {
        let g = self.gcd(o);
        let l = self.mul(&o.divrem(&g).0);
        let c = l.coeff(0);
        if c.is_zero() {
            l
        } else {
            l.scale(&c.inv())
        }
    }

    pub fn eval(&self, x: &F) -> F {
        let mut acc = F::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }
}
