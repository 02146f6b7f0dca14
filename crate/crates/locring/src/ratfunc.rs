use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::laurent::LaurentPoly;

/// Dense polynomial in `L` over `Q`, coefficient of `L^i` at index `i`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct QPoly {
    c: Vec<BigRational>,
}

impl QPoly {
    pub fn zero() -> Self {
        Self { c: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self::from_coeffs(vec![c])
    }

    pub fn monomial(c: BigRational, e: usize) -> Self {
        let mut v = vec![BigRational::zero(); e + 1];
        v[e] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut c: Vec<BigRational>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self { c }
    }

    /// Requires nonnegative exponents.
    pub fn from_laurent(p: &LaurentPoly) -> Self {
        let Some(hi) = p.max_exp() else { return Self::zero() };
        assert!(p.min_exp().unwrap() >= 0, "negative exponent in QPoly::from_laurent");
        let mut v = vec![BigRational::zero(); hi as usize + 1];
        for (e, c) in p.terms() {
            v[e as usize] = BigRational::from_integer(c.clone());
        }
        Self::from_coeffs(v)
    }

    /// Integral coefficients only.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        let mut p = LaurentPoly::zero();
        for (i, c) in self.c.iter().enumerate() {
            if !c.is_integer() {
                return None;
            }
            p.add_term(i as i64, c.to_integer());
        }
        Some(p)
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    pub fn lead(&self) -> BigRational {
        self.c.last().cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn scale(&self, s: &BigRational) -> Self {
        Self::from_coeffs(self.c.iter().map(|x| x * s).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().recip())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut v = vec![BigRational::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Self::from_coeffs(v)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let z = BigRational::zero();
        Self::from_coeffs(
            (0..n)
                .map(|i| self.c.get(i).unwrap_or(&z) + o.c.get(i).unwrap_or(&z))
                .collect(),
        )
    }

    pub fn neg(&self) -> Self {
        Self { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut r = self.c.clone();
        let dl = d.c.len();
        if r.len() < dl {
            return (Self::zero(), self.clone());
        }
        let inv = d.lead().recip();
        let mut q = vec![BigRational::zero(); r.len() - dl + 1];
        for k in (0..q.len()).rev() {
            let coef = &r[k + dl - 1] * &inv;
            if coef.is_zero() {
                continue;
            }
            for (j, dj) in d.c.iter().enumerate() {
                r[k + j] -= &coef * dj;
            }
            q[k] = coef;
        }
        (Self::from_coeffs(q), Self::from_coeffs(r))
    }

    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        r.is_zero().then_some(q)
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.c.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*L")?,
                _ => write!(f, "({c})*L^{i}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The `d`-th cyclotomic polynomial.
pub fn cyclotomic(d: u32) -> QPoly {
    assert!(d >= 1);
    // L^d - 1 divided by Phi_e for every proper divisor e
    let mut p = QPoly::from_laurent(&(LaurentPoly::monomial(1, d as i64) - LaurentPoly::one()));
    for e in 1..d {
        if d % e == 0 {
            p = p.div_exact(&cyclotomic(e)).expect("cyclotomic divisor");
        }
    }
    p
}

/// Element of `Q(L)`, kept reduced with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: QPoly,
    den: QPoly,
}

impl RatFunc {
    pub fn new(num: QPoly, den: QPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator in RatFunc");
        if num.is_zero() {
            return Self::zero();
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g).unwrap();
        let den = den.div_exact(&g).unwrap();
        let l = den.lead();
        Self { num: num.scale(&l.recip()), den: den.monic() }
    }

    pub fn zero() -> Self {
        Self { num: QPoly::zero(), den: QPoly::one() }
    }

    pub fn one() -> Self {
        Self { num: QPoly::one(), den: QPoly::one() }
    }

    pub fn constant(c: BigRational) -> Self {
        Self::new(QPoly::constant(c), QPoly::one())
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(BigRational::from_integer(BigInt::from(c)))
    }

    /// `L^e` for any integer `e`.
    pub fn l_pow(e: i64) -> Self {
        let m = QPoly::monomial(BigRational::one(), e.unsigned_abs() as usize);
        if e >= 0 {
            Self::new(m, QPoly::one())
        } else {
            Self::new(QPoly::one(), m)
        }
    }

    pub fn num(&self) -> &QPoly {
        &self.num
    }

    pub fn den(&self) -> &QPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Self::new(self.den.clone(), self.num.clone()))
    }

    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone());
        }
        RatFunc::new(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(self.num.mul(&o.num), self.den.mul(&o.den))
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        self * &o.inv().expect("division by zero in Q(L)")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: self.num.neg(), den: self.den.clone() }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
