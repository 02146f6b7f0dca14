use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Laurent polynomial in `L` with arbitrary-precision integer coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn constant<T: Into<BigInt>>(c: T) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * L^e`
    pub fn monomial<T: Into<BigInt>>(c: T, e: i64) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(e, c);
        }
        Self { coeffs }
    }

    /// `1 - L^n`
    pub fn one_minus_l_pow(n: i64) -> Self {
        Self::one() - Self::monomial(1, n)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, BigInt)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(e).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    /// Multiply by `L^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(e, x)| (*e, x * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient by `1 - L^n`, if it exists.
    pub fn div_one_minus(&self, n: u32) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        let n = n as i64;
        let lo = self.min_exp().unwrap();
        let hi = self.max_exp().unwrap();
        if hi - lo < n {
            return None;
        }
        // P = Q - L^n Q, so q_i = p_i + q_{i-n}, scanning upward from lo.
        let mut q: BTreeMap<i64, BigInt> = BTreeMap::new();
        for i in lo..=hi - n {
            let mut v = self.coeff(i);
            if let Some(prev) = q.get(&(i - n)) {
                v += prev;
            }
            if !v.is_zero() {
                q.insert(i, v);
            }
        }
        let quot = Self { coeffs: q };
        if &quot * &Self::one_minus_l_pow(n) == *self {
            Some(quot)
        } else {
            None
        }
    }

    pub fn eval(&self, x: &BigRational) -> Option<BigRational> {
        let mut acc = BigRational::zero();
        for (e, c) in &self.coeffs {
            if *e < 0 && x.is_zero() {
                return None;
            }
            acc += BigRational::from_integer(c.clone()) * rat_pow(x, *e);
        }
        Some(acc)
    }

    /// Value at `L = 1`.
    pub fn eval_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }
}

pub(crate) fn rat_pow(x: &BigRational, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    let base = if e < 0 { x.recip() } else { x.clone() };
    for _ in 0..e.unsigned_abs() {
        acc *= &base;
    }
    acc
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (e, c) in &o.coeffs {
            r.add_term(*e, c.clone());
        }
        r
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = self.clone();
        for (e, c) in &o.coeffs {
            r.add_term(*e, -c.clone());
        }
        r
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, o: &LaurentPoly) -> LaurentPoly {
        let mut r = LaurentPoly::zero();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &o.coeffs {
                r.add_term(e1 + e2, c1 * c2);
            }
        }
        r
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, o: LaurentPoly) -> LaurentPoly {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    /// Ascending exponents, e.g. `1 - 2*L + L^-1` renders as `L^-1 + 1 - 2*L`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mono = match *e {
                0 => String::new(),
                1 => "L".to_string(),
                _ => format!("L^{e}"),
            };
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
