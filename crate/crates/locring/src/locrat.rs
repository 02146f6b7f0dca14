use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::laurent::{rat_pow, LaurentPoly};
use crate::ratfunc::{cyclotomic, QPoly};
use crate::LocError;

/// Element `num / prod_{n in den} (1 - L^n)` of the localized ring.
#[derive(Clone)]
pub struct LocRat {
    num: LaurentPoly,
    den: Vec<u32>,
}

impl LocRat {
    pub fn zero() -> Self {
        Self { num: LaurentPoly::zero(), den: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn int<T: Into<BigInt>>(c: T) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    /// `L^e`
    pub fn l_pow(e: i64) -> Self {
        Self::from_poly(LaurentPoly::monomial(1, e))
    }

    /// `L - 1`
    pub fn l_minus_one() -> Self {
        Self::from_poly(LaurentPoly::monomial(1, 1) - LaurentPoly::one())
    }

    /// `L - 2`
    pub fn l_minus_two() -> Self {
        Self::from_poly(LaurentPoly::monomial(1, 1) - LaurentPoly::constant(2))
    }

    pub fn from_poly(num: LaurentPoly) -> Self {
        Self { num, den: Vec::new() }
    }

    /// `num / prod (1 - L^n)`; zero entries in `den` are rejected.
    pub fn new(num: LaurentPoly, mut den: Vec<u32>) -> Self {
        assert!(den.iter().all(|&n| n >= 1), "denominator factors must be >= 1");
        den.sort_unstable();
        let mut r = Self { num, den };
        r.cancel();
        r
    }

    /// `1 / (1 - L^n)`
    pub fn inv_one_minus(n: u32) -> Self {
        Self::new(LaurentPoly::one(), vec![n])
    }

    /// `1 / (1 - L^m)` for any nonzero `m`, using `1 - L^-k = -L^-k (1 - L^k)`.
    pub fn inv_one_minus_signed(m: i64) -> Result<Self, LocError> {
        match m.cmp(&0) {
            std::cmp::Ordering::Greater => Ok(Self::inv_one_minus(m as u32)),
            std::cmp::Ordering::Less => {
                let k = (-m) as u32;
                Ok(Self::new(LaurentPoly::monomial(-1, k as i64), vec![k]))
            }
            std::cmp::Ordering::Equal => Err(LocError::NotInvertible("1 - L^0".into())),
        }
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &[u32] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_empty() && self.num.is_one()
    }

    /// Cancel denominator factors that divide the numerator exactly.
    fn cancel(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let mut kept = Vec::with_capacity(self.den.len());
        for &n in &self.den {
            match self.num.div_one_minus(n) {
                Some(q) => self.num = q,
                None => kept.push(n),
            }
        }
        self.den = kept;
    }

    fn den_poly(den: &[u32]) -> LaurentPoly {
        den.iter()
            .fold(LaurentPoly::one(), |acc, &n| &acc * &LaurentPoly::one_minus_l_pow(n as i64))
    }

    /// Numerators of `self` and `o` over the multiset-union of denominators.
    fn common(&self, o: &Self) -> (LaurentPoly, LaurentPoly, Vec<u32>) {
        let (mut i, mut j) = (0, 0);
        let mut common = Vec::new();
        let mut extra_a = Vec::new();
        let mut extra_b = Vec::new();
        while i < self.den.len() || j < o.den.len() {
            match (self.den.get(i), o.den.get(j)) {
                (Some(a), Some(b)) if a == b => {
                    common.push(*a);
                    i += 1;
                    j += 1;
                }
                (Some(a), Some(b)) if a < b => {
                    common.push(*a);
                    extra_b.push(*a);
                    i += 1;
                }
                (Some(_), Some(b)) => {
                    common.push(*b);
                    extra_a.push(*b);
                    j += 1;
                }
                (Some(a), None) => {
                    common.push(*a);
                    extra_b.push(*a);
                    i += 1;
                }
                (None, Some(b)) => {
                    common.push(*b);
                    extra_a.push(*b);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        (
            &self.num * &Self::den_poly(&extra_a),
            &o.num * &Self::den_poly(&extra_b),
            common,
        )
    }

    /// Specialization `L -> q`.
    pub fn eval_at(&self, q: &BigRational) -> Result<BigRational, LocError> {
        let mut den = BigRational::one();
        for &n in &self.den {
            let v = BigRational::one() - rat_pow(q, n as i64);
            if v.is_zero() {
                return Err(LocError::DenominatorVanishes { n, q: q.to_string() });
            }
            den *= v;
        }
        let num = self
            .num
            .eval(q)
            .ok_or_else(|| LocError::DenominatorVanishes { n: 0, q: q.to_string() })?;
        Ok(num / den)
    }

    pub fn eval_at_int(&self, q: u64) -> Result<BigRational, LocError> {
        self.eval_at(&BigRational::from_integer(BigInt::from(q)))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse, when the numerator is a unit: `+-L^k` times cyclotomic factors.
    pub fn try_inverse(&self) -> Result<Self, LocError> {
        if self.num.is_zero() {
            return Err(LocError::NotInvertible("0".into()));
        }
        let lo = self.num.min_exp().unwrap();
        let mut p = QPoly::from_laurent(&self.num.shift(-lo));
        let lead = p.lead().clone();
        let sign = if lead.is_one() {
            BigInt::one()
        } else if (-lead).is_one() {
            -BigInt::one()
        } else {
            return Err(LocError::NotInvertible(self.to_string()));
        };
        p = p.scale(&BigRational::from_integer(sign.clone()));
        // 1/Phi_d = ((1 - L^d)/Phi_d) / (1 - L^d)
        let mut inv_num = LaurentPoly::constant(sign);
        let mut inv_den = Vec::new();
        let bound = 2 * (p.degree() as u32).pow(2) + 2;
        let mut d = 1u32;
        while p.degree() > 0 {
            if d > bound {
                return Err(LocError::NotInvertible(self.to_string()));
            }
            let phi = cyclotomic(d);
            while let Some(qt) = p.div_exact(&phi) {
                p = qt;
                let cofactor = QPoly::from_laurent(&LaurentPoly::one_minus_l_pow(d as i64))
                    .div_exact(&phi)
                    .and_then(|c| c.to_laurent())
                    .expect("cyclotomic divides 1 - L^d");
                inv_num = &inv_num * &cofactor;
                inv_den.push(d);
            }
            d += 1;
        }
        if !p.is_one() {
            return Err(LocError::NotInvertible(self.to_string()));
        }
        let num = &inv_num.shift(-lo) * &Self::den_poly(&self.den);
        Ok(Self::new(num, inv_den))
    }

    /// Rational function in `L` with rational coefficients.
    pub fn to_ratfunc(&self) -> crate::RatFunc {
        let lo = self.num.min_exp().unwrap_or(0).min(0);
        let num = QPoly::from_laurent(&self.num.shift(-lo));
        let den = QPoly::from_laurent(&Self::den_poly(&self.den).shift(-lo));
        crate::RatFunc::new(num, den)
    }

    /// Convert back from `Q(L)`; fails unless the value lies in the localized ring.
    pub fn from_ratfunc(r: &crate::RatFunc) -> Result<Self, LocError> {
        if r.is_zero() {
            return Ok(Self::zero());
        }
        // r is reduced with monic denominator, so membership needs an integral
        // numerator and a denominator made of L and cyclotomic factors.
        let num = r
            .num()
            .to_laurent()
            .ok_or_else(|| LocError::NotInLocalization(r.to_string()))?;
        let den = r
            .den()
            .to_laurent()
            .ok_or_else(|| LocError::NotInLocalization(r.to_string()))?;
        let inv = Self::from_poly(den)
            .try_inverse()
            .map_err(|_| LocError::NotInLocalization(r.to_string()))?;
        Ok(&inv * &Self::from_poly(num))
    }
}

impl PartialEq for LocRat {
    fn eq(&self, o: &Self) -> bool {
        if self.den == o.den {
            return self.num == o.num;
        }
        let (a, b, _) = self.common(o);
        a == b
    }
}
impl Eq for LocRat {}

impl Add for &LocRat {
    type Output = LocRat;
    fn add(self, o: &LocRat) -> LocRat {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let (a, b, den) = self.common(o);
        LocRat::new(&a + &b, den)
    }
}

impl Sub for &LocRat {
    type Output = LocRat;
    fn sub(self, o: &LocRat) -> LocRat {
        self + &(-o)
    }
}

impl Mul for &LocRat {
    type Output = LocRat;
    fn mul(self, o: &LocRat) -> LocRat {
        if self.is_zero() || o.is_zero() {
            return LocRat::zero();
        }
        let mut den = self.den.clone();
        den.extend_from_slice(&o.den);
        LocRat::new(&self.num * &o.num, den)
    }
}

impl Neg for &LocRat {
    type Output = LocRat;
    fn neg(self) -> LocRat {
        LocRat { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LocRat {
            type Output = LocRat;
            fn $m(self, o: LocRat) -> LocRat {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LocRat {
    type Output = LocRat;
    fn neg(self) -> LocRat {
        -&self
    }
}

impl From<i64> for LocRat {
    fn from(c: i64) -> Self {
        LocRat::int(c)
    }
}

impl From<LaurentPoly> for LocRat {
    fn from(p: LaurentPoly) -> Self {
        LocRat::from_poly(p)
    }
}

impl fmt::Display for LocRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        if self.num.terms().count() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        write!(f, " / ")?;
        for n in &self.den {
            if *n == 1 {
                write!(f, "(1-L)")?;
            } else {
                write!(f, "(1-L^{n})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LocRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
