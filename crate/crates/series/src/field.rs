use std::fmt::Debug;

use locring::{LocRat, RatFunc};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact field used for fitting coefficient sequences.
pub trait Field: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Panics on zero.
    fn inv(&self) -> Self;
    fn from_int(c: i64) -> Self;
    fn div(&self, o: &Self) -> Self {
        self.mul(&o.inv())
    }
}

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        self.recip()
    }
    fn from_int(c: i64) -> Self {
        BigRational::from_integer(BigInt::from(c))
    }
}

impl Field for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Self {
        RatFunc::inv(self).expect("inverse of zero in Q(L)")
    }
    fn from_int(c: i64) -> Self {
        RatFunc::from_int(c)
    }
}

/// Scalars a realization multiplies coefficients by: `Q` at a fixed `q`, or
/// the localized ring symbolically. Only units may be inverted.
pub trait Scalar: Clone + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn try_inv(&self) -> Option<Self>;
    fn from_int(c: i64) -> Self;
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
    fn from_int(c: i64) -> Self {
        BigRational::from_integer(BigInt::from(c))
    }
}

impl Scalar for LocRat {
    fn zero() -> Self {
        LocRat::zero()
    }
    fn one() -> Self {
        LocRat::one()
    }
    fn is_zero(&self) -> bool {
        LocRat::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn try_inv(&self) -> Option<Self> {
        self.try_inverse().ok()
    }
    fn from_int(c: i64) -> Self {
        LocRat::int(c)
    }
}
