use std::collections::BTreeMap;
use std::fmt::Debug;

use locring::{LocRat, RatFunc};
use motclass::{lcm, Coeff, CountVal, Monomial, SymbolicClass};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::field::{Field, Scalar};

/// A coefficient realization that series can be built over: it has a scalar
/// ring containing `L`, and decomposes linearly into components over a field
/// so sequences can be fitted componentwise.
pub trait SeriesCoeff: Coeff {
    type S: Scalar;
    type F: Field;
    type Key: Ord + Clone + Debug + Send + Sync;

    fn l_pow(&self, m: i64) -> Self::S;
    fn loc_scalar(&self, c: &LocRat) -> Self::S;
    fn mul_s(&self, s: &Self::S) -> Self;
    fn s_to_f(s: &Self::S) -> Self::F;
    fn f_to_s(f: &Self::F) -> Option<Self::S>;
    /// Size of the component basis needed for this value; a sequence uses
    /// the lcm over its terms.
    fn width(&self) -> u64;
    fn components(&self, width: u64) -> Vec<(Self::Key, Self::F)>;
    /// Rebuild a value in the realization of `self` from components.
    fn from_components(&self, width: u64, comps: &BTreeMap<Self::Key, Self::F>) -> Option<Self>;
}

impl SeriesCoeff for CountVal {
    type S = BigRational;
    type F = BigRational;
    type Key = usize;

    fn l_pow(&self, m: i64) -> BigRational {
        let q = BigRational::from_integer(BigInt::from(self.q()));
        if m >= 0 {
            num_traits::pow(q, m as usize)
        } else {
            num_traits::pow(q.recip(), (-m) as usize)
        }
    }

    fn loc_scalar(&self, c: &LocRat) -> BigRational {
        c.eval_at_int(self.q()).expect("L = q is never a root of 1 - L^n")
    }

    fn mul_s(&self, s: &BigRational) -> Self {
        self.scale_rat(s)
    }

    fn s_to_f(s: &BigRational) -> BigRational {
        s.clone()
    }

    fn f_to_s(f: &BigRational) -> Option<BigRational> {
        Some(f.clone())
    }

    fn width(&self) -> u64 {
        self.order()
    }

    fn components(&self, width: u64) -> Vec<(usize, BigRational)> {
        self.lifted(width).into_iter().enumerate().filter(|(_, x)| !Zero::is_zero(x)).collect()
    }

    fn from_components(&self, width: u64, comps: &BTreeMap<usize, BigRational>) -> Option<Self> {
        let v = (0..width as usize).map(|s| comps.get(&s).cloned().unwrap_or_else(<BigRational as Zero>::zero)).collect();
        Some(CountVal::new(self.field(), v))
    }
}

impl SeriesCoeff for SymbolicClass {
    type S = LocRat;
    type F = RatFunc;
    type Key = Monomial;

    fn l_pow(&self, m: i64) -> LocRat {
        LocRat::l_pow(m)
    }

    fn loc_scalar(&self, c: &LocRat) -> LocRat {
        c.clone()
    }

    fn mul_s(&self, s: &LocRat) -> Self {
        self.scale(s)
    }

    fn s_to_f(s: &LocRat) -> RatFunc {
        s.to_ratfunc()
    }

    fn f_to_s(f: &RatFunc) -> Option<LocRat> {
        LocRat::from_ratfunc(f).ok()
    }

    fn width(&self) -> u64 {
        1
    }

    fn components(&self, _width: u64) -> Vec<(Monomial, RatFunc)> {
        self.terms().map(|(m, c)| (m.clone(), c.to_ratfunc())).collect()
    }

    fn from_components(&self, _width: u64, comps: &BTreeMap<Monomial, RatFunc>) -> Option<Self> {
        let mut out = SymbolicClass::zero();
        for (m, f) in comps {
            out = out.add(&SymbolicClass::term(LocRat::from_ratfunc(f).ok()?, m.clone()));
        }
        Some(out)
    }
}

/// Common component width of a slice of values.
pub fn joint_width<C: SeriesCoeff>(vals: &[C]) -> u64 {
    vals.iter().fold(1, |w, v| lcm(w, v.width()))
}
