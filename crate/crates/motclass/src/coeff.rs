use std::fmt::Debug;

use locring::LocRat;

use crate::count::CountVal;
use crate::symbolic::SymbolicClass;

/// Operations a coefficient realization of the class algebra provides.
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync {
    /// Zero in the same realization (same field for counts).
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }
    fn scale(&self, c: &LocRat) -> Self;
    fn ext_mul(&self, o: &Self) -> Self;
    fn conv0(&self, o: &Self) -> Self;
    fn conv1(&self, o: &Self) -> Self;
    /// `a * b = a *_0 b - a *_1 b`
    fn conv(&self, o: &Self) -> Self {
        self.conv0(o).sub(&self.conv1(o))
    }
    fn augment(&self) -> Self;
    fn scalar_like(&self, c: &LocRat) -> Self {
        self.one_like().scale(c)
    }
}

impl Coeff for SymbolicClass {
    fn zero_like(&self) -> Self {
        SymbolicClass::zero()
    }
    fn one_like(&self) -> Self {
        SymbolicClass::one()
    }
    fn is_zero(&self) -> bool {
        SymbolicClass::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        SymbolicClass::add(self, o)
    }
    fn neg(&self) -> Self {
        SymbolicClass::neg(self)
    }
    fn scale(&self, c: &LocRat) -> Self {
        SymbolicClass::scale(self, c)
    }
    fn ext_mul(&self, o: &Self) -> Self {
        SymbolicClass::ext_mul(self, o)
    }
    fn conv0(&self, o: &Self) -> Self {
        SymbolicClass::conv0(self, o)
    }
    fn conv1(&self, o: &Self) -> Self {
        SymbolicClass::conv1(self, o)
    }
    fn augment(&self) -> Self {
        SymbolicClass::augment(self)
    }
}

impl Coeff for CountVal {
    fn zero_like(&self) -> Self {
        CountVal::zero(self.field())
    }
    fn one_like(&self) -> Self {
        CountVal::one(self.field())
    }
    fn is_zero(&self) -> bool {
        CountVal::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        CountVal::add(self, o)
    }
    fn neg(&self) -> Self {
        CountVal::neg(self)
    }
    fn scale(&self, c: &LocRat) -> Self {
        CountVal::scale(self, c)
    }
    fn ext_mul(&self, o: &Self) -> Self {
        CountVal::mul(self, o)
    }
    fn conv0(&self, o: &Self) -> Self {
        CountVal::conv0(self, o)
    }
    fn conv1(&self, o: &Self) -> Self {
        CountVal::conv1(self, o)
    }
    fn augment(&self) -> Self {
        CountVal::augment(self)
    }
}
