use std::collections::BTreeMap;

use num_rational::BigRational;

use crate::count::CountVal;
use crate::field::Fp;
use crate::geomset::GeomSet;
use crate::symbolic::{ConvKind, Factor, Monomial, SymbolicClass};
use crate::MotError;

/// Atom name to presentation.
pub type Binding = BTreeMap<String, GeomSet>;

/// Specialization of symbolic classes to twisted counts over `F_q`.
pub struct Binder<'a> {
    binding: &'a Binding,
    field: Fp,
    budget: u64,
    cache: BTreeMap<String, CountVal>,
}

impl<'a> Binder<'a> {
    pub fn new(binding: &'a Binding, field: Fp, budget: u64) -> Self {
        Self { binding, field, budget, cache: BTreeMap::new() }
    }

    fn atom(&mut self, name: &str, order: u64) -> Result<CountVal, MotError> {
        if let Some(v) = self.cache.get(name) {
            return Ok(v.clone());
        }
        let g = self.binding.get(name).ok_or_else(|| MotError::UnboundAtom(name.into()))?;
        if order % g.order != 0 && g.order % order != 0 {
            return Err(MotError::InvalidGeomSet(format!(
                "atom {name} has order {order}, presentation has order {}",
                g.order
            )));
        }
        let v = g.count_val(self.field, self.budget)?;
        self.cache.insert(name.to_string(), v.clone());
        Ok(v)
    }

    pub fn monomial(&mut self, m: &Monomial) -> Result<CountVal, MotError> {
        let mut acc = CountVal::one(self.field);
        for f in m.factors() {
            let v = match f {
                Factor::Atom(a) => {
                    let v = self.atom(&a.name, a.order)?;
                    if a.augmented {
                        v.augment()
                    } else {
                        v
                    }
                }
                Factor::Conv { kind, left, right } => {
                    let (l, r) = (self.monomial(left)?, self.monomial(right)?);
                    match kind {
                        ConvKind::Zero => l.conv0(&r),
                        ConvKind::One => l.conv1(&r),
                    }
                }
                Factor::Aug(inner) => self.monomial(inner)?.augment(),
            };
            acc = acc.mul(&v);
        }
        Ok(acc)
    }

    pub fn class(&mut self, c: &SymbolicClass) -> Result<CountVal, MotError> {
        let mut acc = CountVal::zero(self.field);
        for (m, s) in c.terms() {
            acc = acc.add(&self.monomial(m)?.scale(s));
        }
        Ok(acc)
    }
}

/// Twist vector of `c` at `q`.
pub fn bind(c: &SymbolicClass, binding: &Binding, field: Fp, budget: u64) -> Result<CountVal, MotError> {
    Binder::new(binding, field, budget).class(c)
}

/// Plain `F_q`-count of `c`.
pub fn bind_and_count(
    c: &SymbolicClass,
    binding: &Binding,
    field: Fp,
    budget: u64,
) -> Result<BigRational, MotError> {
    Ok(bind(c, binding, field, budget)?.count().clone())
}
