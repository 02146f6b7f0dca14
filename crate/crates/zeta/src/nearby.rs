//! Nearby cycles as limits, and specialization of closed forms to counts.

use motclass::{bind, Atom, Binding, CountVal, Fp, GeomSet, SymbolicClass};
use series::{ClosedSeries, SeriesCoeff, Strand};

use crate::ZetaError;

/// `[mu_a]` over the origin; `[mu_1]` is the point.
pub fn mu_atom(a: u64) -> SymbolicClass {
    if a == 1 {
        SymbolicClass::one()
    } else {
        SymbolicClass::atom(Atom::new(&format!("mu_{a}"), "X0", a))
    }
}

/// Presentations for `mu_a` with `a` in `orders`.
pub fn mu_binding(orders: &[u64]) -> Binding {
    orders.iter().filter(|&&a| a > 1).map(|&a| (format!("mu_{a}"), GeomSet::mu(a))).collect()
}

/// `-lim_{T -> infinity}` of the diagonal of a closed series.
pub fn nearby_cycles<C: SeriesCoeff>(z: &ClosedSeries<C>, zero: &C) -> Result<C, ZetaError> {
    Ok(z.diagonal_seq(zero).lim()?.neg())
}

/// Strandwise specialization of a symbolic closed series to counts.
pub fn bind_closed(
    z: &ClosedSeries<SymbolicClass>,
    binding: &Binding,
    field: Fp,
    budget: u64,
) -> Result<ClosedSeries<CountVal>, ZetaError> {
    let mut out = ClosedSeries::new(z.vars.clone());
    for s in &z.strands {
        let c = bind(&s.coeff, binding, field, budget)?;
        let mut t = Strand::new(c, s.b.clone(), s.factors.clone());
        t.support = s.support.clone();
        out.push(t);
    }
    Ok(out)
}
