//! Closed forms of zeta functions from jet counts.

use motclass::{is_prime, lcm, CountVal, Fp, Poly};
use series::{strand_fit, ClosedSeries, Seq, SeriesCoeff};
use zeta::{zeta_fit, zeta_trunc, BasePoint};

use crate::report::FitNote;
use crate::VerifyError;

/// `lcm` of the total degrees of the terms of all polynomials.
pub fn term_lcm(polys: &[Poly]) -> u64 {
    polys.iter().flat_map(|f| f.degrees()).fold(1, |a, d| lcm(a, d.max(1) as u64))
}

/// Smallest prime `q` with `term_lcm | q - 1` and `q` above every degree.
pub fn default_q(polys: &[Poly]) -> u64 {
    let l = term_lcm(polys);
    let top = polys.iter().map(|f| f.max_degree() as u64).max().unwrap_or(1);
    (2..).find(|&q| is_prime(q) && (q - 1) % l == 0 && q > top).expect("primes in progressions")
}

/// A fitted local zeta function `Z_f(T)`.
#[derive(Clone, Debug)]
pub struct Fitted {
    pub closed: ClosedSeries<CountVal>,
    pub seq: Seq<CountVal>,
    /// number of jet orders counted
    pub degree: u32,
}

impl Fitted {
    pub fn note(&self, name: &str) -> FitNote {
        FitNote { name: name.into(), class: self.closed.classify().to_string(), strands: self.closed.strands.len() }
    }
}

/// Count `Z_f` at the origin through `4 deg f + 12` and fit it by strands of
/// period at most [`term_lcm`] of `f`.
pub fn fit_zeta(f: &Poly, field: Fp, budget: u64) -> Result<Fitted, VerifyError> {
    let degree = 4 * f.max_degree() + 12;
    let t = zeta_trunc(f, &BasePoint::Origin, field, degree, budget)?;
    let zero = CountVal::zero(field);
    let period = term_lcm(std::slice::from_ref(f)) as u32;
    let closed = match zeta_fit(&t, &zero, period, 0) {
        Ok(c) => c,
        Err(_) => zeta_fit(&t, &zero, period, 1)?,
    };
    let seq = closed.to_seq(&zero)?;
    Ok(Fitted { closed, seq, degree })
}

/// Strand form of an exact univariate series, for classification. Enough
/// coefficients are taken to pin every residue class of `period`.
pub fn strands_of<C: SeriesCoeff>(s: &Seq<C>, period: u32, mult: usize) -> Result<ClosedSeries<C>, VerifyError> {
    let per = 2 * (s.complexity() + s.numerator().len()) + 8;
    let n = per * period as usize;
    let fit = strand_fit(s.zero_coeff(), "T", &s.coeffs(n), None, period, mult, 2)?;
    Ok(fit.series)
}

pub fn seq_note<C: SeriesCoeff>(name: &str, s: &Seq<C>, period: u32, mult: usize) -> Result<FitNote, VerifyError> {
    let c = strands_of(s, period, mult)?;
    Ok(FitNote { name: name.into(), class: c.classify().to_string(), strands: c.strands.len() })
}
