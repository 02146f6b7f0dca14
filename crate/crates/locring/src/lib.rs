//! Exact arithmetic in `Z[L, L^-1, (1-L^n)^-1 : n >= 1]`.
//!
//! [`LocRat`] keeps its denominator as a sorted multiset of `(1 - L^n)`
//! factors and cancels a factor only when it divides the numerator.
//! [`RatFunc`] is the fraction field `Q(L)`, used where linear algebra over
//! the scalars is needed.

mod laurent;
mod locrat;
mod parse;
mod ratfunc;

pub use laurent::LaurentPoly;
pub use locrat::LocRat;
pub use ratfunc::{cyclotomic, QPoly, RatFunc};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocError {
    #[error("denominator factor 1 - L^{n} vanishes at L = {q}")]
    DenominatorVanishes { n: u32, q: String },
    #[error("not invertible in the localized ring: {0}")]
    NotInvertible(String),
    #[error("not an element of the localized ring: {0}")]
    NotInLocalization(String),
    #[error("parse error at offset {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
