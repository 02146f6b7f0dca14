//! Coefficient algebra for motivic zeta computations.
//!
//! Two realizations share the [`Coeff`] interface: [`SymbolicClass`], a
//! normal-form sum of atom products and convolution nodes with scalars in the
//! localized ring, and [`CountVal`], the vector of twisted `F_q`-point counts.
//! [`GeomSet`] presents an equivariant variety explicitly so atoms can be bound
//! and counted.

mod bind;
mod coeff;
mod count;
mod field;
mod geomset;
mod poly;
pub mod rewrite;
mod symbolic;

pub use bind::{bind, bind_and_count, Binder, Binding};
pub use coeff::Coeff;
pub use count::CountVal;
pub use field::{gcd, is_prime, lcm, Fp};
pub use geomset::{GeomSet, DEFAULT_BUDGET};
pub use poly::{parse_poly, Poly};
pub use symbolic::{augment_monomial, conv_monomials, Atom, ConvKind, Factor, Monomial, SymbolicClass};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MotError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown token '{token}' at offset {pos}")]
    UnknownToken { pos: usize, token: String },
    #[error("atom {0} has no presentation in the binding")]
    UnboundAtom(String),
    #[error("enumeration needs {candidates} candidate points, budget is {budget}")]
    FieldTooLarge { candidates: u64, budget: u64 },
    #[error("only prime fields are supported, got q = {0}")]
    UnsupportedField(u64),
    #[error("action order {order} is divisible by the characteristic {p}")]
    UnsupportedOrder { order: u64, p: u64 },
    #[error("equation is not homogeneous for the action: {0}")]
    NotEquivariant(String),
    #[error("invalid presentation: {0}")]
    InvalidGeomSet(String),
    #[error("json: {0}")]
    Json(String),
}
