//! Formal series over class algebras.
//!
//! [`TruncSeries`] holds multivariate coefficients up to a degree bound.
//! [`ClosedSeries`] is a finite sum of geometric strands and can be expanded,
//! classified and sent to infinity. [`Seq`] is an exact univariate rational
//! series with class coefficients; tails, limits and refitted Hadamard
//! products all go through it. Ordered cells and the `Phi` automorphism live
//! in [`cells`].

pub mod bm;
pub mod cells;
pub mod closed;
pub mod coeff;
pub mod field;
pub mod fit;
pub mod fpoly;
pub mod seq;
pub mod serial;
pub mod trunc;

pub use cells::{ordered_cells, CellSeries, CellSpec, ProductTerm, TailBound};
pub use closed::{Class, ClosedSeries, GeomFactor, Strand, Support};
pub use coeff::{joint_width, SeriesCoeff};
pub use field::{Field, Scalar};
pub use fit::{strand_fit, StrandFit};
pub use seq::{Seq, FIT_MARGIN};
pub use serial::CoeffText;
pub use trunc::{BoundMode, TruncSeries};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeriesError {
    #[error("variable mismatch: {0}")]
    VariableMismatch(String),
    #[error("not limit-normal: {0}")]
    NotLimitNormal(String),
    #[error("fit failed: {0}")]
    FitFailed(String),
    #[error("tail not summable: {0}")]
    TailNotSummable(String),
    #[error("not integrable: {0}")]
    NotIntegrable(String),
    #[error("base mismatch: {0}")]
    BaseMismatch(String),
    #[error("support violation: {0}")]
    SupportViolation(String),
    #[error("parse error: {0}")]
    Parse(String),
}
