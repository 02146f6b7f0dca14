//! Motivic zeta functions from jet counts over finite fields, multiple zeta
//! functions of families, the pulled-back zeta function of `f + g`,
//! Denef-Loeser formulas from resolution data, and nearby cycles as limits.
//!
//! Counts are twist vectors ([`motclass::CountVal`]); closed forms built from
//! resolution data or monomials carry symbolic atoms.

pub mod dl;
pub mod functions;
pub mod jets;
pub mod nearby;

pub use dl::{cone_euler, dl_eval, dl_trunc, ConePiece, ConeSpec, ResolutionData, Stratum};
pub use jets::{jet_counts, jet_histogram, jet_set, jet_var, multi_jet_set, BasePoint, JetCounts, JetSpec};
pub use functions::{
    multizeta_direct, multizeta_trunc, sum_split, sum_zeta_monomials, sum_zeta_pullback, zeta_closed, zeta_fit, zeta_trunc, SumMode,
    SumSplit,
};
pub use nearby::{bind_closed, mu_atom, mu_binding, nearby_cycles};

use motclass::MotError;
use series::SeriesError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ZetaError {
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error(transparent)]
    Mot(#[from] MotError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cone not decomposed: {0}")]
    ConeNotDecomposed(String),
    #[error("invalid data: {0}")]
    InvalidData(String),
    #[error("parse error: {0}")]
    Parse(String),
}
