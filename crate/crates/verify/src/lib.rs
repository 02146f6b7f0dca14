//! Exact checks of the reflexion, Thom-Sebastiani and automorphism
//! identities, with reports in JSON and CSV.

pub mod case;
pub mod fits;
pub mod nearby;
pub mod phi;
pub mod reflexion;
pub mod report;

pub use case::{run_case, run_cases, suite, CheckCase, PAIRS};
pub use fits::{default_q, fit_zeta, term_lcm, Fitted};
pub use report::{CheckId, CheckReport, Entry, FitNote, Realization};

use motclass::MotError;
use series::SeriesError;
use thiserror::Error;
use zeta::ZetaError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Mot(#[from] MotError),
    #[error("invalid check: {0}")]
    Invalid(String),
}

impl VerifyError {
    /// Failures from running out of budget, or from a limit that does not
    /// exist, as opposed to bad input.
    pub fn is_budget(&self) -> bool {
        matches!(
            self,
            VerifyError::Zeta(ZetaError::BudgetExceeded(_))
                | VerifyError::Zeta(ZetaError::Mot(MotError::FieldTooLarge { .. }))
                | VerifyError::Mot(MotError::FieldTooLarge { .. })
                | VerifyError::Zeta(ZetaError::Series(SeriesError::NotLimitNormal(_)))
                | VerifyError::Series(SeriesError::NotLimitNormal(_))
        )
    }
}
