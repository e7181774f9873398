//! Asymptotic functions `Σ a_q(x) ρ^q` with smooth coefficients: algebra,
//! point values on monads, moderateness and negligibility, pairing, and
//! sheaf operations.

mod analysis;
mod domain;
mod function;
mod sheaf;

use thiserror::Error;

use crate::lc::{Exponent, ExtExp, LcError};
use crate::smooth::SmoothError;

pub use analysis::{
    gradient_constancy, is_moderate, is_negligible, pair, pair_with_tol, support, weak_equal,
    Constancy, ModerateReport, NegligibleMode, SupportSet, TermSup, WeakEquality, WeakWitness,
    NEGLIGIBLE_TOL,
};
pub use domain::{CompactBox, Domain, OpenBox};
pub use function::{AsymptoticFunction, AsymptoticPoint};
pub use sheaf::{glue, glue_with_probe, restrict, BoxWeight};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AsymError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("derivative of order {requested} requested, provider supports {max}")]
    DerivativeOrder { requested: usize, max: usize },
    #[error("provider failure: {0}")]
    Provider(String),
    #[error("mode precondition violated: {0}")]
    Mode(String),
    #[error("incompatible locals at {point:?}: exponent {exponent} differs by {difference:e}")]
    Glue {
        point: Vec<f64>,
        exponent: Exponent,
        difference: f64,
    },
    #[error("domain is not connected")]
    Connectivity,
    #[error("probe {probe} is not below the horizon {horizon}")]
    Horizon { probe: Exponent, horizon: ExtExp },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error(transparent)]
    Smooth(SmoothError),
    #[error(transparent)]
    Lc(#[from] LcError),
}

impl From<SmoothError> for AsymError {
    fn from(e: SmoothError) -> Self {
        match e {
            SmoothError::DerivativeOrder { requested, max } => {
                AsymError::DerivativeOrder { requested, max }
            }
            SmoothError::Dimension { needed, found } => AsymError::Dimension {
                expected: needed,
                found,
            },
            other => AsymError::Smooth(other),
        }
    }
}
