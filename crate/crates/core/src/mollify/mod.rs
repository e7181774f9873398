//! Moment-vanishing mollifiers, the ρ-delta kernel, cut-offs, and the
//! embedding of distributions into asymptotic functions.

mod embed;
mod kernel;
mod profile;
mod rate;
mod test_fn;

use thiserror::Error;

use crate::asym::AsymError;
use crate::smooth::SmoothError;

pub use embed::{embed_distribution, embed_with, DistributionSpec};
pub use kernel::{cutoff, rho_delta, DeltaKernel};
pub use profile::{
    build_mollifier, build_mollifier_with, solve_profile, Basis, Mollifier, Profile,
    MAX_MOMENT_ORDER,
};
pub use rate::{convergence_rate, reference_pairing, sup_rate, Rate, RateReport, RateRow};
pub use test_fn::{TestFunction, QUAD_TOL};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MollifyError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("moment system of order {n} cannot be solved: {reason}")]
    MomentSystem { n: usize, reason: String },
    #[error("unsupported distribution: {0}")]
    Spec(String),
    #[error(transparent)]
    Smooth(#[from] SmoothError),
    #[error(transparent)]
    Asym(#[from] AsymError),
}
