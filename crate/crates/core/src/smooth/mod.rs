//! Smooth coefficient providers with exact derivatives through Taylor jets.

mod expr;
mod jet;

use thiserror::Error;

pub use expr::{bump_jet, bump_value, Smooth, SmoothFn, Support, Unary};
pub use jet::{factorial, layout, multi_factorial, Jet, Layout};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SmoothError {
    #[error("outside the domain: {0}")]
    Domain(String),
    #[error("derivative of order {requested} requested, provider supports {max}")]
    DerivativeOrder { requested: usize, max: usize },
    #[error("point has dimension {found}, expression needs {needed}")]
    Dimension { needed: usize, found: usize },
}
