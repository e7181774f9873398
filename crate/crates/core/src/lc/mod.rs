//! The truncated Levi-Civita field: arithmetic, order, valuation, standard
//! part and monads.

mod any;
mod exponent;
mod number;
mod scalar;
mod vector;

pub use any::AnyLc;
pub use exponent::{rho_power_text, Exponent, ExtExp};
pub use number::{
    default_horizon, ExtendedScalar, LcComplex, LcNumber, LcRational, Magnitude, DEFAULT_HORIZON,
};
pub use scalar::{Backend, Elementary, Scalar, ScalarText, FLOAT_DUST};
pub use vector::LcVector;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LcError {
    #[error("backend mismatch: {left} vs {right}")]
    Backend { left: Backend, right: Backend },
    #[error("ordering is only defined for real numbers")]
    Order,
    #[error("infinite numbers have no standard-part decomposition")]
    Decomposition,
    #[error("division by zero")]
    DivisionByZero,
    #[error("no {n}-th root: {reason}")]
    Root { n: u32, reason: String },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("root lifting stalled: {0}")]
    Lift(String),
    #[error("intervals are not nested at position {index}")]
    Nesting { index: usize },
    #[error("{0}")]
    Unsupported(String),
}
