//! Parser, evaluator and batch commands behind the `asym` binary.
//!
//! Exit codes: 0 on success, 2 on parse errors, 3 on domain errors.

pub mod commands;
pub mod eval;
pub mod fnspec;
pub mod poly;
pub mod syntax;

use asym_core::filter::FilterError;
use asym_core::growth::GrowthError;
use thiserror::Error;

pub use eval::{deserialize, eval, serialize, AnyValue, Env, EvalError, Value};
pub use syntax::{parse, Expr, Span, SyntaxError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CliError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("malformed specification: {0}")]
    Spec(String),
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error(transparent)]
    Filter(#[from] FilterError),
    #[error("domain error: {0}")]
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Syntax(_) | CliError::Spec(_) => 2,
            CliError::Eval(EvalError::Name { .. }) => 2,
            CliError::Eval(EvalError::Domain { .. }) => 3,
            CliError::Growth(GrowthError::Parse { .. }) => 2,
            CliError::Growth(_) => 3,
            CliError::Filter(FilterError::Parse { .. }) => 2,
            CliError::Filter(_) => 3,
            CliError::Domain(_) => 3,
        }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        }
    )*};
}

domain_from!(asym_core::mollify::MollifyError, asym_core::lc::LcError);

impl From<asym_core::asym::AsymError> for CliError {
    fn from(e: asym_core::asym::AsymError) -> Self {
        match e {
            asym_core::asym::AsymError::Domain(m) => CliError::Domain(m),
            other => CliError::Domain(other.to_string()),
        }
    }
}
