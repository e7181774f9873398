//! Runtime-tagged numbers, for callers that pick the backend dynamically.

use std::cmp::Ordering;
use std::fmt::{self, Display};

use super::number::{LcComplex, LcRational, Magnitude};
use super::scalar::Backend;
use super::{ExtExp, LcError};

#[derive(Debug, Clone, PartialEq)]
pub enum AnyLc {
    Rational(LcRational),
    Float(LcComplex),
}

macro_rules! dispatch2 {
    ($a:expr, $b:expr, |$x:ident, $y:ident| $body:expr) => {
        match ($a, $b) {
            (AnyLc::Rational($x), AnyLc::Rational($y)) => Ok(AnyLc::Rational($body)),
            (AnyLc::Float($x), AnyLc::Float($y)) => Ok(AnyLc::Float($body)),
            (l, r) => Err(LcError::Backend {
                left: l.backend(),
                right: r.backend(),
            }),
        }
    };
}

impl AnyLc {
    pub fn backend(&self) -> Backend {
        match self {
            AnyLc::Rational(_) => Backend::ExactRational,
            AnyLc::Float(_) => Backend::ComplexFloat,
        }
    }

    pub fn add(&self, other: &AnyLc) -> Result<AnyLc, LcError> {
        dispatch2!(self, other, |x, y| x + y)
    }

    pub fn sub(&self, other: &AnyLc) -> Result<AnyLc, LcError> {
        dispatch2!(self, other, |x, y| x - y)
    }

    pub fn mul(&self, other: &AnyLc) -> Result<AnyLc, LcError> {
        dispatch2!(self, other, |x, y| x * y)
    }

    pub fn compare(&self, other: &AnyLc) -> Result<Ordering, LcError> {
        match (self, other) {
            (AnyLc::Rational(x), AnyLc::Rational(y)) => x.compare(y),
            (AnyLc::Float(x), AnyLc::Float(y)) => x.compare(y),
            (l, r) => Err(LcError::Backend {
                left: l.backend(),
                right: r.backend(),
            }),
        }
    }

    pub fn valuation(&self) -> ExtExp {
        match self {
            AnyLc::Rational(x) => x.valuation(),
            AnyLc::Float(x) => x.valuation(),
        }
    }

    pub fn classify(&self) -> Magnitude {
        match self {
            AnyLc::Rational(x) => x.classify(),
            AnyLc::Float(x) => x.classify(),
        }
    }

    pub fn horizon(&self) -> ExtExp {
        match self {
            AnyLc::Rational(x) => x.horizon(),
            AnyLc::Float(x) => x.horizon(),
        }
    }
}

impl Display for AnyLc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyLc::Rational(x) => x.fmt(f),
            AnyLc::Float(x) => x.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixed_backends_are_rejected() {
        let a = AnyLc::Rational(LcRational::rho());
        let b = AnyLc::Float(LcComplex::rho());
        assert!(matches!(a.add(&b), Err(LcError::Backend { .. })));
        assert!(a.add(&a).is_ok());
    }
}
