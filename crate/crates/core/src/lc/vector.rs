use super::number::{LcNumber, Magnitude};
use super::scalar::Scalar;
use super::LcError;

/// A point of the d-dimensional asymptotic space, one real number per axis.
#[derive(Debug, Clone, PartialEq)]
pub struct LcVector<C> {
    components: Vec<LcNumber<C>>,
}

impl<C: Scalar> LcVector<C> {
    pub fn new(components: Vec<LcNumber<C>>) -> Result<Self, LcError> {
        if components.is_empty() {
            return Err(LcError::Dimension {
                expected: 1,
                found: 0,
            });
        }
        if components.iter().any(|c| !c.is_real()) {
            return Err(LcError::Order);
        }
        Ok(LcVector { components })
    }

    pub fn from_standard(point: &[C]) -> Result<Self, LcError> {
        Self::new(point.iter().cloned().map(LcNumber::constant).collect())
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn components(&self) -> &[LcNumber<C>] {
        &self.components
    }

    /// `true` iff every component of `self − r` is zero or infinitesimal.
    pub fn in_monad(&self, r: &[C]) -> Result<bool, LcError> {
        if r.len() != self.dim() {
            return Err(LcError::Dimension {
                expected: self.dim(),
                found: r.len(),
            });
        }
        Ok(self.components.iter().zip(r).all(|(x, ri)| {
            let offset = x - &LcNumber::constant(ri.clone());
            matches!(
                offset.classify(),
                Magnitude::Zero | Magnitude::Infinitesimal
            )
        }))
    }

    /// Every component is zero or infinitesimal.
    pub fn is_infinitesimal(&self) -> bool {
        self.components
            .iter()
            .all(|x| matches!(x.classify(), Magnitude::Zero | Magnitude::Infinitesimal))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lc::{Exponent, ExtExp, LcRational};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn s(pairs: &[(i64, i64)]) -> LcRational {
        LcRational::from_terms(
            pairs
                .iter()
                .map(|&(e, c)| (Exponent::from_integer(e), r(c, 1))),
            ExtExp::Infinity,
        )
    }

    #[test]
    fn monad_membership() {
        let x = LcVector::new(vec![s(&[(0, 1), (1, 1)]), s(&[(0, 2), (2, -1)])]).unwrap();
        assert!(x.in_monad(&[r(1, 1), r(2, 1)]).unwrap());
        let y = LcVector::new(vec![s(&[(0, 1), (-1, 1)])]).unwrap();
        assert!(!y.in_monad(&[r(1, 1)]).unwrap());
        let z = LcVector::new(vec![s(&[(1, 1)])]).unwrap();
        assert!(!z.in_monad(&[r(1, 2)]).unwrap());
    }

    #[test]
    fn dimension_mismatch() {
        let x = LcVector::new(vec![s(&[(1, 1)])]).unwrap();
        assert!(matches!(
            x.in_monad(&[r(0, 1), r(0, 1)]),
            Err(LcError::Dimension {
                expected: 1,
                found: 2
            })
        ));
    }
}
