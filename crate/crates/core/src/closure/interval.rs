use std::cmp::Ordering;

use crate::lc::{LcError, LcNumber, Scalar};

/// Closed interval `[lo, hi]` of real numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct LcInterval<C> {
    lo: LcNumber<C>,
    hi: LcNumber<C>,
}

impl<C: Scalar> LcInterval<C> {
    pub fn new(lo: LcNumber<C>, hi: LcNumber<C>) -> Result<Self, LcError> {
        if lo.compare(&hi)? == Ordering::Greater {
            return Err(LcError::Nesting { index: 0 });
        }
        Ok(LcInterval { lo, hi })
    }

    pub fn lo(&self) -> &LcNumber<C> {
        &self.lo
    }

    pub fn hi(&self) -> &LcNumber<C> {
        &self.hi
    }

    pub fn contains(&self, x: &LcNumber<C>) -> Result<bool, LcError> {
        Ok(self.lo.compare(x)? != Ordering::Greater && x.compare(&self.hi)? != Ordering::Greater)
    }

    pub fn contains_interval(&self, inner: &Self) -> Result<bool, LcError> {
        Ok(self.contains(&inner.lo)? && self.contains(&inner.hi)?)
    }

    pub fn midpoint(&self) -> LcNumber<C> {
        let half = C::one() / C::from_i64(2);
        (&self.lo + &self.hi).scale_by(&half)
    }
}

/// A point common to a finite nested family: the midpoint of the innermost
/// interval.
pub fn nested_interval_point<C: Scalar>(
    intervals: &[LcInterval<C>],
) -> Result<LcNumber<C>, LcError> {
    let last = intervals
        .last()
        .ok_or_else(|| LcError::Unsupported("empty interval family".into()))?;
    for (k, pair) in intervals.windows(2).enumerate() {
        if !pair[0].contains_interval(&pair[1])? {
            return Err(LcError::Nesting { index: k + 1 });
        }
    }
    Ok(last.midpoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lc::{Exponent, ExtExp, LcRational};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn s(pairs: &[(i64, i64)]) -> LcRational {
        LcRational::from_terms(
            pairs.iter().map(|&(e, c)| {
                (
                    Exponent::from_integer(e),
                    BigRational::from_integer(BigInt::from(c)),
                )
            }),
            ExtExp::Infinity,
        )
    }

    fn iv(lo: LcRational, hi: LcRational) -> LcInterval<BigRational> {
        LcInterval::new(lo, hi).unwrap()
    }

    #[test]
    fn midpoint_of_innermost() {
        let family = vec![
            iv(s(&[]), s(&[(0, 1)])),
            iv(s(&[(1, 1)]), s(&[(0, 1), (1, -1)])),
            iv(s(&[(1, 2)]), s(&[(1, 3)])),
        ];
        let p = nested_interval_point(&family).unwrap();
        assert_eq!(
            p,
            LcRational::monomial(
                BigRational::new(BigInt::from(5), BigInt::from(2)),
                Exponent::from_integer(1)
            )
        );
        for i in &family {
            assert!(i.contains(&p).unwrap());
        }
    }

    #[test]
    fn degenerate_and_infinite_intervals() {
        let a = s(&[(0, 3), (2, 1)]);
        assert_eq!(
            nested_interval_point(&[iv(a.clone(), a.clone())]).unwrap(),
            a
        );
        let family = vec![
            iv(s(&[(-1, -1)]), s(&[(-1, 1)])),
            iv(s(&[(0, -1)]), s(&[(0, 1)])),
        ];
        assert!(nested_interval_point(&family).unwrap().is_zero());
    }

    #[test]
    fn rejects_non_nested() {
        let family = vec![iv(s(&[]), s(&[(1, 1)])), iv(s(&[]), s(&[(0, 1)]))];
        assert!(matches!(
            nested_interval_point(&family),
            Err(LcError::Nesting { index: 1 })
        ));
    }

    #[test]
    fn no_common_point_below_every_power() {
        // a positive point inside (0, ρ^n) needs valuation ≥ n, so any fixed
        // positive point leaves the family at some finite n
        for p in [s(&[(3, 1)]), s(&[(7, 2), (9, 1)]), s(&[(1, 1), (2, -5)])] {
            let v = p.valuation().finite().unwrap();
            let n = v.ceil().to_integer() + 1;
            let ceiling = LcRational::monomial(
                BigRational::from_integer(BigInt::from(1)),
                Exponent::from_integer(n),
            );
            assert_eq!(p.compare(&ceiling).unwrap(), Ordering::Greater);
        }
    }
}
