//! Inverses, n-th roots and power-series composition.
//!
//! Each nonzero `x` factors as `a·ρ^v·(1 + u)` with `v(u) > 0`; everything
//! here works on the unit-plus-infinitesimal factor `1 + u`.

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::lc::{Exponent, ExtExp, LcError, LcNumber, Scalar};

/// `x = a·ρ^v·(1 + u)`.
pub(crate) struct UnitSplit<C> {
    pub lead: C,
    pub val: Exponent,
    pub u: LcNumber<C>,
}

pub(crate) fn split_unit<C: Scalar>(x: &LcNumber<C>) -> Result<UnitSplit<C>, LcError> {
    let (val, lead) = x.leading().ok_or(LcError::DivisionByZero)?;
    let lead = lead.clone();
    let inv_lead = C::one() / lead.clone();
    let normalized = x.shift(-val).scale_by(&inv_lead);
    let u = &normalized - &LcNumber::one();
    Ok(UnitSplit { lead, val, u })
}

/// Evaluates `Σ_k coeffs[k]·u^k` by Horner's rule, truncating at `horizon`.
/// `u` must have positive valuation.
pub fn power_series<C: Scalar>(u: &LcNumber<C>, coeffs: &[C], horizon: ExtExp) -> LcNumber<C> {
    let mut acc = LcNumber::zero().with_horizon(horizon);
    for c in coeffs.iter().rev() {
        acc = (&acc * u).with_horizon(horizon);
        acc = (&acc + &LcNumber::constant(c.clone())).with_horizon(horizon);
    }
    acc
}

/// Number of series terms needed so that `u^K` lies beyond `horizon`.
pub(crate) fn terms_needed(u: &LcNumber<impl Scalar>, horizon: ExtExp) -> usize {
    match (u.valuation(), horizon) {
        (ExtExp::Infinity, _) => 1,
        (_, ExtExp::Infinity) => 1,
        (ExtExp::Finite(v), ExtExp::Finite(h)) => {
            if h <= Exponent::from_integer(0) {
                return 1;
            }
            let k = (h / v).ceil().to_integer();
            (k.max(0) as usize) + 1
        }
    }
}

fn unbounded() -> LcError {
    LcError::Unsupported("an infinite expansion needs a finite horizon cap".into())
}

/// Multiplicative inverse truncated at `min(h_x − 2·v(x), cap)`.
///
/// Uses Newton's iteration `w ← w + w·(1 − (1+u)·w)` on the unit factor;
/// the valuation of the residual doubles every step.
pub fn inverse_to<C: Scalar>(x: &LcNumber<C>, cap: ExtExp) -> Result<LcNumber<C>, LcError> {
    let split = split_unit(x)?;
    let inv_lead = C::one() / split.lead.clone();
    if split.u.is_zero() && x.is_exact() {
        return Ok(LcNumber::monomial(inv_lead, -split.val));
    }
    let result_horizon = (x.horizon() + (-split.val * 2)).min(cap);
    if result_horizon.is_infinite() {
        return Err(unbounded());
    }
    let rel = result_horizon + split.val;
    let unit = &LcNumber::one() + &split.u;
    let one = LcNumber::one();
    let mut w = LcNumber::one().with_horizon(rel);
    // v(residual) starts at v(u) and doubles, so this many steps reach `rel`
    let steps = terms_needed(&split.u, rel)
        .next_power_of_two()
        .trailing_zeros()
        + 1;
    for _ in 0..=steps {
        let residual = (&one - &(&unit * &w)).with_horizon(rel);
        if residual.is_zero() {
            return Ok(w.shift(-split.val).scale_by(&inv_lead));
        }
        w = (&w + &(&w * &residual)).with_horizon(rel);
    }
    if C::dust().is_some() {
        // what is left is rounding noise below the coefficient scale
        return Ok(w.shift(-split.val).scale_by(&inv_lead));
    }
    Err(LcError::Lift("inverse iteration did not converge".into()))
}

pub fn inverse<C: Scalar>(x: &LcNumber<C>) -> Result<LcNumber<C>, LcError> {
    inverse_to(x, crate::lc::default_horizon())
}

pub fn divide<C: Scalar>(x: &LcNumber<C>, y: &LcNumber<C>) -> Result<LcNumber<C>, LcError> {
    Ok(x * &inverse(y)?)
}

fn binomial_coefficients<C: Scalar>(alpha: &BigRational, count: usize) -> Vec<C> {
    let mut out = Vec::with_capacity(count);
    let mut c = BigRational::from_integer(BigInt::from(1));
    for k in 0..count {
        out.push(C::from_ratio(&c));
        let kk = BigRational::from_integer(BigInt::from(k as i64));
        c = c * (alpha - &kk) / (&kk + BigRational::from_integer(BigInt::from(1)));
    }
    out
}

/// Principal n-th root truncated at `min(h_x − v + v/n, cap)`.
pub fn nth_root_to<C: Scalar>(
    x: &LcNumber<C>,
    n: u32,
    cap: ExtExp,
) -> Result<LcNumber<C>, LcError> {
    if n == 0 {
        return Err(LcError::Root {
            n,
            reason: "root index must be positive".into(),
        });
    }
    if x.is_zero() {
        return Ok(x.clone());
    }
    let split = split_unit(x)?;
    let lead_root = split.lead.nth_root(n).ok_or_else(|| LcError::Root {
        n,
        reason: format!(
            "leading coefficient has no {}-th root in the {} backend",
            n,
            C::BACKEND
        ),
    })?;
    let root_val = split.val / Exponent::from_integer(n as i64);
    if split.u.is_zero() && x.is_exact() {
        return Ok(LcNumber::monomial(lead_root, root_val));
    }
    let result_horizon = (x.horizon() + (root_val - split.val)).min(cap);
    if result_horizon.is_infinite() {
        return Err(unbounded());
    }
    let rel = result_horizon + (-root_val);
    let alpha = BigRational::new(BigInt::from(1), BigInt::from(n));
    let coeffs = binomial_coefficients::<C>(&alpha, terms_needed(&split.u, rel));
    let unit_root = power_series(&split.u, &coeffs, rel);
    Ok(unit_root.shift(root_val).scale_by(&lead_root))
}

pub fn nth_root<C: Scalar>(x: &LcNumber<C>, n: u32) -> Result<LcNumber<C>, LcError> {
    nth_root_to(x, n, crate::lc::default_horizon())
}

pub fn sqrt<C: Scalar>(x: &LcNumber<C>) -> Result<LcNumber<C>, LcError> {
    nth_root(x, 2)
}

/// Integer power, negative exponents through the inverse.
pub fn powi<C: Scalar>(x: &LcNumber<C>, n: i64) -> Result<LcNumber<C>, LcError> {
    if n >= 0 {
        Ok(x.powi(n as u32))
    } else {
        Ok(inverse(x)?.powi((-n) as u32))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lc::LcRational;
    use num_bigint::BigInt;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn s(pairs: &[(i64, i64, i64, i64)]) -> LcRational {
        LcRational::from_terms(
            pairs
                .iter()
                .map(|&(en, ed, cn, cd)| (Exponent::new(en, ed), r(cn, cd))),
            ExtExp::Infinity,
        )
    }

    // residual oracle: x·y − 1 has no known terms below the product horizon
    fn assert_inverse(x: &LcRational, y: &LcRational) {
        let prod = x * y;
        assert!((&prod - &LcRational::one()).is_zero(), "x*y = {}", prod);
    }

    #[test]
    fn geometric_series() {
        let x = s(&[(0, 1, 1, 1), (1, 1, -1, 1)]);
        let y = inverse(&x).unwrap();
        assert_eq!(y.horizon(), ExtExp::int(16));
        for k in 0..16 {
            assert_eq!(y.coeff(Exponent::from_integer(k)), r(1, 1));
        }
        assert_inverse(&x, &y);
    }

    #[test]
    fn monomial_and_constant_inverse() {
        assert_eq!(inverse(&LcRational::rho()).unwrap(), s(&[(-1, 1, 1, 1)]));
        assert_eq!(inverse(&s(&[(0, 1, 2, 1)])).unwrap(), s(&[(0, 1, 1, 2)]));
        assert!(matches!(
            inverse(&LcRational::zero()),
            Err(LcError::DivisionByZero)
        ));
    }

    #[test]
    fn inverse_horizon_tracks_input() {
        let x = LcRational::from_terms(
            [
                (Exponent::from_integer(1), r(1, 1)),
                (Exponent::from_integer(2), r(3, 1)),
            ],
            ExtExp::int(8),
        );
        let y = inverse(&x).unwrap();
        assert_eq!(y.horizon(), ExtExp::int(6));
        assert_inverse(&x, &y);
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt(&s(&[(2, 1, 1, 1)])).unwrap(), LcRational::rho());
        let x = s(&[(0, 1, 1, 1), (1, 1, 1, 1)]);
        let y = sqrt(&x).unwrap();
        assert_eq!(y.coeff(Exponent::from_integer(1)), r(1, 2));
        assert_eq!(y.coeff(Exponent::from_integer(2)), r(-1, 8));
        assert!((&y.powi(2) - &x).is_zero());
    }

    #[test]
    fn cube_root_of_scaled_unit() {
        let x = s(&[(3, 1, 8, 1), (4, 1, 8, 1)]);
        let y = nth_root(&x, 3).unwrap();
        assert_eq!(y.valuation(), ExtExp::int(1));
        assert_eq!(y.coeff(Exponent::from_integer(1)), r(2, 1));
        assert_eq!(y.coeff(Exponent::from_integer(2)), r(2, 3));
        assert_eq!(y.coeff(Exponent::from_integer(3)), r(-2, 9));
        assert!((&y.powi(3) - &x).is_zero());
    }

    #[test]
    fn fractional_valuation_root() {
        let x = s(&[(1, 1, 1, 1), (2, 1, 1, 1)]);
        let y = sqrt(&x).unwrap();
        assert_eq!(y.valuation(), ExtExp::Finite(Exponent::new(1, 2)));
        assert!((&y.powi(2) - &x).is_zero());
    }

    #[test]
    fn negative_even_root_is_rejected() {
        let x = s(&[(0, 1, -4, 1)]);
        assert!(matches!(sqrt(&x), Err(LcError::Root { n: 2, .. })));
        assert_eq!(
            nth_root(&s(&[(0, 1, -8, 1)]), 3).unwrap(),
            s(&[(0, 1, -2, 1)])
        );
    }
}
