//! Elementary functions of finite Levi-Civita numbers.
//!
//! `f(c + dx)` is expanded around the standard part `c` in powers of the
//! infinitesimal `dx`. The value `f(c)` must exist in the coefficient backend,
//! so the rational backend only handles the trivial base points.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::series::{power_series, split_unit, terms_needed};
use crate::lc::{Elementary, ExtExp, LcError, LcNumber, Magnitude, Scalar};

fn factorial_reciprocals<C: Scalar>(count: usize) -> Vec<C> {
    let mut out = Vec::with_capacity(count);
    let mut f = BigRational::from_integer(BigInt::from(1));
    for k in 0..count {
        out.push(C::from_ratio(&f));
        f /= BigRational::from_integer(BigInt::from(k as i64 + 1));
    }
    out
}

fn base_value<C: Scalar>(c: &C, f: Elementary) -> Result<C, LcError> {
    c.elementary(f).ok_or_else(|| {
        LcError::Unsupported(format!(
            "{:?} of {:?} is not representable in the {} backend",
            f,
            c,
            C::BACKEND
        ))
    })
}

fn split_finite<C: Scalar>(x: &LcNumber<C>) -> Result<(C, LcNumber<C>), LcError> {
    if x.classify() == Magnitude::Infinite {
        return Err(LcError::Unsupported(
            "elementary functions need a finite argument".into(),
        ));
    }
    x.st_decompose()
}

fn result_horizon<C: Scalar>(x: &LcNumber<C>, cap: ExtExp) -> Result<ExtExp, LcError> {
    let h = x.horizon().min(cap);
    if h.is_infinite() {
        return Err(LcError::Unsupported(
            "an infinite expansion needs a finite horizon cap".into(),
        ));
    }
    Ok(h)
}

/// `exp(x)` for finite `x`.
pub fn exp_to<C: Scalar>(x: &LcNumber<C>, cap: ExtExp) -> Result<LcNumber<C>, LcError> {
    let (c, dx) = split_finite(x)?;
    let ec = base_value(&c, Elementary::Exp)?;
    if dx.is_zero() && x.is_exact() {
        return Ok(LcNumber::constant(ec));
    }
    let h = result_horizon(x, cap)?;
    let series = power_series(&dx, &factorial_reciprocals::<C>(terms_needed(&dx, h)), h);
    Ok(series.scale_by(&ec))
}

/// `(sin dx, cos dx)` for infinitesimal `dx`.
fn sin_cos_infinitesimal<C: Scalar>(dx: &LcNumber<C>, h: ExtExp) -> (LcNumber<C>, LcNumber<C>) {
    let n = terms_needed(dx, h);
    let inv = factorial_reciprocals::<C>(n);
    let mut sin_c = Vec::with_capacity(n);
    let mut cos_c = Vec::with_capacity(n);
    for (k, f) in inv.into_iter().enumerate() {
        let sign = if (k / 2) % 2 == 0 { f } else { -f };
        if k % 2 == 1 {
            sin_c.push(sign);
            cos_c.push(C::zero());
        } else {
            sin_c.push(C::zero());
            cos_c.push(sign);
        }
    }
    (power_series(dx, &sin_c, h), power_series(dx, &cos_c, h))
}

pub fn sin_to<C: Scalar>(x: &LcNumber<C>, cap: ExtExp) -> Result<LcNumber<C>, LcError> {
    let (c, dx) = split_finite(x)?;
    let (sc, cc) = (
        base_value(&c, Elementary::Sin)?,
        base_value(&c, Elementary::Cos)?,
    );
    if dx.is_zero() && x.is_exact() {
        return Ok(LcNumber::constant(sc));
    }
    let h = result_horizon(x, cap)?;
    let (s, co) = sin_cos_infinitesimal(&dx, h);
    Ok(&co.scale_by(&sc) + &s.scale_by(&cc))
}

pub fn cos_to<C: Scalar>(x: &LcNumber<C>, cap: ExtExp) -> Result<LcNumber<C>, LcError> {
    let (c, dx) = split_finite(x)?;
    let (sc, cc) = (
        base_value(&c, Elementary::Sin)?,
        base_value(&c, Elementary::Cos)?,
    );
    if dx.is_zero() && x.is_exact() {
        return Ok(LcNumber::constant(cc));
    }
    let h = result_horizon(x, cap)?;
    let (s, co) = sin_cos_infinitesimal(&dx, h);
    Ok(&co.scale_by(&cc) - &s.scale_by(&sc))
}

/// `ln(x)` for `x` with valuation zero (`ln ρ` has no series representative).
pub fn ln_to<C: Scalar>(x: &LcNumber<C>, cap: ExtExp) -> Result<LcNumber<C>, LcError> {
    if x.classify() != Magnitude::FiniteNonInfinitesimal {
        return Err(LcError::Unsupported(
            "ln needs an argument of valuation zero".into(),
        ));
    }
    let split = split_unit(x)?;
    let lc = base_value(&split.lead, Elementary::Ln)?;
    if split.u.is_zero() && x.is_exact() {
        return Ok(LcNumber::constant(lc));
    }
    let h = result_horizon(x, cap)?;
    let n = terms_needed(&split.u, h);
    let coeffs: Vec<C> = (0..n)
        .map(|k| {
            if k == 0 {
                C::zero()
            } else {
                let v = C::from_ratio(&BigRational::new(BigInt::from(1), BigInt::from(k as i64)));
                if k % 2 == 1 {
                    v
                } else {
                    -v
                }
            }
        })
        .collect();
    Ok(&power_series(&split.u, &coeffs, h) + &LcNumber::constant(lc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::series::inverse;
    use crate::lc::{Exponent, LcComplex, LcRational};
    use num_complex::Complex64;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn sine_of_rho_matches_taylor() {
        let s = sin_to(&LcRational::rho(), ExtExp::int(8)).unwrap();
        assert_eq!(s.coeff(Exponent::from_integer(1)), r(1, 1));
        assert_eq!(s.coeff(Exponent::from_integer(3)), r(-1, 6));
        assert_eq!(s.coeff(Exponent::from_integer(5)), r(1, 120));
        assert_eq!(s.coeff(Exponent::from_integer(7)), r(-1, 5040));
        assert_eq!(s.horizon(), ExtExp::int(8));
    }

    #[test]
    fn exp_then_ln_round_trips() {
        let x = &LcRational::rho() + &LcRational::monomial(r(1, 2), Exponent::new(3, 2));
        let e = exp_to(&x, ExtExp::int(10)).unwrap();
        let back = ln_to(&e, ExtExp::int(10)).unwrap();
        assert!((&back - &x).is_zero(), "{}", back);
    }

    #[test]
    fn float_backend_handles_nontrivial_base() {
        let one_plus = &LcComplex::one() + &LcComplex::rho();
        let s = sin_to(&one_plus, ExtExp::int(6)).unwrap();
        let c = cos_to(&one_plus, ExtExp::int(6)).unwrap();
        let pythagoras = &(&s * &s) + &(&c * &c);
        assert!((&pythagoras - &LcComplex::one()).is_zero());
        assert!(
            (s.coeff(Exponent::from_integer(1)) - Complex64::new(1f64.cos(), 0.0)).norm() < 1e-15
        );
    }

    #[test]
    fn rational_backend_refuses_transcendental_base() {
        let x = LcRational::constant(r(1, 1));
        assert!(exp_to(&x, ExtExp::int(4)).is_err());
        assert!(ln_to(&LcRational::rho(), ExtExp::int(4)).is_err());
        let _ = inverse(&x).unwrap();
    }
}
