//! Truncated Levi-Civita numbers.
//!
//! A number is a finite sparse series `Σ c_q ρ^q` together with a horizon:
//! every exponent at or above the horizon is unknown. Exact values carry an
//! infinite horizon. Binary operations compute the tightest sound horizon.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt::{self, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_rational::BigRational;

use super::exponent::{rho_power_text, Exponent, ExtExp};
use super::scalar::{Backend, Scalar, ScalarText};
use super::LcError;

/// The library-wide default truncation horizon for operations that produce
/// infinite expansions.
pub const DEFAULT_HORIZON: i64 = 16;

pub fn default_horizon() -> ExtExp {
    ExtExp::int(DEFAULT_HORIZON)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LcNumber<C> {
    terms: BTreeMap<Exponent, C>,
    horizon: ExtExp,
}

pub type LcRational = LcNumber<BigRational>;
pub type LcComplex = LcNumber<Complex64>;

/// Result of the standard part map.
#[derive(Debug, Clone, PartialEq)]
pub enum ExtendedScalar<C> {
    Finite(C),
    PosInfinity,
    NegInfinity,
    /// Infinite element with a non-real leading coefficient.
    ComplexInfinity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Magnitude {
    Zero,
    Infinitesimal,
    FiniteNonInfinitesimal,
    Infinite,
}

impl Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Magnitude::Zero => "Zero",
            Magnitude::Infinitesimal => "Infinitesimal",
            Magnitude::FiniteNonInfinitesimal => "FiniteNonInfinitesimal",
            Magnitude::Infinite => "Infinite",
        })
    }
}

/// Adds `c` at `q`, tracking the summed magnitude for dust removal.
fn accumulate<C: Scalar>(map: &mut BTreeMap<Exponent, (C, f64)>, q: Exponent, c: C) {
    let m = c.magnitude();
    match map.remove(&q) {
        Some((prev, scale)) => {
            map.insert(q, (prev + c, scale + m));
        }
        None => {
            map.insert(q, (c, m));
        }
    }
}

impl<C: Scalar> LcNumber<C> {
    /// Exact zero (infinite horizon).
    pub fn zero() -> Self {
        LcNumber {
            terms: BTreeMap::new(),
            horizon: ExtExp::Infinity,
        }
    }

    pub fn one() -> Self {
        Self::constant(C::one())
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, Exponent::from_integer(0))
    }

    /// Exact `c·ρ^q`.
    pub fn monomial(c: C, q: Exponent) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(q, c);
        }
        LcNumber {
            terms,
            horizon: ExtExp::Infinity,
        }
    }

    /// The distinguished infinitesimal ρ.
    pub fn rho() -> Self {
        Self::monomial(C::one(), Exponent::from_integer(1))
    }

    /// Builds a number from (exponent, coefficient) pairs; repeated exponents
    /// are summed, exponents at or beyond the horizon dropped, zeros removed.
    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, C)>, horizon: ExtExp) -> Self {
        let mut map: BTreeMap<Exponent, (C, f64)> = BTreeMap::new();
        for (q, c) in terms {
            if horizon.above(q) {
                accumulate(&mut map, q, c);
            }
        }
        Self::normalized(map, horizon)
    }

    /// Drops terms beyond the horizon and float dust relative to the
    /// magnitude of what was summed into each coefficient.
    fn normalized(terms: BTreeMap<Exponent, (C, f64)>, horizon: ExtExp) -> Self {
        let terms = terms
            .into_iter()
            .filter(|(q, _)| horizon.above(*q))
            .map(|(q, (c, scale))| (q, c.clean(scale)))
            .filter(|(_, c)| !c.is_zero())
            .collect();
        LcNumber { terms, horizon }
    }

    pub fn backend(&self) -> Backend {
        C::BACKEND
    }

    pub fn horizon(&self) -> ExtExp {
        self.horizon
    }

    pub fn is_exact(&self) -> bool {
        self.horizon.is_infinite()
    }

    /// Truncates to `min(self.horizon, h)`.
    pub fn with_horizon(&self, h: ExtExp) -> Self {
        let horizon = self.horizon.min(h);
        LcNumber {
            terms: self
                .terms
                .iter()
                .filter(|(q, _)| horizon.above(**q))
                .map(|(q, c)| (*q, c.clone()))
                .collect(),
            horizon,
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Exponent, &C)> + '_ {
        self.terms.iter().map(|(q, c)| (*q, c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    /// `true` when no term is known below the horizon.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, q: Exponent) -> C {
        self.terms.get(&q).cloned().unwrap_or_else(C::zero)
    }

    /// Least exponent of the known support, `+∞` when empty.
    pub fn valuation(&self) -> ExtExp {
        self.terms
            .keys()
            .next()
            .map_or(ExtExp::Infinity, |q| ExtExp::Finite(*q))
    }

    /// Lower bound on the true valuation: the horizon when nothing is known.
    pub(crate) fn valuation_bound(&self) -> ExtExp {
        self.valuation().min(self.horizon)
    }

    pub fn leading(&self) -> Option<(Exponent, &C)> {
        self.terms.iter().next().map(|(q, c)| (*q, c))
    }

    pub fn is_real(&self) -> bool {
        self.terms.values().all(Scalar::is_real)
    }

    pub fn scale_by(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::normalized(
            self.terms
                .iter()
                .map(|(q, a)| (*q, (a.clone() * c.clone(), a.magnitude() * c.magnitude())))
                .collect(),
            self.horizon,
        )
    }

    /// Multiplies by the exact monomial `ρ^q`.
    pub fn shift(&self, q: Exponent) -> Self {
        LcNumber {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e + q, c.clone()))
                .collect(),
            horizon: self.horizon + q,
        }
    }

    /// Integer power by repeated squaring (non-negative exponents only).
    pub fn powi(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                result = &result * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// `|x|_v = e^{-v(x)}`, zero for the zero element.
    pub fn valuation_norm(&self) -> f64 {
        match self.valuation() {
            ExtExp::Infinity => 0.0,
            v => (-v.to_f64()).exp(),
        }
    }

    pub fn valuation_metric(&self, other: &Self) -> f64 {
        (self - other).valuation_norm()
    }

    /// Trichotomy on known terms. Both operands must be real.
    pub fn compare(&self, other: &Self) -> Result<Ordering, LcError> {
        if !self.is_real() || !other.is_real() {
            return Err(LcError::Order);
        }
        let diff = self - other;
        Ok(match diff.leading() {
            None => Ordering::Equal,
            Some((_, c)) => c.real_sign().ok_or(LcError::Order)?,
        })
    }

    pub fn signum(&self) -> Result<Ordering, LcError> {
        self.compare(&Self::zero())
    }

    pub fn classify(&self) -> Magnitude {
        match self.valuation() {
            ExtExp::Infinity => Magnitude::Zero,
            ExtExp::Finite(v) => match v.cmp(&Exponent::from_integer(0)) {
                Ordering::Greater => Magnitude::Infinitesimal,
                Ordering::Equal => Magnitude::FiniteNonInfinitesimal,
                Ordering::Less => Magnitude::Infinite,
            },
        }
    }

    pub fn standard_part(&self) -> ExtendedScalar<C> {
        match self.leading() {
            None => ExtendedScalar::Finite(C::zero()),
            Some((v, c)) if v < Exponent::from_integer(0) => match c.real_sign() {
                Some(Ordering::Greater) => ExtendedScalar::PosInfinity,
                Some(Ordering::Less) => ExtendedScalar::NegInfinity,
                _ => ExtendedScalar::ComplexInfinity,
            },
            Some(_) => ExtendedScalar::Finite(self.coeff(Exponent::from_integer(0))),
        }
    }

    /// Splits a non-infinite `x` into `st(x) + dx` with `v(dx) > 0`.
    pub fn st_decompose(&self) -> Result<(C, Self), LcError> {
        if self.classify() == Magnitude::Infinite {
            return Err(LcError::Decomposition);
        }
        let zero = Exponent::from_integer(0);
        let c = self.coeff(zero);
        let mut rest = self.terms.clone();
        rest.remove(&zero);
        Ok((
            c,
            LcNumber {
                terms: rest,
                horizon: self.horizon,
            },
        ))
    }

    /// Agreement of all terms below the common horizon.
    pub fn agrees_with(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    /// Converts the coefficients to the complex float backend.
    pub fn to_complex(&self) -> LcComplex {
        LcNumber::from_terms(
            self.terms.iter().map(|(q, c)| (*q, c.to_complex())),
            self.horizon,
        )
    }

    pub fn map_coeffs<D: Scalar>(&self, f: impl Fn(&C) -> D) -> LcNumber<D> {
        LcNumber::from_terms(self.terms.iter().map(|(q, c)| (*q, f(c))), self.horizon)
    }
}

impl<C: Scalar> Default for LcNumber<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<'a, C: Scalar> Add<&'a LcNumber<C>> for &'a LcNumber<C> {
    type Output = LcNumber<C>;

    fn add(self, rhs: &LcNumber<C>) -> LcNumber<C> {
        let horizon = self.horizon.min(rhs.horizon);
        let mut terms = BTreeMap::new();
        for (q, c) in self.terms.iter().chain(rhs.terms.iter()) {
            if horizon.above(*q) {
                accumulate(&mut terms, *q, c.clone());
            }
        }
        LcNumber::normalized(terms, horizon)
    }
}

impl<C: Scalar> Neg for &LcNumber<C> {
    type Output = LcNumber<C>;

    fn neg(self) -> LcNumber<C> {
        LcNumber {
            terms: self.terms.iter().map(|(q, c)| (*q, -c.clone())).collect(),
            horizon: self.horizon,
        }
    }
}

impl<'a, C: Scalar> Sub<&'a LcNumber<C>> for &'a LcNumber<C> {
    type Output = LcNumber<C>;

    fn sub(self, rhs: &LcNumber<C>) -> LcNumber<C> {
        self + &(-rhs)
    }
}

impl<'a, C: Scalar> Mul<&'a LcNumber<C>> for &'a LcNumber<C> {
    type Output = LcNumber<C>;

    fn mul(self, rhs: &LcNumber<C>) -> LcNumber<C> {
        let horizon =
            (self.horizon + rhs.valuation_bound()).min(rhs.horizon + self.valuation_bound());
        let mut terms = BTreeMap::new();
        for (p, a) in &self.terms {
            for (q, b) in &rhs.terms {
                let e = *p + *q;
                if !horizon.above(e) {
                    // rhs terms are sorted, later ones only get larger
                    break;
                }
                accumulate(&mut terms, e, a.clone() * b.clone());
            }
        }
        LcNumber::normalized(terms, horizon)
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<C: Scalar> $tr<LcNumber<C>> for LcNumber<C> {
            type Output = LcNumber<C>;
            fn $m(self, rhs: LcNumber<C>) -> LcNumber<C> {
                (&self).$m(&rhs)
            }
        }
        impl<'a, C: Scalar> $tr<&'a LcNumber<C>> for LcNumber<C> {
            type Output = LcNumber<C>;
            fn $m(self, rhs: &'a LcNumber<C>) -> LcNumber<C> {
                (&self).$m(rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl<C: Scalar> Neg for LcNumber<C> {
    type Output = LcNumber<C>;

    fn neg(self) -> LcNumber<C> {
        -&self
    }
}

impl<C: Scalar + ScalarText> LcNumber<C> {
    /// Series text, e.g. `3*r^-2 + 1 + 5*r^(1/2)`.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (q, c)) in self.terms.iter().enumerate() {
            let mut coeff = c.to_text();
            let negative = coeff.starts_with('-');
            if negative {
                coeff.remove(0);
            }
            if i == 0 {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            let unit = coeff == "1";
            if *q == Exponent::from_integer(0) {
                out.push_str(&coeff);
            } else if unit {
                out.push_str(&rho_power_text(*q));
            } else {
                out.push_str(&coeff);
                out.push('*');
                out.push_str(&rho_power_text(*q));
            }
        }
        out
    }
}

impl<C: Scalar + ScalarText> Display for LcNumber<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl<C: Scalar + ScalarText> Display for ExtendedScalar<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedScalar::Finite(c) => f.write_str(&c.to_text()),
            ExtendedScalar::PosInfinity => f.write_str("+inf"),
            ExtendedScalar::NegInfinity => f.write_str("-inf"),
            ExtendedScalar::ComplexInfinity => f.write_str("infinite"),
        }
    }
}
