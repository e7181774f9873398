//! Coefficient backends for Levi-Civita numbers.
//!
//! Two backends exist: exact rationals (`BigRational`) and complex floats
//! (`Complex64`). Everything in the field layer is generic over [`Scalar`].

use std::cmp::Ordering;
use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Which coefficient backend a number uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Backend {
    ExactRational,
    ComplexFloat,
}

impl Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::ExactRational => f.write_str("rational"),
            Backend::ComplexFloat => f.write_str("float"),
        }
    }
}

/// Elementary functions applied coefficientwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Elementary {
    Exp,
    Ln,
    Sin,
    Cos,
}

/// Relative dust threshold applied by the float backend during normalization.
pub const FLOAT_DUST: f64 = 1e-13;

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn from_ratio(q: &BigRational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_ratio(&BigRational::from_integer(BigInt::from(n)))
    }

    /// Approximate modulus, used for dust thresholds and reporting.
    fn magnitude(&self) -> f64;

    /// `Some(sign)` when the value is real, `None` for genuinely complex values.
    fn real_sign(&self) -> Option<Ordering>;

    fn is_real(&self) -> bool {
        self.real_sign().is_some()
    }

    /// Principal n-th root, if it exists in this backend.
    fn nth_root(&self, n: u32) -> Option<Self>;

    fn to_complex(&self) -> Complex64;

    /// Converts a float value into this backend. Exact backends refuse.
    fn from_complex(c: Complex64) -> Option<Self>;

    /// Value of an elementary function, when representable in this backend.
    fn elementary(&self, f: Elementary) -> Option<Self>;

    /// Relative dust threshold; `None` means coefficients are never dropped.
    fn dust() -> Option<f64> {
        None
    }

    /// Removes dust relative to `scale`. Exact backends return the value as is.
    fn clean(self, _scale: f64) -> Self {
        self
    }
}

impl Scalar for BigRational {
    const BACKEND: Backend = Backend::ExactRational;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn from_ratio(q: &BigRational) -> Self {
        q.clone()
    }

    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }

    fn real_sign(&self) -> Option<Ordering> {
        Some(match self.numer().sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        })
    }

    fn nth_root(&self, n: u32) -> Option<Self> {
        if n == 0 {
            return None;
        }
        if n == 1 || Zero::is_zero(self) {
            return Some(self.clone());
        }
        let negative = self.is_negative();
        if negative && n.is_multiple_of(2) {
            return None;
        }
        let num = self.numer().abs();
        let den = self.denom().clone();
        let rn = num.nth_root(n);
        let rd = den.nth_root(n);
        if num::pow(&rn, n) != num || num::pow(&rd, n) != den {
            return None;
        }
        let root = BigRational::new(rn, rd);
        Some(if negative { -root } else { root })
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn from_complex(_c: Complex64) -> Option<Self> {
        None
    }

    fn elementary(&self, f: Elementary) -> Option<Self> {
        let zero = Zero::is_zero(self);
        let one = One::is_one(self);
        match f {
            Elementary::Exp | Elementary::Cos if zero => Some(One::one()),
            Elementary::Sin if zero => Some(Zero::zero()),
            Elementary::Ln if one => Some(Zero::zero()),
            _ => None,
        }
    }
}

mod num {
    use num_bigint::BigInt;
    use num_traits::One;

    pub fn pow(base: &BigInt, n: u32) -> BigInt {
        let mut acc = BigInt::one();
        for _ in 0..n {
            acc *= base;
        }
        acc
    }
}

impl Scalar for Complex64 {
    const BACKEND: Backend = Backend::ComplexFloat;

    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn from_ratio(q: &BigRational) -> Self {
        Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn real_sign(&self) -> Option<Ordering> {
        if self.im != 0.0 {
            return None;
        }
        self.re.partial_cmp(&0.0)
    }

    fn nth_root(&self, n: u32) -> Option<Self> {
        if n == 0 {
            return None;
        }
        if self.im == 0.0 && self.re < 0.0 && n % 2 == 1 {
            // real odd root of a negative real stays real
            return Some(Complex64::new(-(-self.re).powf(1.0 / n as f64), 0.0));
        }
        if self.im == 0.0 && self.re >= 0.0 {
            return Some(Complex64::new(self.re.powf(1.0 / n as f64), 0.0));
        }
        Some(self.powf(1.0 / n as f64))
    }

    fn to_complex(&self) -> Complex64 {
        *self
    }

    fn from_complex(c: Complex64) -> Option<Self> {
        Some(c)
    }

    fn elementary(&self, f: Elementary) -> Option<Self> {
        Some(match f {
            Elementary::Exp => self.exp(),
            Elementary::Ln => {
                if Scalar::is_zero(self) {
                    return None;
                }
                self.ln()
            }
            Elementary::Sin => self.sin(),
            Elementary::Cos => self.cos(),
        })
    }

    fn dust() -> Option<f64> {
        Some(FLOAT_DUST)
    }

    fn clean(self, scale: f64) -> Self {
        let cut = FLOAT_DUST * scale;
        let re = if self.re.abs() < cut { 0.0 } else { self.re };
        let im = if self.im.abs() < cut { 0.0 } else { self.im };
        Complex64::new(re, im)
    }
}

/// Renders a coefficient for the series text format.
pub trait ScalarText {
    fn to_text(&self) -> String;
}

impl ScalarText for BigRational {
    fn to_text(&self) -> String {
        if self.is_integer() {
            self.numer().to_string()
        } else {
            format!("{}/{}", self.numer(), self.denom())
        }
    }
}

impl ScalarText for Complex64 {
    fn to_text(&self) -> String {
        if self.im == 0.0 {
            format!("{}", self.re)
        } else if self.re == 0.0 {
            format!("{}i", self.im)
        } else {
            format!("({}{:+}i)", self.re, self.im)
        }
    }
}
