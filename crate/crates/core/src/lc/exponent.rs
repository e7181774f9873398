use std::fmt::{self, Display};
use std::ops::Add;

use num_rational::Rational64;

/// Exponents of ρ are rationals.
pub type Exponent = Rational64;

/// A rational extended by +∞; used for valuations and truncation horizons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtExp {
    Finite(Exponent),
    Infinity,
}

impl ExtExp {
    pub fn int(n: i64) -> Self {
        ExtExp::Finite(Exponent::from_integer(n))
    }

    pub fn finite(self) -> Option<Exponent> {
        match self {
            ExtExp::Finite(q) => Some(q),
            ExtExp::Infinity => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, ExtExp::Infinity)
    }

    /// `true` when the exponent `q` lies strictly below this bound.
    pub fn above(self, q: Exponent) -> bool {
        match self {
            ExtExp::Finite(h) => q < h,
            ExtExp::Infinity => true,
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            ExtExp::Finite(q) => *q.numer() as f64 / *q.denom() as f64,
            ExtExp::Infinity => f64::INFINITY,
        }
    }
}

impl From<Exponent> for ExtExp {
    fn from(q: Exponent) -> Self {
        ExtExp::Finite(q)
    }
}

impl Add for ExtExp {
    type Output = ExtExp;

    fn add(self, rhs: ExtExp) -> ExtExp {
        match (self, rhs) {
            (ExtExp::Finite(a), ExtExp::Finite(b)) => ExtExp::Finite(a + b),
            _ => ExtExp::Infinity,
        }
    }
}

impl Add<Exponent> for ExtExp {
    type Output = ExtExp;

    fn add(self, rhs: Exponent) -> ExtExp {
        self + ExtExp::Finite(rhs)
    }
}

impl Display for ExtExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtExp::Finite(q) => write!(f, "{}", q),
            ExtExp::Infinity => f.write_str("inf"),
        }
    }
}

/// Writes `ρ^q` in the series text format (`r`, `r^2`, `r^-2`, `r^(1/2)`).
pub fn rho_power_text(q: Exponent) -> String {
    if q == Exponent::from_integer(1) {
        "r".to_string()
    } else if q.is_integer() {
        format!("r^{}", q.numer())
    } else {
        format!("r^({}/{})", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_absorbs_addition() {
        assert_eq!(ExtExp::int(3) + ExtExp::Infinity, ExtExp::Infinity);
        assert!(ExtExp::int(100) < ExtExp::Infinity);
    }

    #[test]
    fn power_text() {
        assert_eq!(rho_power_text(Exponent::new(-2, 1)), "r^-2");
        assert_eq!(rho_power_text(Exponent::new(-1, 2)), "r^(-1/2)");
        assert_eq!(rho_power_text(Exponent::new(1, 1)), "r");
    }
}
