use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{Signed, Zero};

use super::GrowthError;

/// Building blocks of the scale, all evaluated at `1/ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Base {
    /// `ρ^r` carries its exponent as the multiplicity.
    Rho,
    /// `log_k(1/ρ)`, the k-fold iterated logarithm.
    Log(u32),
    /// `exp_k(1/ρ)`, the k-fold iterated exponential.
    Exp(u32),
}

impl Base {
    /// Dominance rank: a larger rank beats every smaller one as ρ → 0⁺.
    fn rank(self) -> i64 {
        match self {
            Base::Log(k) => -(k as i64),
            Base::Rho => 0,
            Base::Exp(k) => k as i64,
        }
    }

    /// Whether a positive multiplicity makes this factor grow.
    fn grows(self) -> bool {
        !matches!(self, Base::Rho)
    }
}

/// Role of the factor that decides the size of a growth order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominant {
    /// The unit scale `1`.
    Unit,
    Log {
        growing: bool,
    },
    Rho {
        growing: bool,
    },
    Exp {
        growing: bool,
    },
}

/// A magnitude `ρ^r · Π log_k(1/ρ)^{m_k} · Π exp_k(1/ρ)^{n_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GrowthOrder {
    factors: BTreeMap<Base, Rational64>,
}

impl GrowthOrder {
    pub fn unit() -> Self {
        GrowthOrder::default()
    }

    pub fn rho_pow(r: Rational64) -> Self {
        Self::single(Base::Rho, r)
    }

    pub fn log(k: u32) -> Self {
        Self::single(Base::Log(k), Rational64::from_integer(1))
    }

    pub fn exp(k: u32) -> Self {
        Self::single(Base::Exp(k), Rational64::from_integer(1))
    }

    fn single(base: Base, m: Rational64) -> Self {
        let mut factors = BTreeMap::new();
        if !m.is_zero() {
            factors.insert(base, m);
        }
        GrowthOrder { factors }
    }

    /// Builds an order from an explicit factor list, which must already be
    /// canonical: no repeated base, no zero multiplicity, tower levels ≥ 1.
    pub fn from_factors(list: &[(Base, Rational64)]) -> Result<Self, GrowthError> {
        let mut factors = BTreeMap::new();
        for &(base, m) in list {
            if let Base::Log(0) | Base::Exp(0) = base {
                return Err(GrowthError::Canonicalization(
                    "tower levels start at 1".into(),
                ));
            }
            if m.is_zero() {
                return Err(GrowthError::Canonicalization(format!(
                    "zero multiplicity on {}",
                    base_text(base)
                )));
            }
            if factors.insert(base, m).is_some() {
                return Err(GrowthError::Canonicalization(format!(
                    "repeated factor {}",
                    base_text(base)
                )));
            }
        }
        Ok(GrowthOrder { factors })
    }

    pub fn factors(&self) -> impl Iterator<Item = (Base, Rational64)> + '_ {
        self.factors.iter().map(|(b, m)| (*b, *m))
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (b, m) in &other.factors {
            let e = factors.entry(*b).or_insert_with(Rational64::zero);
            *e += m;
            if e.is_zero() {
                factors.remove(b);
            }
        }
        GrowthOrder { factors }
    }

    pub fn pow(&self, q: Rational64) -> Self {
        if q.is_zero() {
            return GrowthOrder::unit();
        }
        GrowthOrder {
            factors: self.factors.iter().map(|(b, m)| (*b, m * q)).collect(),
        }
    }

    pub fn inverse(&self) -> Self {
        self.pow(Rational64::from_integer(-1))
    }

    pub fn dominant(&self) -> Dominant {
        let Some((base, m)) = self.factors.iter().max_by_key(|(b, _)| b.rank()) else {
            return Dominant::Unit;
        };
        let growing = m.is_positive() == base.grows();
        match base {
            Base::Log(_) => Dominant::Log { growing },
            Base::Rho => Dominant::Rho { growing },
            Base::Exp(_) => Dominant::Exp { growing },
        }
    }

    /// `+1` when the magnitude tends to ∞, `-1` when it tends to 0, `0` for
    /// the unit scale.
    pub fn direction(&self) -> i8 {
        match self.dominant() {
            Dominant::Unit => 0,
            Dominant::Log { growing } | Dominant::Rho { growing } | Dominant::Exp { growing } => {
                if growing {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn is_infinitely_large(&self) -> bool {
        self.direction() > 0
    }
}

/// Total dominance order as ρ → 0⁺; decided by the dominant factor of `a/b`.
pub fn cmp_growth(a: &GrowthOrder, b: &GrowthOrder) -> Ordering {
    a.mul(&b.inverse()).direction().cmp(&0)
}

impl PartialOrd for GrowthOrder {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GrowthOrder {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_growth(self, other)
    }
}

fn base_text(b: Base) -> String {
    match b {
        Base::Rho => "rho".into(),
        Base::Log(k) => format!("log{k}"),
        Base::Exp(k) => format!("exp{k}"),
    }
}

fn exponent_text(m: Rational64) -> String {
    if m.is_integer() && m.is_positive() {
        format!("^{}", m.numer())
    } else {
        format!("^({m})")
    }
}

impl fmt::Display for GrowthOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(b, m)| {
                if *m == Rational64::from_integer(1) {
                    base_text(*b)
                } else {
                    format!("{}{}", base_text(*b), exponent_text(*m))
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

impl FromStr for GrowthOrder {
    type Err = GrowthError;

    fn from_str(s: &str) -> Result<Self, GrowthError> {
        Parser { src: s, pos: 0 }.order()
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: impl Into<String>) -> GrowthError {
        GrowthError::Parse {
            column: self.pos + 1,
            message: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(char::is_whitespace) {
            self.pos += self.rest().chars().next().map_or(0, char::len_utf8);
        }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(s) {
            self.pos += s.len();
            true
        } else {
            false
        }
    }

    fn int(&mut self) -> Result<i64, GrowthError> {
        self.skip_ws();
        let neg = self.eat("-");
        self.skip_ws();
        let digits: String = self
            .rest()
            .chars()
            .take_while(char::is_ascii_digit)
            .collect();
        if digits.is_empty() {
            return Err(self.err("expected an integer"));
        }
        self.pos += digits.len();
        let v: i64 = digits
            .parse()
            .map_err(|_| self.err("integer out of range"))?;
        Ok(if neg { -v } else { v })
    }

    fn order(mut self) -> Result<GrowthOrder, GrowthError> {
        self.skip_ws();
        if self.rest().trim() == "1" {
            return Ok(GrowthOrder::unit());
        }
        let mut list = Vec::new();
        loop {
            list.push(self.factor()?);
            if !self.eat("*") {
                break;
            }
        }
        self.skip_ws();
        if !self.rest().is_empty() {
            return Err(self.err("unexpected trailing input"));
        }
        GrowthOrder::from_factors(&list)
    }

    fn factor(&mut self) -> Result<(Base, Rational64), GrowthError> {
        self.skip_ws();
        let base = if self.eat("rho") {
            Base::Rho
        } else if self.eat("log") {
            Base::Log(self.level()?)
        } else if self.eat("exp") {
            Base::Exp(self.level()?)
        } else {
            return Err(self.err("expected rho, logK or expK"));
        };
        let m = if self.eat("^") {
            self.exponent()?
        } else {
            Rational64::from_integer(1)
        };
        Ok((base, m))
    }

    fn level(&mut self) -> Result<u32, GrowthError> {
        let k = self.int()?;
        u32::try_from(k)
            .ok()
            .filter(|k| *k >= 1)
            .ok_or_else(|| self.err("tower level must be a positive integer"))
    }

    fn exponent(&mut self) -> Result<Rational64, GrowthError> {
        if self.eat("(") {
            let n = self.int()?;
            let d = if self.eat("/") { self.int()? } else { 1 };
            if d == 0 {
                return Err(self.err("zero denominator"));
            }
            if !self.eat(")") {
                return Err(self.err("expected ')'"));
            }
            Ok(Rational64::new(n, d))
        } else {
            Ok(Rational64::from_integer(self.int()?))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(s: &str) -> GrowthOrder {
        s.parse().unwrap()
    }

    #[test]
    fn text_round_trip() {
        for s in [
            "1",
            "exp2",
            "rho^(-3)*log1^2",
            "rho^(1/2)",
            "log2^(-1)*exp1",
        ] {
            assert_eq!(g(s).to_string(), s);
        }
        assert_eq!(g("rho^-3").to_string(), "rho^(-3)");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            "rho*rho".parse::<GrowthOrder>(),
            Err(GrowthError::Canonicalization(_))
        ));
        assert!(matches!(
            "log0".parse::<GrowthOrder>(),
            Err(GrowthError::Parse { .. })
        ));
        assert!(matches!(
            "rho^(0)".parse::<GrowthOrder>(),
            Err(GrowthError::Canonicalization(_))
        ));
        assert!(matches!(
            "sin".parse::<GrowthOrder>(),
            Err(GrowthError::Parse { column: 1, .. })
        ));
    }

    #[test]
    fn iterated_towers_are_ordered() {
        assert_eq!(cmp_growth(&g("log2"), &g("log1")), Ordering::Less);
        assert_eq!(cmp_growth(&g("exp2"), &g("exp1")), Ordering::Greater);
        assert_eq!(cmp_growth(&g("rho^(-3)*log1"), &g("exp1")), Ordering::Less);
        assert_eq!(
            cmp_growth(&g("rho^(-1/100)"), &g("log1^50")),
            Ordering::Greater
        );
        assert_eq!(cmp_growth(&g("rho"), &g("exp1^(-1)")), Ordering::Greater);
        assert_eq!(
            cmp_growth(&GrowthOrder::unit(), &GrowthOrder::unit()),
            Ordering::Equal
        );
    }
}
