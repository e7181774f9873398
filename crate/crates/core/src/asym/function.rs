use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::domain::Domain;
use super::AsymError;
use crate::lc::{default_horizon, Exponent, ExtExp, LcComplex, LcVector};
use crate::smooth::{Jet, Smooth};

/// A finite series `Σ a_q(x) ρ^q` with smooth coefficients on an open set,
/// known below `horizon`.
#[derive(Debug, Clone)]
pub struct AsymptoticFunction {
    terms: BTreeMap<Exponent, Smooth>,
    horizon: ExtExp,
    domain: Domain,
}

/// `r + dx` with a standard base point and an infinitesimal offset.
#[derive(Debug, Clone, PartialEq)]
pub struct AsymptoticPoint {
    base: Vec<f64>,
    offset: Option<LcVector<Complex64>>,
}

impl AsymptoticPoint {
    pub fn standard(base: Vec<f64>) -> Self {
        AsymptoticPoint { base, offset: None }
    }

    pub fn new(base: Vec<f64>, offset: LcVector<Complex64>) -> Result<Self, AsymError> {
        if offset.dim() != base.len() {
            return Err(AsymError::Dimension {
                expected: base.len(),
                found: offset.dim(),
            });
        }
        if !offset.is_infinitesimal() {
            return Err(AsymError::Domain("offset must be infinitesimal".into()));
        }
        Ok(AsymptoticPoint {
            base,
            offset: Some(offset),
        })
    }

    pub fn base(&self) -> &[f64] {
        &self.base
    }

    pub fn offset(&self) -> Option<&LcVector<Complex64>> {
        self.offset.as_ref()
    }
}

impl AsymptoticFunction {
    pub fn zero(domain: Domain) -> Self {
        AsymptoticFunction {
            terms: BTreeMap::new(),
            horizon: ExtExp::Infinity,
            domain,
        }
    }

    /// The embedding `g ↦ g·ρ⁰` of a smooth function.
    pub fn embed(g: Smooth, domain: Domain) -> Result<Self, AsymError> {
        Self::from_terms([(Exponent::from_integer(0), g)], ExtExp::Infinity, domain)
    }

    /// A function with constant coefficients read off an asymptotic number.
    pub fn constant(value: &LcComplex, domain: Domain) -> Result<Self, AsymError> {
        Self::from_terms(
            value.terms().map(|(q, c)| (q, Smooth::constant(c.re))),
            value.horizon(),
            domain,
        )
    }

    pub fn from_terms(
        terms: impl IntoIterator<Item = (Exponent, Smooth)>,
        horizon: ExtExp,
        domain: Domain,
    ) -> Result<Self, AsymError> {
        let mut map: BTreeMap<Exponent, Smooth> = BTreeMap::new();
        for (q, a) in terms {
            if a.min_dim() > domain.dim() {
                return Err(AsymError::Dimension {
                    expected: domain.dim(),
                    found: a.min_dim(),
                });
            }
            if !horizon.above(q) {
                continue;
            }
            let sum = match map.remove(&q) {
                Some(prev) => &prev + &a,
                None => a,
            };
            if !sum.is_zero_const() {
                map.insert(q, sum);
            }
        }
        Ok(AsymptoticFunction {
            terms: map,
            horizon,
            domain,
        })
    }

    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &Smooth)> + '_ {
        self.terms.iter().map(|(q, a)| (*q, a))
    }

    pub fn coefficient(&self, q: Exponent) -> Option<&Smooth> {
        self.terms.get(&q)
    }

    pub fn horizon(&self) -> ExtExp {
        self.horizon
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Least exponent present; `+∞` when there are no terms.
    pub fn valuation(&self) -> ExtExp {
        self.terms
            .keys()
            .next()
            .map_or(ExtExp::Infinity, |q| ExtExp::Finite(*q))
    }

    pub fn with_horizon(&self, h: ExtExp) -> Self {
        let horizon = self.horizon.min(h);
        AsymptoticFunction {
            terms: self
                .terms
                .iter()
                .filter(|(q, _)| horizon.above(**q))
                .map(|(q, a)| (*q, a.clone()))
                .collect(),
            horizon,
            domain: self.domain.clone(),
        }
    }

    pub(crate) fn with_domain(&self, domain: Domain) -> Self {
        AsymptoticFunction {
            terms: self.terms.clone(),
            horizon: self.horizon,
            domain,
        }
    }

    fn common_domain(&self, other: &Self) -> Result<Domain, AsymError> {
        if self.dim() != other.dim() {
            return Err(AsymError::Dimension {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        if self.domain == other.domain {
            return Ok(self.domain.clone());
        }
        let d = self.domain.intersect(&other.domain);
        if d.is_empty() {
            return Err(AsymError::Domain("the domains do not intersect".into()));
        }
        Ok(d)
    }

    pub fn add(&self, other: &Self) -> Result<Self, AsymError> {
        let domain = self.common_domain(other)?;
        Self::from_terms(
            self.terms()
                .chain(other.terms())
                .map(|(q, a)| (q, a.clone())),
            self.horizon.min(other.horizon),
            domain,
        )
    }

    pub fn neg(&self) -> Self {
        AsymptoticFunction {
            terms: self.terms.iter().map(|(q, a)| (*q, -a)).collect(),
            horizon: self.horizon,
            domain: self.domain.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AsymError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: f64) -> Self {
        let k = Smooth::constant(c);
        AsymptoticFunction {
            terms: self
                .terms
                .iter()
                .map(|(q, a)| (*q, &k * a))
                .filter(|(_, a)| !a.is_zero_const())
                .collect(),
            horizon: self.horizon,
            domain: self.domain.clone(),
        }
    }

    /// Multiplies by the exact monomial `ρ^q`.
    pub fn shift(&self, q: Exponent) -> Self {
        AsymptoticFunction {
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (*e + q, a.clone()))
                .collect(),
            horizon: self.horizon + q,
            domain: self.domain.clone(),
        }
    }

    /// Cauchy product; horizon `min(h_f + v(g), h_g + v(f))`.
    pub fn mul(&self, other: &Self) -> Result<Self, AsymError> {
        let domain = self.common_domain(other)?;
        let horizon = (self.horizon + other.valuation()).min(other.horizon + self.valuation());
        let mut products = Vec::new();
        for (p, a) in self.terms() {
            for (q, b) in other.terms() {
                products.push((p + q, a * b));
            }
        }
        Self::from_terms(products, horizon, domain)
    }

    /// Termwise `∂^α`.
    pub fn derive(&self, alpha: &[u8]) -> Result<Self, AsymError> {
        if alpha.len() > self.dim() {
            return Err(AsymError::Dimension {
                expected: self.dim(),
                found: alpha.len(),
            });
        }
        let terms = self
            .terms()
            .map(|(q, a)| Ok((q, a.derive(alpha)?)))
            .collect::<Result<Vec<_>, AsymError>>()?;
        Self::from_terms(terms, self.horizon, self.domain.clone())
    }

    /// Value at `r + dx`: each coefficient is Taylor expanded around `r` in
    /// the offset, far enough to reach the horizon. A finite `cap` (or the
    /// default horizon when everything is exact) bounds the expansion.
    pub fn eval_at(&self, p: &AsymptoticPoint, cap: ExtExp) -> Result<LcComplex, AsymError> {
        if p.base.len() != self.dim() {
            return Err(AsymError::Dimension {
                expected: self.dim(),
                found: p.base.len(),
            });
        }
        if !self.domain.contains(&p.base) {
            return Err(AsymError::Domain(format!(
                "{:?} is not in {}",
                p.base, self.domain
            )));
        }
        let offsets: Vec<LcComplex> = match &p.offset {
            Some(v) => v.components().to_vec(),
            None => Vec::new(),
        };
        let moving = offsets.iter().any(|o| !o.is_zero());
        let mut h = self.horizon.min(cap);
        if moving && h.is_infinite() {
            h = default_horizon();
        }
        let vmin = offsets
            .iter()
            .filter_map(|o| o.valuation().finite())
            .min()
            .unwrap_or_else(|| Exponent::from_integer(1));
        let mut result = LcComplex::zero().with_horizon(h);
        for (q, a) in self.terms() {
            if !h.above(q) {
                break;
            }
            let order = match (moving, h) {
                (true, ExtExp::Finite(hf)) => {
                    ((hf - q) / vmin).ceil().to_integer().max(1) as usize - 1
                }
                _ => 0,
            };
            let jet = a.jet(&p.base, order)?;
            let mut series = taylor_sum(&jet, &offsets, h)?;
            if moving {
                series = series.with_horizon(ExtExp::Finite(
                    vmin * Exponent::from_integer(order as i64 + 1),
                ));
            }
            result = &result + &series.shift(q);
        }
        Ok(result.with_horizon(h))
    }
}

fn taylor_sum(jet: &Jet, offsets: &[LcComplex], h: ExtExp) -> Result<LcComplex, AsymError> {
    if offsets.is_empty() || jet.order() == 0 {
        return Ok(LcComplex::constant(Complex64::new(jet.value(), 0.0)));
    }
    let k = jet.order();
    let powers: Vec<Vec<LcComplex>> = offsets
        .iter()
        .map(|o| {
            let mut p = vec![LcComplex::one()];
            for m in 1..=k {
                let next = (&p[m - 1] * o).with_horizon(h);
                p.push(next);
            }
            p
        })
        .collect();
    let layout = jet.layout().clone();
    let mut acc = LcComplex::zero();
    for (i, c) in jet.coeffs().iter().enumerate() {
        if *c == 0.0 {
            continue;
        }
        let alpha = layout.multi_index(i);
        let mut term = LcComplex::constant(Complex64::new(*c, 0.0));
        for (axis, a) in alpha.iter().enumerate() {
            if *a > 0 {
                term = &term * &powers[axis][*a as usize];
            }
        }
        acc = &acc + &term;
    }
    Ok(acc)
}

impl fmt::Display for AsymptoticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            f.write_str("0")?;
        }
        for (i, (q, a)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            if *q == Exponent::from_integer(0) {
                write!(f, "[{a}]")?;
            } else {
                write!(f, "[{a}]*{}", crate::lc::rho_power_text(*q))?;
            }
        }
        if let ExtExp::Finite(h) = self.horizon {
            write!(f, " (horizon {h})")?;
        }
        Ok(())
    }
}
