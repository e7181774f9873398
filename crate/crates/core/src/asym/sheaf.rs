use std::collections::BTreeSet;
use std::sync::Arc;

use super::analysis::NEGLIGIBLE_TOL;
use super::domain::{CompactBox, Domain, OpenBox};
use super::function::AsymptoticFunction;
use super::AsymError;
use crate::lc::{Exponent, ExtExp};
use crate::smooth::{bump_jet, factorial, Jet, Smooth, SmoothError, SmoothFn};

/// `f↾O` for an open `O ⊆ Ω`.
pub fn restrict(f: &AsymptoticFunction, o: &Domain) -> Result<AsymptoticFunction, AsymError> {
    if o.dim() != f.dim() {
        return Err(AsymError::Dimension {
            expected: f.dim(),
            found: o.dim(),
        });
    }
    if !f.domain().contains_domain(o) {
        return Err(AsymError::Domain(format!(
            "{o} is not contained in {}",
            f.domain()
        )));
    }
    Ok(f.with_domain(o.clone()))
}

/// A smooth weight positive exactly on an open box: a scaled bump on each
/// finite side pair, `exp(−1/(x−a))` on half-lines, `1` on free axes.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxWeight {
    pub cell: OpenBox,
}

fn half_line_jet(u: &Jet) -> Jet {
    if u.value() <= 0.0 {
        return Jet::zeros(u.dim(), u.order());
    }
    let g = u.recip().expect("positive").scale(-1.0);
    let e = g.value().exp();
    let taylor: Vec<f64> = (0..=u.order()).map(|m| e / factorial(m)).collect();
    g.compose(&taylor)
}

impl SmoothFn for BoxWeight {
    fn jet(&self, x: &[f64], order: usize) -> Result<Jet, SmoothError> {
        let d = x.len();
        if d < self.cell.dim() {
            return Err(SmoothError::Dimension {
                needed: self.cell.dim(),
                found: d,
            });
        }
        let mut acc = Jet::constant(d, order, 1.0);
        for i in 0..self.cell.dim() {
            let (a, b) = (self.cell.lo[i], self.cell.hi[i]);
            let xi = Jet::variable(d, order, i, x[i]);
            let factor = match (a.is_finite(), b.is_finite()) {
                (true, true) => bump_jet(&xi.add_scalar(-(a + b) / 2.0).scale(2.0 / (b - a))),
                (true, false) => half_line_jet(&xi.add_scalar(-a)),
                (false, true) => half_line_jet(&xi.scale(-1.0).add_scalar(b)),
                (false, false) => continue,
            };
            acc = &acc * &factor;
        }
        Ok(acc)
    }

    fn breakpoints(&self, axis: usize) -> Vec<f64> {
        if axis >= self.cell.dim() {
            return Vec::new();
        }
        [self.cell.lo[axis], self.cell.hi[axis]]
            .into_iter()
            .filter(|v| v.is_finite())
            .collect()
    }

    fn describe(&self) -> String {
        format!("weight{}", self.cell)
    }
}

/// `Σ_k ψ_k a_k / Σ_k ψ_k`, skipping pieces whose weight vanishes so that
/// local coefficients are only evaluated on their own boxes.
#[derive(Debug)]
struct Glued {
    pieces: Vec<(BoxWeight, Option<Smooth>)>,
}

impl SmoothFn for Glued {
    fn jet(&self, x: &[f64], order: usize) -> Result<Jet, SmoothError> {
        let d = x.len();
        let mut num = Jet::zeros(d, order);
        let mut den = Jet::zeros(d, order);
        for (w, a) in &self.pieces {
            if !w.cell.contains(x) {
                continue;
            }
            let psi = w.jet(x, order)?;
            if let Some(a) = a {
                num = &num + &(&psi * &a.jet(x, order)?);
            }
            den = &den + &psi;
        }
        match den.recip() {
            Some(r) => Ok(&num * &r),
            None => Err(SmoothError::Domain(format!(
                "{x:?} is outside every box of the cover"
            ))),
        }
    }

    fn max_order(&self) -> Option<usize> {
        self.pieces
            .iter()
            .filter_map(|(_, a)| a.as_ref().and_then(|a| a.max_order()))
            .min()
    }

    fn breakpoints(&self, axis: usize) -> Vec<f64> {
        self.pieces
            .iter()
            .flat_map(|(w, _)| w.breakpoints(axis))
            .collect()
    }

    fn describe(&self) -> String {
        let parts: Vec<String> = self
            .pieces
            .iter()
            .map(|(w, a)| {
                format!(
                    "{}:{}",
                    w.cell,
                    a.as_ref().map_or("0".to_string(), |a| a.to_string())
                )
            })
            .collect();
        format!("glue[{}]", parts.join("; "))
    }
}

/// Sample points strictly inside a box, with infinite sides clipped.
fn interior_grid(b: &OpenBox, resolution: usize) -> Vec<Vec<f64>> {
    let lo: Vec<f64> =
        b.lo.iter()
            .zip(&b.hi)
            .map(|(a, c)| inset(*a, *c, true))
            .collect();
    let hi: Vec<f64> =
        b.lo.iter()
            .zip(&b.hi)
            .map(|(a, c)| inset(*a, *c, false))
            .collect();
    CompactBox::new(lo, hi, resolution).grid()
}

fn inset(a: f64, b: f64, low: bool) -> f64 {
    const CLIP: f64 = 10.0;
    let (a, b) = (a.max(-CLIP - 1.0), b.min(CLIP + 1.0));
    let pad = (b - a) * 0.02;
    if low {
        a + pad
    } else {
        b - pad
    }
}

/// Glues locals compatible on overlaps up to the default probe (the least
/// horizon of the locals, or 16 when all are exact).
pub fn glue(
    cover: &[OpenBox],
    locals: &[AsymptoticFunction],
) -> Result<AsymptoticFunction, AsymError> {
    let probe = locals
        .iter()
        .map(|f| f.horizon())
        .min()
        .and_then(|h| h.finite())
        .unwrap_or(Exponent::from_integer(crate::lc::DEFAULT_HORIZON));
    glue_with_probe(cover, locals, probe)
}

/// Terms with exponent above `probe` are ignored in the compatibility test.
pub fn glue_with_probe(
    cover: &[OpenBox],
    locals: &[AsymptoticFunction],
    probe: Exponent,
) -> Result<AsymptoticFunction, AsymError> {
    if cover.len() != locals.len() || cover.is_empty() {
        return Err(AsymError::Domain(format!(
            "{} boxes but {} locals",
            cover.len(),
            locals.len()
        )));
    }
    let d = cover[0].dim();
    for (b, f) in cover.iter().zip(locals) {
        if b.dim() != d || f.dim() != d {
            return Err(AsymError::Dimension {
                expected: d,
                found: b.dim().min(f.dim()),
            });
        }
        if !f.domain().contains_domain(&Domain::from_box(b.clone())) {
            return Err(AsymError::Domain(format!(
                "local on {} does not cover box {b}",
                f.domain()
            )));
        }
    }
    if cover.len() == 1 {
        return Ok(locals[0].with_domain(Domain::from_box(cover[0].clone())));
    }
    let exps: BTreeSet<Exponent> = locals
        .iter()
        .flat_map(|f| f.terms().map(|(q, _)| q))
        .collect();
    for i in 0..cover.len() {
        for j in i + 1..cover.len() {
            let overlap = cover[i].intersect(&cover[j]);
            if overlap.is_empty() {
                continue;
            }
            let pts = interior_grid(&overlap, 9);
            for &q in exps.iter().filter(|q| **q <= probe) {
                let (a, b) = (locals[i].coefficient(q), locals[j].coefficient(q));
                let mut diffs = Vec::with_capacity(pts.len());
                let mut scale = 0.0f64;
                for x in &pts {
                    let va = a.map_or(Ok(0.0), |c| c.value(x))?;
                    let vb = b.map_or(Ok(0.0), |c| c.value(x))?;
                    scale = scale.max(va.abs()).max(vb.abs());
                    diffs.push((x, (va - vb).abs()));
                }
                let tol = NEGLIGIBLE_TOL * scale.max(1.0);
                if let Some((x, diff)) = diffs.into_iter().find(|(_, v)| *v > tol) {
                    return Err(AsymError::Glue {
                        point: x.clone(),
                        exponent: q,
                        difference: diff,
                    });
                }
            }
        }
    }
    let horizon = locals
        .iter()
        .map(|f| f.horizon())
        .min()
        .unwrap_or(ExtExp::Infinity);
    let terms: Vec<(Exponent, Smooth)> = exps
        .iter()
        .map(|&q| {
            let pieces = cover
                .iter()
                .zip(locals)
                .map(|(b, f)| (BoxWeight { cell: b.clone() }, f.coefficient(q).cloned()))
                .collect();
            (q, Smooth::custom(Arc::new(Glued { pieces })))
        })
        .collect();
    AsymptoticFunction::from_terms(terms, horizon, Domain::new(d, cover.to_vec()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asym::analysis::coefficientwise_close;

    fn sin_on(b: &OpenBox) -> AsymptoticFunction {
        AsymptoticFunction::embed(Smooth::var(0).sin(), Domain::from_box(b.clone())).unwrap()
    }

    #[test]
    fn restriction_identities() {
        let omega = Domain::interval(0.0, 3.0);
        let f = AsymptoticFunction::embed(Smooth::var(0).cos(), omega.clone()).unwrap();
        assert_eq!(restrict(&f, &omega).unwrap().domain(), &omega);
        let o2 = Domain::interval(0.5, 2.5);
        let o1 = Domain::interval(1.0, 2.0);
        let a = restrict(&restrict(&f, &o2).unwrap(), &o1).unwrap();
        let b = restrict(&f, &o1).unwrap();
        assert_eq!(a.domain(), b.domain());
        assert!(matches!(
            restrict(&f, &Domain::interval(2.0, 4.0)),
            Err(AsymError::Domain(_))
        ));
    }

    #[test]
    fn two_box_glue_of_sine() {
        let cover = [OpenBox::interval(0.0, 2.0), OpenBox::interval(1.0, 3.0)];
        let locals = [sin_on(&cover[0]), sin_on(&cover[1])];
        let g = glue(&cover, &locals).unwrap();
        let pts: Vec<Vec<f64>> = (1..60).map(|i| vec![i as f64 * 0.05]).collect();
        let target =
            AsymptoticFunction::embed(Smooth::var(0).sin(), Domain::interval(0.0, 3.0)).unwrap();
        assert!(coefficientwise_close(&g, &target, &pts, 1e-10));
        let d1 = g.derive(&[1]).unwrap();
        let v = d1
            .coefficient(Exponent::from_integer(0))
            .unwrap()
            .value(&[1.5])
            .unwrap();
        assert!((v - 1.5f64.cos()).abs() < 1e-10);
    }

    #[test]
    fn incompatible_locals_are_rejected() {
        let cover = [OpenBox::interval(0.0, 2.0), OpenBox::interval(1.0, 3.0)];
        let other =
            AsymptoticFunction::embed(Smooth::var(0).cos(), Domain::from_box(cover[1].clone()))
                .unwrap();
        match glue(&cover, &[sin_on(&cover[0]), other]) {
            Err(AsymError::Glue { point, .. }) => assert!(point[0] > 1.0 && point[0] < 2.0),
            other => panic!("{other:?}"),
        }
    }
}
