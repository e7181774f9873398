use std::sync::Arc;

use super::profile::{Mollifier, Profile};
use super::{MollifyError, TestFunction};
use crate::asym::{Domain, OpenBox};
use crate::smooth::{Jet, Smooth, SmoothError, SmoothFn, Support};

/// `scale · g((x − center)/ρ)`.
#[derive(Debug)]
pub(crate) struct Dilated {
    pub inner: Smooth,
    pub rho: f64,
    pub center: Vec<f64>,
    pub scale: f64,
    pub tag: String,
}

impl Dilated {
    fn local(&self, x: &[f64]) -> Vec<f64> {
        x.iter()
            .enumerate()
            .map(|(i, v)| (v - self.center.get(i).copied().unwrap_or(0.0)) / self.rho)
            .collect()
    }
}

impl SmoothFn for Dilated {
    fn jet(&self, x: &[f64], order: usize) -> Result<Jet, SmoothError> {
        let mut j = self.inner.jet(&self.local(x), order)?;
        let lay = j.layout().clone();
        for (i, c) in j.coeffs_mut().iter_mut().enumerate() {
            let total: i32 = lay.multi_index(i).iter().map(|&a| a as i32).sum();
            *c *= self.scale * self.rho.powi(-total);
        }
        Ok(j)
    }

    fn value(&self, x: &[f64]) -> Result<f64, SmoothError> {
        Ok(self.scale * self.inner.value(&self.local(x))?)
    }

    fn max_order(&self) -> Option<usize> {
        self.inner.max_order()
    }

    fn breakpoints(&self, axis: usize) -> Vec<f64> {
        let c = self.center.get(axis).copied().unwrap_or(0.0);
        self.inner
            .breakpoints(axis)
            .into_iter()
            .map(|t| c + self.rho * t)
            .collect()
    }

    fn support(&self) -> Option<Support> {
        let s = self.inner.support()?;
        Some(Support(
            s.0.iter()
                .enumerate()
                .map(|(i, (a, b))| {
                    let c = self.center.get(i).copied().unwrap_or(0.0);
                    (c + self.rho * a, c + self.rho * b)
                })
                .collect(),
        ))
    }

    fn describe(&self) -> String {
        self.tag.clone()
    }
}

/// `D(x) = ρ^{-d} Θ(x/ρ)`.
#[derive(Debug, Clone)]
pub struct DeltaKernel {
    pub theta: TestFunction,
    pub rho: f64,
    pub kernel: TestFunction,
}

impl DeltaKernel {
    /// `ρ` times the support radius of `Θ`.
    pub fn support_radius(&self) -> f64 {
        self.rho * self.theta.radius()
    }

    /// `ρ^{-d} Θ((x − p)/ρ)` as a smooth expression.
    pub fn centered_at(&self, p: &[f64], tag: &str) -> Smooth {
        Smooth::custom(Arc::new(Dilated {
            inner: self.theta.expr().clone(),
            rho: self.rho,
            center: p.to_vec(),
            scale: self.rho.powi(-(self.theta.dim() as i32)),
            tag: tag.to_string(),
        }))
    }
}

pub fn rho_delta(theta: &TestFunction, rho: f64) -> Result<DeltaKernel, MollifyError> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(MollifyError::Parameter(format!(
            "rho must be positive, got {rho}"
        )));
    }
    let d = theta.dim();
    let expr = Smooth::custom(Arc::new(Dilated {
        inner: theta.expr().clone(),
        rho,
        center: vec![0.0; d],
        scale: rho.powi(-(d as i32)),
        tag: format!("D[rho={rho}]"),
    }));
    let kernel = TestFunction::new(expr, d)?;
    Ok(DeltaKernel {
        theta: theta.clone(),
        rho,
        kernel,
    })
}

/// `Φ((x_axis − at)/ρ)` with `Φ` the distribution function of the profile.
#[derive(Debug)]
struct CdfStep {
    profile: Profile,
    expr: Smooth,
    axis: usize,
    at: f64,
    rho: f64,
}

impl SmoothFn for CdfStep {
    fn jet(&self, x: &[f64], order: usize) -> Result<Jet, SmoothError> {
        let d = x.len();
        if self.axis >= d {
            return Err(SmoothError::Dimension {
                needed: self.axis + 1,
                found: d,
            });
        }
        let u = (x[self.axis] - self.at) / self.rho;
        let (lo, hi) = self.profile.extent();
        let mut taylor = vec![self.profile.cdf(u)];
        if order > 0 && u > lo && u < hi {
            let t = self.expr.jet(&[u], order - 1)?;
            for m in 1..=order {
                taylor.push(t.coeffs()[m - 1] / m as f64 * self.rho.powi(-(m as i32)));
            }
        }
        Ok(Jet::univariate(d, order, self.axis, &taylor))
    }

    fn breakpoints(&self, axis: usize) -> Vec<f64> {
        if axis != self.axis {
            return Vec::new();
        }
        let (lo, hi) = self.profile.extent();
        vec![self.at + self.rho * lo, self.at, self.at + self.rho * hi]
    }

    fn describe(&self) -> String {
        format!("step[x{} at {}, rho={}]", self.axis + 1, self.at, self.rho)
    }
}

fn step(m: &Mollifier, axis: usize, at: f64, rho: f64) -> Smooth {
    Smooth::custom(Arc::new(CdfStep {
        profile: m.profile.clone(),
        expr: m.profile.expr(0),
        axis,
        at,
        rho,
    }))
}

/// `Ω_ρ` for one box: shrink by `2ρ`, clip to `|x_i| < 1/ρ`.
fn shrink(b: &OpenBox, rho: f64) -> OpenBox {
    OpenBox::new(
        b.lo.iter()
            .map(|a| (a + 2.0 * rho).max(-1.0 / rho))
            .collect(),
        b.hi.iter()
            .map(|a| (a - 2.0 * rho).min(1.0 / rho))
            .collect(),
    )
}

fn box_cutoff(b: &OpenBox, rho: f64, m: &Mollifier) -> Smooth {
    (0..b.dim()).fold(Smooth::one(), |acc, i| {
        &acc * &(&step(m, i, b.lo[i], rho) - &step(m, i, b.hi[i], rho))
    })
}

/// Most boxes the inclusion–exclusion expansion accepts.
const MAX_BOXES: usize = 10;

/// `Π_Ω = χ_{Ω_ρ} ⋆ D`. For unions of boxes the indicator is expanded by
/// inclusion–exclusion over the shrunken boxes.
pub fn cutoff(omega: &Domain, rho: f64, m: &Mollifier) -> Result<Smooth, MollifyError> {
    if !(rho > 0.0 && rho.is_finite()) {
        return Err(MollifyError::Parameter(format!(
            "rho must be positive, got {rho}"
        )));
    }
    if omega.dim() != m.dim {
        return Err(MollifyError::Parameter(format!(
            "domain has dimension {}, mollifier {}",
            omega.dim(),
            m.dim
        )));
    }
    let boxes: Vec<OpenBox> = omega
        .boxes()
        .iter()
        .map(|b| shrink(b, rho))
        .filter(|b| !b.is_empty())
        .collect();
    if boxes.len() > MAX_BOXES {
        return Err(MollifyError::Parameter(format!(
            "at most {MAX_BOXES} boxes are supported"
        )));
    }
    let mut total = Smooth::zero();
    for mask in 1u32..(1 << boxes.len()) {
        let mut inter: Option<OpenBox> = None;
        for (k, b) in boxes.iter().enumerate() {
            if mask & (1 << k) != 0 {
                inter = Some(match inter {
                    None => b.clone(),
                    Some(acc) => acc.intersect(b),
                });
            }
        }
        let inter = inter.expect("nonempty mask");
        if inter.is_empty() {
            continue;
        }
        let piece = box_cutoff(&inter, rho, m);
        total = if mask.count_ones() % 2 == 1 {
            &total + &piece
        } else {
            &total - &piece
        };
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mollify::build_mollifier;

    #[test]
    fn kernel_scaling() {
        let m = build_mollifier(2, 1).unwrap();
        let theta_m2 = m.theta.moment(&[2]);
        for rho in [1e-1, 1e-2] {
            let k = rho_delta(&m.theta, rho).unwrap();
            assert!((k.kernel.integral() - 1.0).abs() < 1e-10);
            let m2 = k.kernel.moment(&[2]);
            assert!(
                (m2 - rho * rho * theta_m2).abs() < 1e-12,
                "{m2} vs {}",
                rho * rho * theta_m2
            );
            assert!((k.support_radius() - rho).abs() < 1e-15);
        }
        assert!(rho_delta(&m.theta, 0.0).is_err());
    }

    #[test]
    fn cutoff_profile() {
        let m = build_mollifier(2, 1).unwrap();
        let rho = 0.05;
        let pi = cutoff(&Domain::interval(0.0, 1.0), rho, &m).unwrap();
        assert!((pi.value(&[0.5]).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(pi.value(&[3.0 * rho]).unwrap(), 1.0);
        assert_eq!(pi.value(&[-0.01]).unwrap(), 0.0);
        assert_eq!(pi.value(&[1.01]).unwrap(), 0.0);
        // transition from 0 to 1 happens within [ρ, 3ρ]
        let width = (0..=400)
            .map(|i| i as f64 * 0.5 / 400.0)
            .filter(|x| {
                let v = pi.value(&[*x]).unwrap();
                v > 1e-12 && v < 1.0 - 1e-12
            })
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| {
                (a.min(x), b.max(x))
            });
        assert!(width.1 - width.0 <= 4.0 * rho, "{width:?}");
    }
}
