use std::fmt;

use super::MollifyError;
use crate::quad::{adaptive_box, Integral};
use crate::smooth::{Jet, Smooth, SmoothError};

/// A compactly supported smooth function on `R^d`.
#[derive(Debug, Clone)]
pub struct TestFunction {
    expr: Smooth,
    support: Vec<(f64, f64)>,
}

/// Default absolute tolerance for integrals against test functions.
pub const QUAD_TOL: f64 = 1e-13;

impl TestFunction {
    /// Wraps an expression whose support is bounded along every axis.
    pub fn new(expr: Smooth, dim: usize) -> Result<Self, MollifyError> {
        if expr.min_dim() > dim {
            return Err(MollifyError::Parameter(format!(
                "expression needs dimension {}",
                expr.min_dim()
            )));
        }
        let s = expr.support().ok_or_else(|| {
            MollifyError::Parameter("test function must have compact support".into())
        })?;
        let support: Vec<(f64, f64)> = (0..dim).map(|i| s.axis(i)).collect();
        if support
            .iter()
            .any(|(a, b)| !a.is_finite() || !b.is_finite())
        {
            return Err(MollifyError::Parameter(
                "test function must have compact support".into(),
            ));
        }
        Ok(TestFunction { expr, support })
    }

    /// `Π_i φ((x_i − c_i)/r_i)` with the standard bump `φ`.
    pub fn bump(center: &[f64], radius: &[f64]) -> Self {
        let expr = Smooth::bump_box(center, radius);
        let support = center
            .iter()
            .zip(radius)
            .map(|(c, r)| (c - r, c + r))
            .collect();
        TestFunction { expr, support }
    }

    pub fn scaled(&self, c: f64) -> Self {
        TestFunction {
            expr: &Smooth::constant(c) * &self.expr,
            support: self.support.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.support.len()
    }

    pub fn expr(&self) -> &Smooth {
        &self.expr
    }

    /// Per-axis closed support bounds.
    pub fn support(&self) -> &[(f64, f64)] {
        &self.support
    }

    /// Largest distance from the origin to the support box.
    pub fn radius(&self) -> f64 {
        self.support
            .iter()
            .map(|(a, b)| a.abs().max(b.abs()).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn value(&self, x: &[f64]) -> Result<f64, SmoothError> {
        self.expr.value(x)
    }

    pub fn jet(&self, x: &[f64], order: usize) -> Result<Jet, SmoothError> {
        self.expr.jet(x, order)
    }

    pub fn breakpoints(&self, axis: usize) -> Vec<f64> {
        self.expr.breakpoints(axis)
    }

    /// `∫ g τ` over the support, splitting panels at the breakpoints of both.
    pub fn integrate_against(
        &self,
        g: &mut dyn FnMut(&[f64]) -> Result<f64, SmoothError>,
        extra_breaks: &[Vec<f64>],
        tol: f64,
    ) -> Result<Integral, SmoothError> {
        let lo: Vec<f64> = self.support.iter().map(|s| s.0).collect();
        let hi: Vec<f64> = self.support.iter().map(|s| s.1).collect();
        let breaks: Vec<Vec<f64>> = (0..self.dim())
            .map(|i| {
                let mut b = self.breakpoints(i);
                if let Some(e) = extra_breaks.get(i) {
                    b.extend(e);
                }
                b
            })
            .collect();
        let mut failure = None;
        let r = adaptive_box(
            &mut |x| {
                if failure.is_some() {
                    return 0.0;
                }
                let t = match self.expr.value(x) {
                    Ok(t) => t,
                    Err(e) => {
                        failure = Some(e);
                        return 0.0;
                    }
                };
                if t == 0.0 {
                    return 0.0;
                }
                match g(x) {
                    Ok(v) => v * t,
                    Err(e) => {
                        failure = Some(e);
                        0.0
                    }
                }
            },
            &lo,
            &hi,
            &breaks,
            tol,
        );
        match failure {
            Some(e) => Err(e),
            None => Ok(r),
        }
    }

    pub fn integral(&self) -> f64 {
        self.integrate_against(&mut |_| Ok(1.0), &[], QUAD_TOL)
            .map(|r| r.value)
            .unwrap_or(f64::NAN)
    }

    /// `∫ x^α τ`.
    pub fn moment(&self, alpha: &[u8]) -> f64 {
        self.integrate_against(
            &mut |x| {
                Ok(x.iter()
                    .zip(alpha)
                    .map(|(v, a)| v.powi(*a as i32))
                    .product())
            },
            &[],
            QUAD_TOL,
        )
        .map(|r| r.value)
        .unwrap_or(f64::NAN)
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.expr)
    }
}
