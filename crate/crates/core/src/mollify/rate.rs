use std::fmt;

use super::embed::{embed_with, DistributionSpec};
use super::profile::build_mollifier;
use super::{MollifyError, TestFunction};
use crate::asym::{pair_with_tol, AsymptoticFunction, CompactBox, Domain};
use crate::lc::Exponent;
use crate::smooth::{multi_factorial, Smooth};

/// Errors below this multiple of the reference scale are quadrature noise.
const NOISE_FLOOR: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateRow {
    pub rho: f64,
    pub value: f64,
    pub reference: f64,
    pub error: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Rate {
    /// Least-squares slope of `log error` against `log ρ`.
    Slope(f64),
    /// Every error sits at the quadrature floor.
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RateReport {
    pub rows: Vec<RateRow>,
    pub rate: Rate,
}

impl RateReport {
    pub fn slope(&self) -> Option<f64> {
        match self.rate {
            Rate::Slope(s) => Some(s),
            Rate::Exact => None,
        }
    }
}

impl fmt::Display for RateReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rho,log_rho,value,reference,error,log_error")?;
        for r in &self.rows {
            writeln!(
                f,
                "{:e},{:.6},{:.15e},{:.15e},{:e},{:.6}",
                r.rho,
                r.rho.ln(),
                r.value,
                r.reference,
                r.error,
                r.error.ln()
            )?;
        }
        match self.rate {
            Rate::Slope(s) => write!(f, "slope,{s:.6}"),
            Rate::Exact => write!(f, "slope,exact"),
        }
    }
}

fn check_grid(rho_grid: &[f64]) -> Result<(), MollifyError> {
    if rho_grid.len() < 3 {
        return Err(MollifyError::Parameter(
            "at least three values of rho are needed".into(),
        ));
    }
    if rho_grid.iter().any(|r| !(*r > 0.0 && r.is_finite()))
        || rho_grid.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(MollifyError::Parameter(
            "rho values must be positive and strictly decreasing".into(),
        ));
    }
    Ok(())
}

fn fit(rows: Vec<RateRow>, scale: f64) -> RateReport {
    let floor = NOISE_FLOOR * scale.max(1.0);
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.error > floor)
        .map(|r| (r.rho.ln(), r.error.ln()))
        .collect();
    if pts.len() < 2 {
        return RateReport {
            rows,
            rate: Rate::Exact,
        };
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    RateReport {
        rows,
        rate: Rate::Slope(sxy / sxx),
    }
}

/// `T(τ)` computed directly from the distribution.
pub fn reference_pairing(t: &DistributionSpec, tau: &TestFunction) -> Result<f64, MollifyError> {
    Ok(match t {
        DistributionSpec::DeltaAt(p) => tau.value(p)?,
        DistributionSpec::DerivativeOfDelta { point, alpha } => {
            let total: usize = alpha.iter().map(|&a| a as usize).sum();
            let sign = if total.is_multiple_of(2) { 1.0 } else { -1.0 };
            sign * tau.jet(point, total)?.coeff(alpha) * multi_factorial(alpha)
        }
        DistributionSpec::Heaviside { axis } => {
            let axis = *axis;
            let mut breaks = vec![Vec::new(); tau.dim()];
            breaks[axis].push(0.0);
            tau.integrate_against(
                &mut |x| Ok(if x[axis] > 0.0 { 1.0 } else { 0.0 }),
                &breaks,
                1e-14,
            )?
            .value
        }
        DistributionSpec::LocallyIntegrable(g) => {
            let breaks: Vec<Vec<f64>> = (0..tau.dim()).map(|i| g.breakpoints(i)).collect();
            tau.integrate_against(&mut |x| g.value(x), &breaks, 1e-14)?
                .value
        }
        DistributionSpec::FiniteCombination(parts) => {
            let mut s = 0.0;
            for (c, part) in parts {
                s += c * reference_pairing(part, tau)?;
            }
            s
        }
    })
}

fn standard_coefficient(f: &AsymptoticFunction) -> Smooth {
    f.coefficient(Exponent::from_integer(0))
        .cloned()
        .unwrap_or_else(Smooth::zero)
}

/// Fits the rate at which `⟨embed(T) − T, τ⟩` vanishes as `ρ → 0`.
pub fn convergence_rate(
    t: &DistributionSpec,
    tau: &TestFunction,
    omega: &Domain,
    rho_grid: &[f64],
    n: usize,
) -> Result<RateReport, MollifyError> {
    check_grid(rho_grid)?;
    let m = build_mollifier(n, omega.dim())?;
    let reference = reference_pairing(t, tau)?;
    let mut rows = Vec::new();
    for &rho in rho_grid {
        let e = embed_with(t, omega, rho, &m)?;
        let p = pair_with_tol(&e, tau, 1e-15)?;
        let value = p.coeff(Exponent::from_integer(0)).re;
        rows.push(RateRow {
            rho,
            value,
            reference,
            error: (value - reference).abs(),
        });
    }
    Ok(fit(rows, reference.abs()))
}

/// Fits the rate at which `sup_K |embed(T_f) − f|` vanishes.
pub fn sup_rate(
    f: &Smooth,
    omega: &Domain,
    k: &CompactBox,
    rho_grid: &[f64],
    n: usize,
) -> Result<RateReport, MollifyError> {
    check_grid(rho_grid)?;
    if !omega.contains_compact(k) {
        return Err(MollifyError::Parameter(
            "K must lie compactly inside the domain".into(),
        ));
    }
    let m = build_mollifier(n, omega.dim())?;
    let grid = k.grid();
    let mut scale = 0.0f64;
    let mut rows = Vec::new();
    for &rho in rho_grid {
        let e = embed_with(
            &DistributionSpec::LocallyIntegrable(f.clone()),
            omega,
            rho,
            &m,
        )?;
        let c = standard_coefficient(&e);
        let mut worst = (0.0f64, 0.0, 0.0);
        for x in &grid {
            let exact = f.value(x)?;
            let approx = c.value(x)?;
            scale = scale.max(exact.abs());
            if (approx - exact).abs() >= worst.0 {
                worst = ((approx - exact).abs(), approx, exact);
            }
        }
        rows.push(RateRow {
            rho,
            value: worst.1,
            reference: worst.2,
            error: worst.0,
        });
    }
    Ok(fit(rows, scale))
}
