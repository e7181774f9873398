use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use super::kernel::{cutoff, rho_delta};
use super::profile::{build_mollifier, composite_nodes, Mollifier};
use super::MollifyError;
use crate::asym::{AsymptoticFunction, Domain};
use crate::smooth::{factorial, Jet, Smooth, SmoothError, SmoothFn};

/// The distributions the embedding knows how to convolve.
#[derive(Debug, Clone)]
pub enum DistributionSpec {
    /// `δ_p`.
    DeltaAt(Vec<f64>),
    /// `∂^α δ_p`.
    DerivativeOfDelta { point: Vec<f64>, alpha: Vec<u8> },
    /// `H(x_axis)`, constant along the other axes.
    Heaviside { axis: usize },
    /// `T_f` for a locally integrable `f`.
    LocallyIntegrable(Smooth),
    /// `Σ c_k T_k`.
    FiniteCombination(Vec<(f64, DistributionSpec)>),
}

impl DistributionSpec {
    /// Support box when the distribution is compactly supported.
    pub fn compact_support(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            DistributionSpec::DeltaAt(p) | DistributionSpec::DerivativeOfDelta { point: p, .. } => {
                Some(p.iter().map(|v| (*v, *v)).collect())
            }
            DistributionSpec::Heaviside { .. } => None,
            DistributionSpec::LocallyIntegrable(f) => f.support().map(|s| s.0),
            DistributionSpec::FiniteCombination(parts) => {
                let boxes: Option<Vec<Vec<(f64, f64)>>> =
                    parts.iter().map(|(_, t)| t.compact_support()).collect();
                let boxes = boxes?;
                let first = boxes.first()?.clone();
                Some(boxes.iter().skip(1).fold(first, |acc, b| {
                    acc.iter()
                        .zip(b)
                        .map(|(x, y)| (x.0.min(y.0), x.1.max(y.1)))
                        .collect()
                }))
            }
        }
    }
}

impl fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistributionSpec::DeltaAt(p) => write!(f, "delta{p:?}"),
            DistributionSpec::DerivativeOfDelta { point, alpha } => {
                write!(f, "d{alpha:?} delta{point:?}")
            }
            DistributionSpec::Heaviside { axis } => write!(f, "H(x{})", axis + 1),
            DistributionSpec::LocallyIntegrable(g) => write!(f, "T[{g}]"),
            DistributionSpec::FiniteCombination(parts) => {
                let s: Vec<String> = parts.iter().map(|(c, t)| format!("{c}*{t}")).collect();
                write!(f, "{}", s.join(" + "))
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Source {
    Function(Smooth),
    Heaviside(usize),
}

impl Source {
    fn value(&self, y: &[f64]) -> Result<f64, SmoothError> {
        match self {
            Source::Function(g) => g.value(y),
            Source::Heaviside(axis) => Ok(if y[*axis] > 0.0 { 1.0 } else { 0.0 }),
        }
    }
}

/// Per-axis quadrature nodes for `t` with the scaled Taylor data of the
/// profile at each node.
#[derive(Debug)]
struct NodeTable {
    t: Vec<f64>,
    w: Vec<f64>,
    /// `θ^{(m)}(t)/m! · ρ^{-m}` for `m ≤ order`.
    taylor: Vec<Vec<f64>>,
}

const PANELS: usize = 2;
const DEGREE: usize = 24;

/// `x ↦ ((g Π) ⋆ D)(x) = ∫ (gΠ)(x − ρt) Θ(t) dt`, with derivatives moved
/// onto the kernel so that `g` itself need not be smooth.
#[derive(Debug)]
struct Convolved {
    source: Source,
    cutoff: Smooth,
    mollifier: Mollifier,
    rho: f64,
    tag: String,
    tables: Mutex<HashMap<usize, Arc<NodeTable>>>,
}

impl Convolved {
    fn table(&self, order: usize, extra: Option<f64>) -> Result<Arc<NodeTable>, SmoothError> {
        if extra.is_none() {
            if let Some(t) = self
                .tables
                .lock()
                .unwrap_or_else(|e| e.into_inner())
                .get(&order)
            {
                return Ok(t.clone());
            }
        }
        let p = &self.mollifier.profile;
        let (lo, hi) = p.extent();
        let mut breaks = p.breakpoints();
        breaks.extend(extra);
        let (t, w) = composite_nodes(lo, hi, &breaks, PANELS, DEGREE);
        let expr = p.expr(0);
        if order == 0 {
            let taylor = t.iter().map(|ti| vec![p.value(*ti)]).collect();
            return Ok(Arc::new(NodeTable { t, w, taylor }));
        }
        let taylor = t
            .iter()
            .map(|ti| {
                let j = expr.jet(&[*ti], order)?;
                Ok(j.coeffs()
                    .iter()
                    .enumerate()
                    .map(|(m, c)| c * self.rho.powi(-(m as i32)))
                    .collect())
            })
            .collect::<Result<Vec<Vec<f64>>, SmoothError>>()?;
        let table = Arc::new(NodeTable { t, w, taylor });
        if extra.is_none() {
            self.tables
                .lock()
                .unwrap_or_else(|e| e.into_inner())
                .insert(order, table.clone());
        }
        Ok(table)
    }
}

impl SmoothFn for Convolved {
    fn jet(&self, x: &[f64], order: usize) -> Result<Jet, SmoothError> {
        let d = x.len();
        let tables = (0..d)
            .map(|axis| {
                let (lo, hi) = self.mollifier.profile.extent();
                let jump = match self.source {
                    Source::Heaviside(a) if a == axis => {
                        Some(x[axis] / self.rho).filter(|t| *t > lo && *t < hi)
                    }
                    _ => None,
                };
                self.table(order, jump)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut out = Jet::zeros(d, order);
        let mut idx = vec![0usize; d];
        let mut y = vec![0.0; d];
        loop {
            let mut weight = 1.0;
            for axis in 0..d {
                let tab = &tables[axis];
                y[axis] = x[axis] - self.rho * tab.t[idx[axis]];
                weight *= tab.w[idx[axis]];
            }
            let pi = self.cutoff.value(&y)?;
            if pi != 0.0 {
                let g = self.source.value(&y)?;
                if g != 0.0 {
                    let c = weight * pi * g;
                    if d == 1 {
                        for (o, t) in out.coeffs_mut().iter_mut().zip(&tables[0].taylor[idx[0]]) {
                            *o += c * t;
                        }
                    } else {
                        let mut prod = Jet::constant(d, order, c);
                        for axis in 0..d {
                            prod = &prod
                                * &Jet::univariate(d, order, axis, &tables[axis].taylor[idx[axis]]);
                        }
                        out = &out + &prod;
                    }
                }
            }
            let mut axis = 0;
            loop {
                if axis == d {
                    return Ok(out);
                }
                idx[axis] += 1;
                if idx[axis] < tables[axis].t.len() {
                    break;
                }
                idx[axis] = 0;
                axis += 1;
            }
        }
    }

    fn breakpoints(&self, axis: usize) -> Vec<f64> {
        let mut out = self.cutoff.breakpoints(axis);
        if matches!(self.source, Source::Heaviside(a) if a == axis) {
            out.extend(
                self.mollifier
                    .profile
                    .breakpoints()
                    .into_iter()
                    .map(|b| self.rho * b),
            );
        }
        out
    }

    fn describe(&self) -> String {
        self.tag.clone()
    }
}

/// `T ↦ (T Π_Ω) ⋆ D` for a numeric `ρ` with the order-`n` mollifier, as a
/// single `ρ⁰` term.
pub fn embed_distribution(
    t: &DistributionSpec,
    omega: &Domain,
    rho: f64,
    n: usize,
) -> Result<AsymptoticFunction, MollifyError> {
    let m = build_mollifier(n, omega.dim())?;
    embed_with(t, omega, rho, &m)
}

pub fn embed_with(
    t: &DistributionSpec,
    omega: &Domain,
    rho: f64,
    m: &Mollifier,
) -> Result<AsymptoticFunction, MollifyError> {
    let pi = cutoff(omega, rho, m)?;
    let coeff = coefficient(t, omega, rho, m, &pi)?;
    Ok(AsymptoticFunction::embed(coeff, omega.clone())?)
}

fn check_point(p: &[f64], d: usize) -> Result<(), MollifyError> {
    if p.len() != d {
        return Err(MollifyError::Spec(format!(
            "point {p:?} is not in dimension {d}"
        )));
    }
    Ok(())
}

fn coefficient(
    t: &DistributionSpec,
    omega: &Domain,
    rho: f64,
    m: &Mollifier,
    pi: &Smooth,
) -> Result<Smooth, MollifyError> {
    let d = omega.dim();
    let tag = |name: String| format!("embed[{name}; rho={rho}, n={}]", m.n);
    Ok(match t {
        DistributionSpec::DeltaAt(p) => {
            check_point(p, d)?;
            let k = rho_delta(&m.theta, rho)?;
            &Smooth::constant(pi.value(p)?) * &k.centered_at(p, &tag(t.to_string()))
        }
        DistributionSpec::DerivativeOfDelta { point, alpha } => {
            check_point(point, d)?;
            if alpha.len() > d {
                return Err(MollifyError::Spec(format!(
                    "multi-index {alpha:?} exceeds dimension {d}"
                )));
            }
            let mut alpha = alpha.clone();
            alpha.resize(d, 0);
            let total: usize = alpha.iter().map(|&a| a as usize).sum();
            let k = rho_delta(&m.theta, rho)?;
            let kernel = k.centered_at(point, &tag(t.to_string()));
            let pij = pi.jet(point, total)?;
            // ⟨∂^α δ_p, Π D(x − ·)⟩ = Σ_β C(α,β) (−1)^{|β|} ∂^β Π(p) ∂^{α−β} D(x − p)
            let mut acc = Smooth::zero();
            for beta in sub_indices(&alpha) {
                let b: usize = beta.iter().map(|&v| v as usize).sum();
                let coeff = binomial(&alpha, &beta)
                    * pij.derivative(&beta)
                    * if b.is_multiple_of(2) { 1.0 } else { -1.0 };
                if coeff == 0.0 {
                    continue;
                }
                let rest: Vec<u8> = alpha.iter().zip(&beta).map(|(a, b)| a - b).collect();
                acc = &acc + &(&Smooth::constant(coeff) * &kernel.derive(&rest)?);
            }
            acc
        }
        DistributionSpec::Heaviside { axis } => {
            if *axis >= d {
                return Err(MollifyError::Spec(format!(
                    "axis {} exceeds dimension {d}",
                    axis + 1
                )));
            }
            convolved(Source::Heaviside(*axis), pi, m, rho, tag(t.to_string()))
        }
        DistributionSpec::LocallyIntegrable(g) => {
            if g.min_dim() > d {
                return Err(MollifyError::Spec(format!(
                    "{g} needs dimension {}",
                    g.min_dim()
                )));
            }
            convolved(Source::Function(g.clone()), pi, m, rho, tag(t.to_string()))
        }
        DistributionSpec::FiniteCombination(parts) => {
            let mut acc = Smooth::zero();
            for (c, part) in parts {
                acc = &acc + &(&Smooth::constant(*c) * &coefficient(part, omega, rho, m, pi)?);
            }
            acc
        }
    })
}

fn convolved(source: Source, pi: &Smooth, m: &Mollifier, rho: f64, tag: String) -> Smooth {
    Smooth::custom(Arc::new(Convolved {
        source,
        cutoff: pi.clone(),
        mollifier: m.clone(),
        rho,
        tag,
        tables: Mutex::new(HashMap::new()),
    }))
}

fn sub_indices(alpha: &[u8]) -> Vec<Vec<u8>> {
    let mut out = vec![Vec::new()];
    for &a in alpha {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=a).map(move |b| {
                    let mut q = p.clone();
                    q.push(b);
                    q
                })
            })
            .collect();
    }
    out
}

fn binomial(alpha: &[u8], beta: &[u8]) -> f64 {
    alpha
        .iter()
        .zip(beta)
        .map(|(&a, &b)| {
            factorial(a as usize) / (factorial(b as usize) * factorial((a - b) as usize))
        })
        .product()
}
