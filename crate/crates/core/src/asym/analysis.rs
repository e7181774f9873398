use std::collections::hash_map::DefaultHasher;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_complex::Complex64;

use super::domain::CompactBox;
use super::function::AsymptoticFunction;
use super::AsymError;
use crate::lc::{Exponent, ExtExp, LcComplex};
use crate::mollify::TestFunction;
use crate::smooth::{layout, multi_factorial, Smooth};

/// Relative floor below which a grid sup counts as zero.
pub const NEGLIGIBLE_TOL: f64 = 1e-10;

/// Absolute floor for pairings in weak equality.
const WEAK_TOL: f64 = 1e-9;

/// Growth factor between refinements that flags an unbounded sup.
const GROWTH: f64 = 1.5;

/// Grid sup of `|∂^α a_q|` on a compact box.
#[derive(Debug, Clone, PartialEq)]
pub struct TermSup {
    pub exponent: Exponent,
    pub alpha: Vec<u8>,
    pub sup: f64,
}

/// Outcome of a moderateness test. For finite series moderateness always
/// holds once every sup is finite; `n` is the least integer with
/// `|∂^α f| ≤ ρ^{-n}` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ModerateReport {
    pub n: u32,
    /// Least exponent with a nonzero sup.
    pub dominant: Option<Exponent>,
    pub max_alpha: usize,
    pub sups: Vec<TermSup>,
    /// Largest order-zero sup, the scale for zero tests.
    pub scale: f64,
    fingerprint: u64,
}

impl ModerateReport {
    pub fn is_moderate(&self) -> bool {
        true
    }
}

fn fingerprint(f: &AsymptoticFunction, k: &CompactBox) -> u64 {
    let mut h = DefaultHasher::new();
    f.to_string().hash(&mut h);
    f.domain().to_string().hash(&mut h);
    format!("{:?}|{:?}|{}", k.lo, k.hi, k.resolution).hash(&mut h);
    h.finish()
}

fn check_compact(f: &AsymptoticFunction, k: &CompactBox) -> Result<(), AsymError> {
    if k.dim() != f.dim() {
        return Err(AsymError::Dimension {
            expected: f.dim(),
            found: k.dim(),
        });
    }
    if !f.domain().contains_compact(k) {
        return Err(AsymError::Domain(format!(
            "K = {:?}..{:?} is not compactly inside {}",
            k.lo,
            k.hi,
            f.domain()
        )));
    }
    Ok(())
}

/// `sup |∂^α a|` over the grid for every `|α| ≤ order`, in graded layout.
fn grid_sups(a: &Smooth, grid: &[Vec<f64>], order: usize) -> Result<Vec<f64>, AsymError> {
    let d = grid.first().map_or(1, |p| p.len());
    let lay = layout(d, order);
    let mut sups = vec![0.0f64; lay.len()];
    for x in grid {
        let jet = a
            .jet(x, order)
            .map_err(|e| AsymError::Provider(format!("evaluation at {x:?} failed: {e}")))?;
        for (i, c) in jet.coeffs().iter().enumerate() {
            let v = (c * multi_factorial(lay.multi_index(i))).abs();
            if !v.is_finite() {
                return Err(AsymError::Provider(format!(
                    "non-finite derivative at {x:?}"
                )));
            }
            sups[i] = sups[i].max(v);
        }
    }
    Ok(sups)
}

/// Sups on three nested grids; a sup growing by more than `GROWTH` at both
/// refinements is reported as unbounded.
fn refined_sups(
    a: &Smooth,
    k: &CompactBox,
    order: usize,
    q: Exponent,
) -> Result<Vec<f64>, AsymError> {
    let n = k.resolution;
    let coarse = grid_sups(a, &k.with_resolution(n).grid(), order)?;
    let mid = grid_sups(a, &k.with_resolution(2 * n - 1).grid(), order)?;
    let fine = grid_sups(a, &k.with_resolution(4 * n - 3).grid(), order)?;
    let lay = layout(k.dim(), order);
    for i in 0..fine.len() {
        let floor = f64::MIN_POSITIVE.max(1e-300);
        if mid[i] > GROWTH * coarse[i].max(floor) && fine[i] > GROWTH * mid[i] && fine[i] > 1.0 {
            return Err(AsymError::Provider(format!(
                "sup of derivative {:?} of the coefficient of rho^{q} grows under refinement ({:e}, {:e}, {:e})",
                lay.multi_index(i),
                coarse[i],
                mid[i],
                fine[i]
            )));
        }
    }
    Ok(fine)
}

pub fn is_moderate(
    f: &AsymptoticFunction,
    k: &CompactBox,
    max_alpha: usize,
) -> Result<ModerateReport, AsymError> {
    check_compact(f, k)?;
    let lay = layout(k.dim(), max_alpha);
    let mut sups = Vec::new();
    let mut scale = 0.0f64;
    for (q, a) in f.terms() {
        let s = refined_sups(a, k, max_alpha, q).map_err(|e| match e {
            AsymError::DerivativeOrder { requested, max } => AsymError::Provider(format!(
                "derivative order {requested} exceeds provider order {max}"
            )),
            other => other,
        })?;
        scale = scale.max(s[0]);
        for (i, v) in s.into_iter().enumerate() {
            sups.push(TermSup {
                exponent: q,
                alpha: lay.multi_index(i).to_vec(),
                sup: v,
            });
        }
    }
    let tol = NEGLIGIBLE_TOL * scale.max(1.0);
    let dominant = sups
        .iter()
        .filter(|s| s.sup > tol)
        .map(|s| s.exponent)
        .min();
    let n = dominant.map_or(0, |q| (-q).ceil().to_integer().max(0) as u32);
    Ok(ModerateReport {
        n,
        dominant,
        max_alpha,
        sups,
        scale,
        fingerprint: fingerprint(f, k),
    })
}

#[derive(Debug, Clone, Copy)]
pub enum NegligibleMode<'a> {
    /// Check every derivative up to the given order.
    AllDerivatives(usize),
    /// Check values only, relying on a moderateness report for `f` and `K`.
    OrderZeroGivenModerate(&'a ModerateReport),
}

/// `f` is negligible at depth `probe` when every term with exponent
/// `q ≤ probe` vanishes on `K` below tolerance; higher terms are already
/// bounded by `ρ^probe`.
pub fn is_negligible(
    f: &AsymptoticFunction,
    k: &CompactBox,
    mode: NegligibleMode<'_>,
    probe: Exponent,
) -> Result<bool, AsymError> {
    check_compact(f, k)?;
    if !f.horizon().above(probe) {
        return Err(AsymError::Horizon {
            probe,
            horizon: f.horizon(),
        });
    }
    match mode {
        NegligibleMode::OrderZeroGivenModerate(report) => {
            if report.fingerprint != fingerprint(f, k) {
                return Err(AsymError::Mode(
                    "the moderateness report was computed for another function or K".into(),
                ));
            }
            let tol = NEGLIGIBLE_TOL * report.scale.max(1.0);
            Ok(report
                .sups
                .iter()
                .filter(|s| s.exponent <= probe && s.alpha.iter().all(|a| *a == 0))
                .all(|s| s.sup <= tol))
        }
        NegligibleMode::AllDerivatives(max_alpha) => {
            let mut sups = Vec::new();
            let mut scale = 0.0f64;
            for (q, a) in f.terms() {
                let s = refined_sups(a, k, max_alpha, q)?;
                scale = scale.max(s[0]);
                sups.push((q, s));
            }
            let tol = NEGLIGIBLE_TOL * scale.max(1.0);
            Ok(sups
                .iter()
                .filter(|(q, _)| *q <= probe)
                .all(|(_, s)| s.iter().all(|v| *v <= tol)))
        }
    }
}

fn pair_terms(
    f: &AsymptoticFunction,
    tau: &TestFunction,
    tol: f64,
) -> Result<Vec<(Exponent, f64)>, AsymError> {
    if tau.dim() != f.dim() {
        return Err(AsymError::Dimension {
            expected: f.dim(),
            found: tau.dim(),
        });
    }
    let k = CompactBox::new(
        tau.support().iter().map(|s| s.0).collect(),
        tau.support().iter().map(|s| s.1).collect(),
        2,
    );
    if !f.domain().contains_compact(&k) {
        return Err(AsymError::Domain(format!(
            "test function support leaks outside {}",
            f.domain()
        )));
    }
    let mut out = Vec::new();
    for (q, a) in f.terms() {
        let breaks: Vec<Vec<f64>> = (0..f.dim()).map(|i| a.breakpoints(i)).collect();
        let r = tau.integrate_against(&mut |x| a.value(x), &breaks, tol)?;
        out.push((q, r.value));
    }
    Ok(out)
}

/// `⟨f, τ⟩ = Σ_q (∫ a_q τ) ρ^q` with absolute quadrature tolerance `tol`.
pub fn pair_with_tol(
    f: &AsymptoticFunction,
    tau: &TestFunction,
    tol: f64,
) -> Result<LcComplex, AsymError> {
    let terms = pair_terms(f, tau, tol)?;
    Ok(LcComplex::from_terms(
        terms.into_iter().map(|(q, v)| (q, Complex64::new(v, 0.0))),
        f.horizon(),
    ))
}

pub fn pair(f: &AsymptoticFunction, tau: &TestFunction) -> Result<LcComplex, AsymError> {
    pair_with_tol(f, tau, 1e-12)
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeakWitness {
    /// A pairing term at or below the probe that does not vanish.
    Pairing {
        test: usize,
        exponent: Exponent,
        value: f64,
    },
    /// The difference is not known down to the probe.
    Horizon { probe: Exponent, horizon: ExtExp },
}

/// Weak equality decided against a finite list of test functions only.
#[derive(Debug, Clone, PartialEq)]
pub struct WeakEquality {
    pub equal: bool,
    pub witness: Option<WeakWitness>,
    pub tests: usize,
}

impl WeakEquality {
    pub fn note(&self) -> &'static str {
        "relative to supplied tests"
    }
}

impl fmt::Display for WeakEquality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({}, {} tests)", self.equal, self.note(), self.tests)?;
        if let Some(w) = &self.witness {
            write!(f, ": {w:?}")?;
        }
        Ok(())
    }
}

/// `v(⟨f − g, τ⟩) > probe` for every supplied `τ`.
pub fn weak_equal(
    f: &AsymptoticFunction,
    g: &AsymptoticFunction,
    tests: &[TestFunction],
    probe: Exponent,
) -> Result<WeakEquality, AsymError> {
    let diff = f.sub(g)?;
    if !diff.horizon().above(probe) {
        return Ok(WeakEquality {
            equal: false,
            witness: Some(WeakWitness::Horizon {
                probe,
                horizon: diff.horizon(),
            }),
            tests: tests.len(),
        });
    }
    for (i, tau) in tests.iter().enumerate() {
        for (q, v) in pair_terms(&diff, tau, 1e-12)? {
            if q <= probe && v.abs() > WEAK_TOL {
                return Ok(WeakEquality {
                    equal: false,
                    witness: Some(WeakWitness::Pairing {
                        test: i,
                        exponent: q,
                        value: v,
                    }),
                    tests: tests.len(),
                });
            }
        }
    }
    Ok(WeakEquality {
        equal: true,
        witness: None,
        tests: tests.len(),
    })
}

/// Sampled support: closed grid cells on which some coefficient is nonzero.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportSet {
    pub cells: Vec<CompactBox>,
}

impl SupportSet {
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Smallest box containing every cell.
    pub fn hull(&self) -> Option<CompactBox> {
        let first = self.cells.first()?;
        let mut lo = first.lo.clone();
        let mut hi = first.hi.clone();
        for c in &self.cells[1..] {
            for i in 0..lo.len() {
                lo[i] = lo[i].min(c.lo[i]);
                hi[i] = hi[i].max(c.hi[i]);
            }
        }
        Some(CompactBox::new(lo, hi, 2))
    }
}

/// Side length of the window used for unbounded domains.
const SUPPORT_WINDOW: f64 = 10.0;

/// Splits the bounded part of the domain into `resolution^d` cells and keeps
/// those where some coefficient is nonzero at a sample point.
pub fn support(f: &AsymptoticFunction, resolution: usize) -> Result<SupportSet, AsymError> {
    let bb = f.domain().bounding_box(SUPPORT_WINDOW);
    let n = resolution.max(1);
    let d = f.dim();
    let mut scale = 0.0f64;
    let mut cells = Vec::new();
    let mut idx = vec![0usize; d];
    loop {
        let lo: Vec<f64> = (0..d)
            .map(|i| bb.lo[i] + (bb.hi[i] - bb.lo[i]) * idx[i] as f64 / n as f64)
            .collect();
        let hi: Vec<f64> = (0..d)
            .map(|i| bb.lo[i] + (bb.hi[i] - bb.lo[i]) * (idx[i] + 1) as f64 / n as f64)
            .collect();
        let cell = CompactBox::new(lo, hi, 5);
        let mut peak = 0.0f64;
        for x in cell.grid() {
            if !f.domain().contains(&x) {
                continue;
            }
            for (_, a) in f.terms() {
                let v = a
                    .value(&x)
                    .map_err(|e| AsymError::Provider(e.to_string()))?
                    .abs();
                peak = peak.max(v);
            }
        }
        scale = scale.max(peak);
        cells.push((cell, peak));
        let mut axis = 0;
        loop {
            if axis == d {
                let tol = NEGLIGIBLE_TOL * scale.max(1.0);
                let cells = cells
                    .into_iter()
                    .filter(|(_, p)| *p > tol)
                    .map(|(c, _)| c)
                    .collect();
                return Ok(SupportSet { cells });
            }
            idx[axis] += 1;
            if idx[axis] < n {
                break;
            }
            idx[axis] = 0;
            axis += 1;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Constancy {
    Constant(LcComplex),
    /// `∂^α a_q(point) = derivative` is not negligible.
    NonConstant {
        point: Vec<f64>,
        alpha: Vec<u8>,
        exponent: Exponent,
        derivative: f64,
    },
}

/// Tests `∇a_q ≈ 0` on every sample box for each term below `probe`. On
/// success the constant is read off at the first sample point.
pub fn gradient_constancy(
    f: &AsymptoticFunction,
    ks: &[CompactBox],
    probe: Exponent,
) -> Result<Constancy, AsymError> {
    if !f.domain().is_connected() {
        return Err(AsymError::Connectivity);
    }
    let base = ks
        .first()
        .ok_or_else(|| AsymError::Domain("no sample boxes given".into()))?
        .grid()
        .swap_remove(0);
    let d = f.dim();
    let mut values = Vec::new();
    for (q, a) in f.terms() {
        if q >= probe {
            break;
        }
        let mut scale = 0.0f64;
        let mut grads = Vec::new();
        for k in ks {
            check_compact(f, k)?;
            for x in k.grid() {
                let jet = a.jet(&x, 1)?;
                scale = scale.max(jet.value().abs());
                for axis in 0..d {
                    let mut alpha = vec![0u8; d];
                    alpha[axis] = 1;
                    grads.push((x.clone(), alpha.clone(), jet.derivative(&alpha)));
                }
            }
        }
        let tol = NEGLIGIBLE_TOL * scale.max(1.0);
        if let Some((point, alpha, derivative)) = grads.into_iter().find(|g| g.2.abs() > tol) {
            return Ok(Constancy::NonConstant {
                point,
                alpha,
                exponent: q,
                derivative,
            });
        }
        values.push((q, Complex64::new(a.value(&base)?, 0.0)));
    }
    Ok(Constancy::Constant(LcComplex::from_terms(
        values,
        f.horizon().min(ExtExp::Finite(probe)),
    )))
}

/// Checks that `f` and `g` carry the same terms on `Ω` sample points.
#[cfg(test)]
pub(crate) fn coefficientwise_close(
    f: &AsymptoticFunction,
    g: &AsymptoticFunction,
    pts: &[Vec<f64>],
    tol: f64,
) -> bool {
    let exps: std::collections::BTreeSet<Exponent> =
        f.terms().chain(g.terms()).map(|(q, _)| q).collect();
    exps.into_iter().all(|q| {
        pts.iter().all(|x| {
            let a = f
                .coefficient(q)
                .map_or(Ok(0.0), |c| c.value(x))
                .unwrap_or(f64::NAN);
            let b = g
                .coefficient(q)
                .map_or(Ok(0.0), |c| c.value(x))
                .unwrap_or(f64::NAN);
            (a - b).abs() <= tol
        })
    })
}
