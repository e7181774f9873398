use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, DVector};

use super::{MollifyError, TestFunction};
use crate::quad::{adaptive, rule, segments};
use crate::smooth::{bump_value, Smooth};

/// Highest moment order the solver accepts.
pub const MAX_MOMENT_ORDER: usize = 8;

/// Layout of the bump basis the moment system is solved over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Basis {
    /// Translates with increasing radii; no symmetry, so the first
    /// non-vanishing moment is generically of order `n + 1`.
    Shifted,
    /// Even combinations `φ((t−c)/s) + φ((t+c)/s)`; odd moments vanish
    /// identically.
    Symmetric,
}

/// `∫_{-1}^{1} u^i φ(u) du` for the standard bump.
pub(crate) fn bump_moment(i: usize) -> f64 {
    static CACHE: OnceLock<Mutex<HashMap<usize, f64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
    *guard.entry(i).or_insert_with(|| {
        if i % 2 == 1 {
            return 0.0;
        }
        2.0 * adaptive(
            &mut |u| u.powi(i as i32) * bump_value(u),
            0.0,
            1.0,
            &[0.5, 0.9],
            1e-17,
        )
        .value
    })
}

/// `∫_{-1}^{u} φ`.
pub(crate) fn bump_cdf(u: f64) -> f64 {
    let mass = bump_moment(0);
    if u <= -1.0 {
        0.0
    } else if u >= 1.0 {
        mass
    } else if u <= 0.0 {
        adaptive(&mut bump_value, -1.0, u, &[], 1e-17).value
    } else {
        mass - adaptive(&mut bump_value, u, 1.0, &[], 1e-17).value
    }
}

/// A one-dimensional profile `θ(t) = Σ_j a_j φ((t − c_j)/s_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    pub terms: Vec<(f64, f64, f64)>,
}

impl Profile {
    /// `θ(t/r)/r`: same mass and moments scaled by `r^k`.
    pub fn dilate(&self, r: f64) -> Profile {
        Profile {
            terms: self
                .terms
                .iter()
                .map(|&(a, c, s)| (a / r, c * r, s * r))
                .collect(),
        }
    }

    pub fn expr(&self, axis: usize) -> Smooth {
        self.terms.iter().fold(Smooth::zero(), |acc, &(a, c, s)| {
            &acc + &(&Smooth::constant(a) * &Smooth::bump(axis, c, s))
        })
    }

    /// Closed support bounds.
    pub fn extent(&self) -> (f64, f64) {
        self.terms.iter().fold(
            (f64::INFINITY, f64::NEG_INFINITY),
            |(lo, hi), &(_, c, s)| (lo.min(c - s), hi.max(c + s)),
        )
    }

    pub fn value(&self, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|&(a, c, s)| a * bump_value((t - c) / s))
            .sum()
    }

    /// `∫_{-∞}^{t} θ`.
    pub fn cdf(&self, t: f64) -> f64 {
        let (lo, hi) = self.extent();
        if t <= lo {
            return 0.0;
        }
        if t >= hi {
            return self.terms.iter().map(|&(a, _, s)| a * s).sum::<f64>() * bump_moment(0);
        }
        self.terms
            .iter()
            .map(|&(a, c, s)| a * s * bump_cdf((t - c) / s))
            .sum()
    }

    pub fn breakpoints(&self) -> Vec<f64> {
        let mut b: Vec<f64> = self
            .terms
            .iter()
            .flat_map(|&(_, c, s)| [c - s, c, c + s])
            .collect();
        b.sort_by(f64::total_cmp);
        b.dedup();
        b
    }

    /// `∫ t^k θ` from the bump moments, exact up to rounding.
    pub fn moment(&self, k: usize) -> f64 {
        self.terms
            .iter()
            .map(|&(a, c, s)| a * shifted_moment(c, s, k))
            .sum()
    }

    /// `∫ |θ|` by composite quadrature.
    pub fn l1_norm(&self) -> f64 {
        let (nodes, weights) = self.nodes(4, 24);
        nodes
            .iter()
            .zip(&weights)
            .map(|(t, w)| w * self.value(*t).abs())
            .sum()
    }

    /// Composite Gauss nodes over the support split at the breakpoints.
    pub fn nodes(&self, panels: usize, deg: usize) -> (Vec<f64>, Vec<f64>) {
        let (lo, hi) = self.extent();
        composite_nodes(lo, hi, &self.breakpoints(), panels, deg)
    }
}

pub(crate) fn composite_nodes(
    lo: f64,
    hi: f64,
    breaks: &[f64],
    panels: usize,
    deg: usize,
) -> (Vec<f64>, Vec<f64>) {
    let r = rule(deg);
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for w in segments(lo, hi, breaks).windows(2) {
        let h = (w[1] - w[0]) / panels as f64;
        for p in 0..panels {
            let a = w[0] + p as f64 * h;
            for (x, wt) in r.iter() {
                nodes.push(a + h * (x + 1.0) / 2.0);
                weights.push(wt * h / 2.0);
            }
        }
    }
    (nodes, weights)
}

/// `∫ t^k φ((t − c)/s) dt = s Σ_i C(k,i) c^{k−i} s^i μ_i`.
fn shifted_moment(c: f64, s: f64, k: usize) -> f64 {
    let mut binom = 1.0;
    let mut total = 0.0;
    for i in 0..=k {
        if i % 2 == 0 {
            total += binom * c.powi((k - i) as i32) * s.powi(i as i32) * bump_moment(i);
        }
        binom = binom * (k - i) as f64 / (i + 1) as f64;
    }
    s * total
}

fn basis(n: usize, kind: Basis) -> Vec<Vec<(f64, f64)>> {
    match kind {
        Basis::Shifted => {
            let m = n + 6;
            (0..m)
                .map(|j| {
                    let f = j as f64 / (m - 1) as f64;
                    vec![(-0.65 + 1.3 * f, 0.25 + 0.1 * f)]
                })
                .collect()
        }
        Basis::Symmetric => {
            let m = n / 2 + 4;
            (0..m)
                .map(|j| {
                    let c = 0.65 * j as f64 / (m - 1) as f64;
                    if j == 0 {
                        vec![(0.0, 0.35)]
                    } else {
                        vec![(-c, 0.35), (c, 0.35)]
                    }
                })
                .collect()
        }
    }
}

fn solve(a: DMatrix<f64>, b: DVector<f64>) -> Option<DVector<f64>> {
    let svd = a.svd(true, true);
    let top = svd.singular_values.max();
    svd.solve(&b, top * 1e-15).ok()
}

/// Solves `∫θ = 1`, `∫t^kθ = 0` for `1 ≤ k ≤ n` on `[-1, 1]`, minimising
/// `∫|θ|` by iteratively reweighted least squares.
pub fn solve_profile(n: usize, kind: Basis) -> Result<Profile, MollifyError> {
    if n > MAX_MOMENT_ORDER {
        return Err(MollifyError::MomentSystem {
            n,
            reason: format!("orders above {MAX_MOMENT_ORDER} are not supported"),
        });
    }
    if n == 0 {
        return Ok(Profile {
            terms: vec![(1.0 / bump_moment(0), 0.0, 1.0)],
        });
    }
    let funcs = basis(n, kind);
    let m = funcs.len();
    let rows = n + 1;
    let mom = DMatrix::from_fn(rows, m, |k, j| {
        funcs[j].iter().map(|&(c, s)| shifted_moment(c, s, k)).sum()
    });
    let mut rhs = DVector::zeros(rows);
    rhs[0] = 1.0;

    let mut breaks: Vec<f64> = funcs
        .iter()
        .flatten()
        .flat_map(|&(c, s)| [c - s, c, c + s])
        .collect();
    breaks.sort_by(f64::total_cmp);
    let (nodes, quad_w) = composite_nodes(-1.0, 1.0, &breaks, 2, 20);
    let vals = DMatrix::from_fn(nodes.len(), m, |i, j| {
        funcs[j]
            .iter()
            .map(|&(c, s)| bump_value((nodes[i] - c) / s))
            .sum()
    });

    let kkt = |weights: &[f64]| -> Option<DVector<f64>> {
        let weighted = DMatrix::from_fn(nodes.len(), m, |i, j| vals[(i, j)] * weights[i]);
        let gram = vals.transpose() * weighted;
        let size = m + rows;
        let mut sys = DMatrix::zeros(size, size);
        sys.view_mut((0, 0), (m, m)).copy_from(&(gram * 2.0));
        sys.view_mut((0, m), (m, rows)).copy_from(&mom.transpose());
        sys.view_mut((m, 0), (rows, m)).copy_from(&mom);
        let mut b = DVector::zeros(size);
        b.rows_mut(m, rows).copy_from(&rhs);
        solve(sys, b).map(|x| x.rows(0, m).into_owned())
    };

    let l1 = |c: &DVector<f64>| -> f64 {
        (&vals * c)
            .iter()
            .zip(&quad_w)
            .map(|(v, w)| v.abs() * w)
            .sum()
    };
    let mut coef = kkt(&quad_w).ok_or_else(|| MollifyError::MomentSystem {
        n,
        reason: "singular system".into(),
    })?;
    let mut best = (l1(&coef), coef.clone());
    for _ in 0..40 {
        let theta = &vals * &coef;
        let peak = theta.amax();
        let weights: Vec<f64> = theta
            .iter()
            .zip(&quad_w)
            .map(|(v, w)| w / v.abs().max(1e-4 * peak))
            .collect();
        match kkt(&weights) {
            Some(c) => coef = c,
            None => break,
        }
        let norm = l1(&coef);
        if norm < best.0 {
            best = (norm, coef.clone());
        }
    }
    let mut coef = best.1;
    // polish the constraints with minimum-norm corrections
    for _ in 0..3 {
        let resid = &rhs - &mom * &coef;
        let delta = solve(mom.clone(), resid).ok_or_else(|| MollifyError::MomentSystem {
            n,
            reason: "singular moment matrix".into(),
        })?;
        coef += delta;
    }
    let terms = funcs
        .iter()
        .zip(coef.iter())
        .flat_map(|(f, a)| f.iter().map(move |&(c, s)| (*a, c, s)))
        .collect();
    let profile = Profile { terms };
    let worst = (0..=n)
        .map(|k| (profile.moment(k) - if k == 0 { 1.0 } else { 0.0 }).abs())
        .fold(0.0, f64::max);
    if !worst.is_finite() || worst > 1e-11 {
        return Err(MollifyError::MomentSystem {
            n,
            reason: format!("moment residual {worst:e}"),
        });
    }
    Ok(profile)
}

/// A mollifier `Θ = Π_i θ(x_i)` with unit mass and vanishing moments
/// `1 ≤ |α| ≤ n`, supported in the unit ball.
#[derive(Debug, Clone)]
pub struct Mollifier {
    pub n: usize,
    pub dim: usize,
    pub basis: Basis,
    /// The one-dimensional factor, already dilated to `[-1/√d, 1/√d]`.
    pub profile: Profile,
    pub theta: TestFunction,
    /// `∫|Θ|`; the ideal target is below `1 + 1/n`.
    pub l1_norm: f64,
}

impl Mollifier {
    /// `∫ t^k θ` of the one-dimensional factor.
    pub fn factor_moment(&self, k: usize) -> f64 {
        self.profile.moment(k)
    }

    /// `∫ Θ²`.
    pub fn square_integral(&self) -> f64 {
        let (nodes, w) = self.profile.nodes(4, 24);
        let one: f64 = nodes
            .iter()
            .zip(&w)
            .map(|(t, w)| w * self.profile.value(*t).powi(2))
            .sum();
        one.powi(self.dim as i32)
    }
}

pub fn build_mollifier(n: usize, dim: usize) -> Result<Mollifier, MollifyError> {
    build_mollifier_with(n, dim, Basis::Shifted)
}

pub fn build_mollifier_with(n: usize, dim: usize, basis: Basis) -> Result<Mollifier, MollifyError> {
    if dim == 0 {
        return Err(MollifyError::Parameter("dimension must be positive".into()));
    }
    static CACHE: OnceLock<Mutex<HashMap<(usize, Basis), Arc<Profile>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let cached = cache
        .lock()
        .unwrap_or_else(|e| e.into_inner())
        .get(&(n, basis))
        .cloned();
    let unit = match cached {
        Some(p) => p,
        None => {
            let p = Arc::new(solve_profile(n, basis)?);
            cache
                .lock()
                .unwrap_or_else(|e| e.into_inner())
                .insert((n, basis), p.clone());
            p
        }
    };
    let profile = unit.dilate(1.0 / (dim as f64).sqrt());
    let expr = (0..dim).fold(Smooth::one(), |acc, i| &acc * &profile.expr(i));
    let theta = TestFunction::new(expr, dim)?;
    let l1_norm = unit.l1_norm().powi(dim as i32);
    Ok(Mollifier {
        n,
        dim,
        basis,
        profile,
        theta,
        l1_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_constants() {
        // reference values from a 30-digit computation
        assert!((bump_moment(0) - 0.443_993_816_168_079_4).abs() < 1e-15);
        assert!((bump_moment(2) - 0.070_201_476_752_975_42).abs() < 1e-15);
        assert!((bump_moment(4) - 0.023_523_599_571_144_77).abs() < 1e-15);
        assert!((bump_moment(6) - 0.010_239_823_513_544_428).abs() < 1e-15);
        assert!((bump_cdf(0.0) - bump_moment(0) / 2.0).abs() < 1e-15);
    }

    #[test]
    fn moments_vanish_through_order_n() {
        for n in 0..=MAX_MOMENT_ORDER {
            let p = solve_profile(n, Basis::Shifted).unwrap();
            let (lo, hi) = p.extent();
            assert!(lo >= -1.0 && hi <= 1.0);
            assert!((p.moment(0) - 1.0).abs() < 1e-12, "n={n}");
            for k in 1..=n {
                assert!(p.moment(k).abs() < 1e-12, "n={n} k={k}: {}", p.moment(k));
            }
            if n > 0 {
                assert!(p.moment(n + 1).abs() > 1e-6, "n={n}");
            }
        }
    }

    #[test]
    fn symmetric_basis_kills_odd_moments() {
        let p = solve_profile(1, Basis::Symmetric).unwrap();
        assert!(p.moment(1).abs() < 1e-15);
        assert!(p.moment(3).abs() < 1e-15);
        assert!((p.moment(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dilation_keeps_mass() {
        let m = build_mollifier(2, 2).unwrap();
        assert!((m.factor_moment(0) - 1.0).abs() < 1e-12);
        assert!(m.theta.radius() <= 1.0 + 1e-12);
        assert!((m.theta.integral() - 1.0).abs() < 1e-10);
    }
}
