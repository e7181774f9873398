//! Polynomial roots over the float Levi-Civita field.
//!
//! Roots are built term by term with the Newton polygon: each lower-hull
//! segment fixes the valuation of a group of roots, and the roots of the
//! segment's associated complex polynomial give their leading coefficients.
//! Simple leading coefficients are lifted with Newton's method, where the
//! residual valuation roughly doubles per step. Repeated ones are resolved by
//! shifting the polynomial and recursing, which also yields multiplicities.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use num_traits::Signed;

use crate::lc::{Exponent, ExtExp, LcComplex, LcError, LcNumber, Scalar, FLOAT_DUST};

/// Polynomial with Levi-Civita coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq)]
pub struct LcPolynomial<C> {
    coeffs: Vec<LcNumber<C>>,
}

impl<C: Scalar> LcPolynomial<C> {
    /// Trailing zero coefficients are stripped.
    pub fn new(mut coeffs: Vec<LcNumber<C>>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(LcNumber::is_zero) {
            coeffs.pop();
        }
        LcPolynomial { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[LcNumber<C>] {
        &self.coeffs
    }

    pub fn eval(&self, x: &LcNumber<C>) -> LcNumber<C> {
        let mut acc = LcNumber::zero();
        for a in self.coeffs.iter().rev() {
            acc = &(&acc * x) + a;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a.scale_by(&C::from_i64(i as i64)))
            .collect::<Vec<_>>();
        if coeffs.is_empty() {
            return LcPolynomial::new(vec![LcNumber::zero()]);
        }
        LcPolynomial::new(coeffs)
    }

    /// `q(y) = p(s + y)`.
    pub fn taylor_shift(&self, s: &LcNumber<C>) -> Self {
        let mut b = self.coeffs.clone();
        let n = b.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = &b[j + 1] * s;
                b[j] = &b[j] + &t;
            }
        }
        LcPolynomial { coeffs: b }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = vec![LcNumber::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        LcPolynomial::new(out)
    }

    /// `Π (x − r)^m`.
    pub fn from_roots(roots: &[(LcNumber<C>, usize)]) -> Self {
        let mut p = LcPolynomial::new(vec![LcNumber::one()]);
        for (r, m) in roots {
            let factor = LcPolynomial::new(vec![-r, LcNumber::one()]);
            for _ in 0..*m {
                p = p.mul(&factor);
            }
        }
        p
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PolyRoot {
    pub root: LcComplex,
    pub multiplicity: usize,
    /// Lower bound on `v(p(root))`.
    pub residual_valuation: ExtExp,
}

impl fmt::Display for PolyRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root)?;
        if self.multiplicity > 1 {
            write!(f, "  (multiplicity {})", self.multiplicity)?;
        }
        Ok(())
    }
}

const CLUSTER_TOL: f64 = 1e-5;
/// Terms below this fraction of the magnitudes that fed them are rounding noise.
const RESIDUAL_DUST: f64 = 1e-11;
const MAX_DEPTH: usize = 48;

/// All roots of `p` with multiplicities, lifted until `v(p(root)) ≥ target`.
pub fn poly_roots(p: &LcPolynomial<Complex64>, target: Exponent) -> Result<Vec<PolyRoot>, LcError> {
    if p.degree() == 0 {
        return Err(LcError::Unsupported("root finding needs degree ≥ 1".into()));
    }
    let spread = p
        .coeffs
        .iter()
        .filter_map(|a| a.valuation().finite())
        .map(|v| v.abs())
        .max()
        .unwrap_or_default();
    let deg = p.degree() as i64;
    let mut margin = Exponent::from_integer(6) + spread * Exponent::from_integer(2 * deg + 2);
    let mut last_err = None;
    for _ in 0..4 {
        let mut solver = Solver {
            target,
            cap: ExtExp::Finite(target + margin),
            valuations: p.coeffs.iter().map(|a| a.valuation().finite()).collect(),
        };
        match solver.solve(p, &LcNumber::zero(), None, 0) {
            Ok(found) => {
                let total: usize = found.iter().map(|(_, m)| m).sum();
                if total != p.degree() {
                    last_err = Some(LcError::Lift(format!(
                        "found {} roots of a degree-{} polynomial",
                        total,
                        p.degree()
                    )));
                } else {
                    let roots: Vec<PolyRoot> = found
                        .into_iter()
                        .map(|(root, multiplicity)| {
                            let residual_valuation = clean_residual(p, &root).valuation_bound();
                            PolyRoot {
                                root,
                                multiplicity,
                                residual_valuation,
                            }
                        })
                        .collect();
                    if let Some(bad) = roots
                        .iter()
                        .find(|r| r.residual_valuation < ExtExp::Finite(target))
                    {
                        last_err = Some(LcError::Lift(format!(
                            "residual valuation {} below target {} at root {}",
                            bad.residual_valuation, target, bad.root
                        )));
                    } else {
                        return Ok(roots);
                    }
                }
            }
            Err(e) => last_err = Some(e),
        }
        margin = margin * Exponent::from_integer(2) + Exponent::from_integer(4);
    }
    Err(last_err.unwrap_or_else(|| LcError::Lift("no roots".into())))
}

struct Solver {
    target: Exponent,
    cap: ExtExp,
    /// Valuations of the original coefficients.
    valuations: Vec<Option<Exponent>>,
}

impl Solver {
    /// Roots `prefix + y` of `q(y) = p(prefix + y)` with `v(y) > floor`.
    fn solve(
        &mut self,
        q: &LcPolynomial<Complex64>,
        prefix: &LcComplex,
        floor: Option<Exponent>,
        depth: usize,
    ) -> Result<Vec<(LcComplex, usize)>, LcError> {
        if depth > MAX_DEPTH {
            return Err(LcError::Lift(format!(
                "cluster at {} not separated after {} refinements",
                prefix, depth
            )));
        }
        let coeffs: Vec<LcComplex> = q.coeffs.iter().map(|a| a.with_horizon(self.cap)).collect();
        let deg = coeffs.len() - 1;
        let zeros = coeffs.iter().take_while(|a| a.is_zero()).count();
        let mut out = Vec::new();
        if zeros > 0 {
            out.push((prefix.clone(), zeros.min(deg)));
        }
        if zeros >= deg {
            return Ok(out);
        }
        let points: Vec<(usize, Exponent)> = coeffs
            .iter()
            .enumerate()
            .skip(zeros)
            .filter_map(|(i, a)| a.valuation().finite().map(|v| (i, v)))
            .collect();
        for (i, j) in lower_hull(&points) {
            let (vi, vj) = (valuation_at(&points, i), valuation_at(&points, j));
            let mu = (vi - vj) / Exponent::from_integer((j - i) as i64);
            if floor.is_some_and(|f| mu <= f) {
                continue;
            }
            let line = vi + mu * Exponent::from_integer(i as i64);
            let mut assoc = vec![Complex64::new(0.0, 0.0); j - i + 1];
            for &(k, vk) in points.iter().filter(|(k, _)| *k >= i && *k <= j) {
                if vk + mu * Exponent::from_integer(k as i64) == line {
                    assoc[k - i] = *coeffs[k].leading().expect("nonzero").1;
                }
            }
            for (c, mult) in cluster(&assoc) {
                let guess = LcComplex::monomial(c, mu);
                if mult == 1 {
                    let root_valuation = prefix.valuation().finite().map_or(mu, |v| v.min(mu));
                    let y = self.lift(q, c, mu, line, self.horizon_for(root_valuation))?;
                    out.push((prefix + &y, 1));
                } else {
                    let shifted = q.taylor_shift(&guess);
                    let next_prefix = prefix + &guess;
                    out.extend(self.solve(&shifted, &next_prefix, Some(mu), depth + 1)?);
                }
            }
        }
        Ok(out)
    }

    /// Horizon a root of valuation `v` needs so that evaluating the original
    /// polynomial there is known up to the target.
    fn horizon_for(&self, v: Exponent) -> Exponent {
        let loss = self
            .valuations
            .iter()
            .enumerate()
            .skip(1)
            .filter_map(|(k, a)| a.map(|a| a + v * Exponent::from_integer(k as i64 - 1)))
            .min()
            .unwrap_or_default();
        self.target - loss
    }

    /// Newton lifting of a simple root `c·ρ^mu + …` of `q`, where `line`
    /// is the Newton-polygon value `min_k v(a_k) + k·mu`.
    ///
    /// The iteration runs on `Q(z) = ρ^(−line)·q(ρ^mu·z)`, whose coefficients
    /// have nonnegative valuation and whose root `z` and slope `Q'(z)` are
    /// units. Every product then lands at or above its factors' exponents,
    /// so rounding noise never moves to lower orders.
    fn lift(
        &self,
        q: &LcPolynomial<Complex64>,
        c: Complex64,
        mu: Exponent,
        line: Exponent,
        needed: Exponent,
    ) -> Result<LcComplex, LcError> {
        let scaled = LcPolynomial::new(
            q.coeffs
                .iter()
                .enumerate()
                .map(|(k, a)| a.shift(mu * Exponent::from_integer(k as i64) - line))
                .collect(),
        );
        let dq = scaled.derivative();
        // v(p(x)) = line + v(Q(z)) and the root is known to mu + v(Q(z))
        // the root must also carry enough horizon for p(root) to reach the target
        let goal = (self.target - line.min(mu)).max(needed - mu);
        let z_cap = ExtExp::Finite(goal + Exponent::from_integer(1)).min(self.cap + (-mu));
        let mut z = LcComplex::constant(c);
        let mut seen = Magnitudes::default();
        let mut last = ExtExp::Finite(Exponent::from_integer(i64::MIN / 4));
        for _ in 0..64 {
            seen.record(&z);
            let (residual, bound) = eval_with_bound(&scaled, &z);
            seen.record(&bound);
            let residual = seen.clean(&residual);
            let rv = residual.valuation_bound();
            if rv >= ExtExp::Finite(goal) {
                return Ok(z.with_horizon(ExtExp::Finite(goal)).shift(mu));
            }
            if rv <= last || residual.is_zero() {
                return Err(LcError::Lift(format!(
                    "residual valuation stuck at {} (root {}, residual {})",
                    rv,
                    z.shift(mu),
                    residual
                )));
            }
            last = rv;
            let slope = dq.eval(&z);
            if slope.valuation() != ExtExp::Finite(Exponent::from_integer(0)) {
                return Err(LcError::Lift(format!("root {} is not simple", z.shift(mu))));
            }
            // a Newton step is only accurate to twice the residual valuation;
            // keeping more breeds large transients whose cancellation is noise
            let step_cap = match rv {
                ExtExp::Finite(v) => ExtExp::Finite(v + v).min(z_cap),
                ExtExp::Infinity => z_cap,
            };
            let (step, spread) = long_divide(&residual, &slope, step_cap);
            seen.record(&spread);
            // the truncated iterate is a chosen guess, not data with a horizon
            let next = seen.clean(&(&z - &step).with_horizon(z_cap));
            z = LcNumber::from_terms(next.terms().map(|(e, c)| (e, *c)), ExtExp::Infinity);
        }
        Err(LcError::Lift(
            "Newton lifting exceeded the iteration limit".into(),
        ))
    }
}

/// Quotient `num / den` up to `cap`, with the termwise magnitudes of every
/// subtraction made along the way. Long division keeps remainders on the
/// scale of the true quotient, where multiplying by a series inverse would
/// build huge terms that then cancel.
fn long_divide(num: &LcComplex, den: &LcComplex, cap: ExtExp) -> (LcComplex, LcComplex) {
    let Some((vd, &lead)) = den.leading() else {
        return (LcComplex::zero(), LcComplex::zero());
    };
    let within = |e: Exponent| ExtExp::Finite(e) < cap;
    let mut rem: BTreeMap<Exponent, (Complex64, f64)> = num
        .terms()
        .filter(|(q, _)| within(*q - vd))
        .map(|(q, c)| (q, (*c, c.norm())))
        .collect();
    let mut quotient = Vec::new();
    let mut spread: BTreeMap<Exponent, f64> = BTreeMap::new();
    while let Some((q, (c, scale))) = rem.pop_first() {
        if c.norm() <= FLOAT_DUST * scale {
            continue;
        }
        let e = q - vd;
        let t = c / lead;
        quotient.push((e, t));
        *spread.entry(e).or_insert(0.0) += scale / lead.norm();
        for (qd, cd) in den.terms().skip(1) {
            if !within(e + qd - vd) {
                break;
            }
            let slot = rem.entry(e + qd).or_insert((Complex64::new(0.0, 0.0), 0.0));
            slot.0 -= t * cd;
            slot.1 += t.norm() * cd.norm();
        }
    }
    let spread = spread.into_iter().map(|(e, m)| (e, Complex64::new(m, 0.0)));
    (
        LcNumber::from_terms(quotient, cap),
        LcNumber::from_terms(spread, cap),
    )
}

fn magnitudes(x: &LcComplex) -> LcComplex {
    LcNumber::from_terms(
        x.terms().map(|(q, c)| (q, Complex64::new(c.norm(), 0.0))),
        x.horizon(),
    )
}

/// `p(y)` with terms dropped that are within rounding of zero.
fn clean_residual(p: &LcPolynomial<Complex64>, y: &LcComplex) -> LcComplex {
    let (value, bound) = eval_with_bound(p, y);
    let mut seen = Magnitudes {
        running: true,
        ..Default::default()
    };
    seen.record(&bound);
    seen.clean(&value)
}

/// `p(y)` and its termwise bound `Σ |a_k|·|y|^k`.
fn eval_with_bound(p: &LcPolynomial<Complex64>, y: &LcComplex) -> (LcComplex, LcComplex) {
    let ay = magnitudes(y);
    let bound = LcPolynomial::new(p.coeffs.iter().map(magnitudes).collect()).eval(&ay);
    (p.eval(y), bound)
}

/// Largest coefficient magnitude met at each exponent. Terms under the
/// dust factor times that magnitude are noise. With `running` set the
/// maximum also runs over lower exponents, which in a problem with
/// nonnegative valuations covers every product that can land at `ρ^q`.
#[derive(Default)]
struct Magnitudes {
    seen: BTreeMap<Exponent, f64>,
    running: bool,
}

impl Magnitudes {
    fn record(&mut self, x: &LcComplex) {
        for (q, c) in x.terms() {
            let m = self.seen.entry(q).or_insert(0.0);
            *m = m.max(c.norm());
        }
    }

    fn floor(&self, q: Exponent) -> f64 {
        if self.running {
            self.seen.range(..=q).map(|(_, m)| *m).fold(0.0, f64::max)
        } else {
            self.seen.get(&q).copied().unwrap_or(0.0)
        }
    }

    fn clean(&self, x: &LcComplex) -> LcComplex {
        LcNumber::from_terms(
            x.terms()
                .filter(|(q, c)| c.norm() > RESIDUAL_DUST * self.floor(*q))
                .map(|(q, c)| (q, *c)),
            x.horizon(),
        )
    }
}

fn valuation_at(points: &[(usize, Exponent)], i: usize) -> Exponent {
    points.iter().find(|(k, _)| *k == i).expect("hull vertex").1
}

/// Lower convex hull of the Newton polygon, as consecutive vertex pairs.
fn lower_hull(points: &[(usize, Exponent)]) -> Vec<(usize, usize)> {
    let mut hull: Vec<(usize, Exponent)> = Vec::new();
    for &p in points {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b when it lies on or above the segment a→p
            let lhs = (b.1 - a.1) * Exponent::from_integer((p.0 - a.0) as i64);
            let rhs = (p.1 - a.1) * Exponent::from_integer((b.0 - a.0) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    hull.windows(2).map(|w| (w[0].0, w[1].0)).collect()
}

/// Nonzero roots of the associated polynomial grouped into clusters, each
/// polished against the derivative of matching order.
fn cluster(assoc: &[Complex64]) -> Vec<(Complex64, usize)> {
    let raw = complex_roots(assoc);
    let mut groups: Vec<Vec<Complex64>> = Vec::new();
    for z in raw {
        if z.norm() == 0.0 {
            continue;
        }
        match groups
            .iter_mut()
            .find(|g| (g[0] - z).norm() < CLUSTER_TOL * (1.0 + z.norm()))
        {
            Some(g) => g.push(z),
            None => groups.push(vec![z]),
        }
    }
    groups
        .into_iter()
        .map(|g| {
            let k = g.len();
            let mean = g.iter().sum::<Complex64>() / k as f64;
            let mut d = assoc.to_vec();
            for _ in 1..k {
                d = complex_derivative(&d);
            }
            (newton_polish(&d, mean), k)
        })
        .collect()
}

fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

fn complex_derivative(coeffs: &[Complex64]) -> Vec<Complex64> {
    coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * i as f64)
        .collect()
}

fn newton_polish(coeffs: &[Complex64], mut z: Complex64) -> Complex64 {
    let d = complex_derivative(coeffs);
    for _ in 0..8 {
        let fd = horner(&d, z);
        if fd.norm() == 0.0 {
            break;
        }
        let step = horner(coeffs, z) / fd;
        z -= step;
        if step.norm() <= 1e-17 * z.norm() {
            break;
        }
    }
    z
}

/// Roots of a complex polynomial (lowest degree first) by the Aberth method.
pub fn complex_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while c.len() > 1 && c.last().is_some_and(|z| z.norm() == 0.0) {
        c.pop();
    }
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![-c[0] / c[1]];
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|z| z / lead).collect();
    let radius = 1.0 + monic[..n].iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            Complex64::from_polar(
                radius * 0.5,
                2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4,
            )
        })
        .collect();
    let d = complex_derivative(&monic);
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for k in 0..n {
            let f = horner(&monic, z[k]);
            let fd = horner(&d, z[k]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / fd;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                moved = moved.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if moved < 1e-16 {
            break;
        }
    }
    z
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn series(pairs: &[(i64, i64, f64)]) -> LcComplex {
        LcComplex::from_terms(
            pairs.iter().map(|&(n, d, v)| (Exponent::new(n, d), c(v))),
            ExtExp::Infinity,
        )
    }

    fn poly(coeffs: Vec<LcComplex>) -> LcPolynomial<Complex64> {
        LcPolynomial::new(coeffs)
    }

    fn close(a: &LcComplex, b: &LcComplex, below: Exponent) -> bool {
        let d = a - b;
        let ok = d.terms().all(|(q, v)| q >= below || v.norm() < 1e-9);
        ok
    }

    fn sorted_roots(p: &LcPolynomial<Complex64>) -> Vec<PolyRoot> {
        let mut roots = poly_roots(p, Exponent::from_integer(8)).unwrap();
        roots.sort_by(|a, b| {
            let ka = a.root.terms().map(|(q, v)| (q, v.re)).collect::<Vec<_>>();
            let kb = b.root.terms().map(|(q, v)| (q, v.re)).collect::<Vec<_>>();
            ka.partial_cmp(&kb).unwrap()
        });
        roots
    }

    #[test]
    fn square_root_of_rho() {
        let p = poly(vec![
            series(&[(1, 1, -1.0)]),
            LcComplex::zero(),
            LcComplex::one(),
        ]);
        let roots = sorted_roots(&p);
        assert_eq!(roots.len(), 2);
        let half = Exponent::new(1, 2);
        let plus = roots.iter().find(|r| r.root.coeff(half).re > 0.0).unwrap();
        let minus = roots.iter().find(|r| r.root.coeff(half).re < 0.0).unwrap();
        assert!(close(
            &plus.root,
            &series(&[(1, 2, 1.0)]),
            Exponent::from_integer(8)
        ));
        assert!(close(
            &minus.root,
            &series(&[(1, 2, -1.0)]),
            Exponent::from_integer(8)
        ));
    }

    #[test]
    fn cluster_with_common_leading_term() {
        // x² − (2+ρ)x + (1+ρ) = (x − 1)(x − 1 − ρ)
        let p = poly(vec![
            series(&[(0, 1, 1.0), (1, 1, 1.0)]),
            series(&[(0, 1, -2.0), (1, 1, -1.0)]),
            LcComplex::one(),
        ]);
        let roots = sorted_roots(&p);
        assert_eq!(roots.len(), 2);
        assert!(roots
            .iter()
            .any(|r| close(&r.root, &LcComplex::one(), Exponent::from_integer(8))));
        assert!(roots.iter().any(|r| close(
            &r.root,
            &series(&[(0, 1, 1.0), (1, 1, 1.0)]),
            Exponent::from_integer(8)
        )));
        assert!(roots.iter().all(|r| r.residual_valuation >= ExtExp::int(8)));
    }

    #[test]
    fn symmetric_split_of_a_double_leading_term() {
        // x² − 2x + (1 − ρ²) has roots 1 ± ρ
        let p = poly(vec![
            series(&[(0, 1, 1.0), (2, 1, -1.0)]),
            series(&[(0, 1, -2.0)]),
            LcComplex::one(),
        ]);
        let roots = sorted_roots(&p);
        assert!(roots.iter().any(|r| close(
            &r.root,
            &series(&[(0, 1, 1.0), (1, 1, 1.0)]),
            Exponent::from_integer(8)
        )));
        assert!(roots.iter().any(|r| close(
            &r.root,
            &series(&[(0, 1, 1.0), (1, 1, -1.0)]),
            Exponent::from_integer(8)
        )));
    }

    #[test]
    fn exact_double_root_reports_multiplicity() {
        let r1 = series(&[(0, 1, 1.0), (1, 1, 2.0)]);
        let r2 = series(&[(-1, 1, 3.0)]);
        let p = LcPolynomial::from_roots(&[(r1.clone(), 2), (r2.clone(), 1)]);
        let roots = sorted_roots(&p);
        let double = roots.iter().find(|r| r.multiplicity == 2).unwrap();
        assert!(close(&double.root, &r1, Exponent::from_integer(8)));
        assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<usize>(), 3);
    }

    #[test]
    fn taylor_shift_matches_evaluation() {
        let p = poly(vec![
            series(&[(0, 1, 2.0)]),
            series(&[(1, 1, -1.0)]),
            LcComplex::one(),
        ]);
        let s = series(&[(0, 1, 1.0), (1, 2, 1.0)]);
        let q = p.taylor_shift(&s);
        let y = series(&[(2, 1, 3.0)]);
        assert!((&q.eval(&y) - &p.eval(&(&s + &y)))
            .terms()
            .all(|(_, v)| v.norm() < 1e-12));
    }

    #[test]
    fn aberth_finds_cubic_roots() {
        // (z − 1)(z + 2)(z − 3i)
        let coeffs = [
            Complex64::new(0.0, 6.0),
            Complex64::new(-2.0, -3.0),
            Complex64::new(1.0, -3.0),
            c(1.0),
        ];
        let roots = complex_roots(&coeffs);
        for target in [c(1.0), c(-2.0), Complex64::new(0.0, 3.0)] {
            assert!(roots.iter().any(|z| (z - target).norm() < 1e-12));
        }
    }
}
