use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::jet::{factorial, Jet};
use super::SmoothError;

/// A smooth function supplied from outside the expression language.
pub trait SmoothFn: Send + Sync + fmt::Debug {
    /// Taylor jet of order `order` at `x`.
    fn jet(&self, x: &[f64], order: usize) -> Result<Jet, SmoothError>;

    fn value(&self, x: &[f64]) -> Result<f64, SmoothError> {
        Ok(self.jet(x, 0)?.value())
    }

    /// Highest derivative order available; `None` means unbounded.
    fn max_order(&self) -> Option<usize> {
        None
    }

    /// Points along `axis` where the function changes character, used to
    /// split quadrature panels.
    fn breakpoints(&self, _axis: usize) -> Vec<f64> {
        Vec::new()
    }

    /// A box outside of which the function vanishes identically.
    fn support(&self) -> Option<Support> {
        None
    }

    fn describe(&self) -> String;
}

/// Per-axis closed bounds; axes past the stored ones are unbounded.
#[derive(Debug, Clone, PartialEq)]
pub struct Support(pub Vec<(f64, f64)>);

impl Support {
    pub fn axis(&self, i: usize) -> (f64, f64) {
        self.0
            .get(i)
            .copied()
            .unwrap_or((f64::NEG_INFINITY, f64::INFINITY))
    }

    fn intersect(&self, other: &Support) -> Support {
        let n = self.0.len().max(other.0.len());
        Support(
            (0..n)
                .map(|i| {
                    let (a, b) = (self.axis(i), other.axis(i));
                    (a.0.max(b.0), a.1.min(b.1))
                })
                .collect(),
        )
    }

    fn hull(&self, other: &Support) -> Support {
        let n = self.0.len().min(other.0.len());
        Support(
            (0..n)
                .map(|i| {
                    let (a, b) = (self.axis(i), other.axis(i));
                    (a.0.min(b.0), a.1.max(b.1))
                })
                .collect(),
        )
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().enumerate().all(|(i, v)| {
            let (a, b) = self.axis(i);
            *v >= a && *v <= b
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Unary {
    Sin,
    Cos,
    Exp,
    Log,
}

impl Unary {
    fn name(self) -> &'static str {
        match self {
            Unary::Sin => "sin",
            Unary::Cos => "cos",
            Unary::Exp => "exp",
            Unary::Log => "log",
        }
    }

    fn value(self, a: f64) -> Result<f64, SmoothError> {
        Ok(match self {
            Unary::Sin => a.sin(),
            Unary::Cos => a.cos(),
            Unary::Exp => a.exp(),
            Unary::Log => {
                if a <= 0.0 {
                    return Err(SmoothError::Domain(format!("log of {a}")));
                }
                a.ln()
            }
        })
    }

    /// Taylor coefficients `f^{(m)}(a)/m!` for `m ≤ k`.
    fn taylor(self, a: f64, k: usize) -> Result<Vec<f64>, SmoothError> {
        let half_pi = std::f64::consts::FRAC_PI_2;
        Ok(match self {
            Unary::Sin => (0..=k)
                .map(|m| (a + m as f64 * half_pi).sin() / factorial(m))
                .collect(),
            Unary::Cos => (0..=k)
                .map(|m| (a + m as f64 * half_pi).cos() / factorial(m))
                .collect(),
            Unary::Exp => {
                let e = a.exp();
                (0..=k).map(|m| e / factorial(m)).collect()
            }
            Unary::Log => {
                let l = self.value(a)?;
                (0..=k)
                    .map(|m| {
                        if m == 0 {
                            l
                        } else {
                            let s = if m % 2 == 1 { 1.0 } else { -1.0 };
                            s / (m as f64 * a.powi(m as i32))
                        }
                    })
                    .collect()
            }
        })
    }
}

#[derive(Debug)]
enum Node {
    Const(f64),
    Var(usize),
    Add(Smooth, Smooth),
    Sub(Smooth, Smooth),
    Mul(Smooth, Smooth),
    Div(Smooth, Smooth),
    Neg(Smooth),
    Powi(Smooth, i32),
    Powf(Smooth, f64),
    Unary(Unary, Smooth),
    /// `exp(−1/(1−t²))` with `t = (x_axis − center)/radius`, zero for `|t| ≥ 1`.
    Bump {
        axis: usize,
        center: f64,
        radius: f64,
    },
    Derive(Smooth, Vec<u8>),
    Custom(Arc<dyn SmoothFn>),
}

/// A smooth coefficient function on `R^d`, built as an expression tree whose
/// jets give exact derivatives of any order.
#[derive(Debug, Clone)]
pub struct Smooth(Arc<Node>);

/// The standard bump `exp(−1/(1−t²))` on `(−1, 1)`.
pub fn bump_value(t: f64) -> f64 {
    if t.abs() >= 1.0 {
        0.0
    } else {
        (-1.0 / (1.0 - t * t)).exp()
    }
}

/// Jet of the standard bump composed with the jet `t`.
pub fn bump_jet(t: &Jet) -> Jet {
    let t0 = t.value();
    if t0.abs() >= 1.0 {
        return Jet::zeros(t.dim(), t.order());
    }
    let u = (&Jet::constant(t.dim(), t.order(), 1.0)) - &(t * t);
    let g = u.recip().expect("interior point").scale(-1.0);
    let e = g.value().exp();
    let taylor: Vec<f64> = (0..=t.order()).map(|m| e / factorial(m)).collect();
    g.compose(&taylor)
}

impl Smooth {
    fn new(node: Node) -> Self {
        Smooth(Arc::new(node))
    }

    pub fn constant(c: f64) -> Self {
        Smooth::new(Node::Const(c))
    }

    pub fn zero() -> Self {
        Smooth::constant(0.0)
    }

    pub fn one() -> Self {
        Smooth::constant(1.0)
    }

    /// The coordinate `x_{i+1}` (zero-based `i`).
    pub fn var(i: usize) -> Self {
        Smooth::new(Node::Var(i))
    }

    pub fn custom(f: Arc<dyn SmoothFn>) -> Self {
        Smooth::new(Node::Custom(f))
    }

    pub fn bump(axis: usize, center: f64, radius: f64) -> Self {
        Smooth::new(Node::Bump {
            axis,
            center,
            radius,
        })
    }

    /// Tensor product of one-dimensional bumps, one per axis.
    pub fn bump_box(center: &[f64], radius: &[f64]) -> Self {
        center
            .iter()
            .zip(radius)
            .enumerate()
            .fold(Smooth::one(), |acc, (i, (c, r))| {
                &acc * &Smooth::bump(i, *c, *r)
            })
    }

    pub fn unary(f: Unary, a: &Smooth) -> Self {
        if let Some(c) = a.as_const() {
            if let Ok(v) = f.value(c) {
                return Smooth::constant(v);
            }
        }
        Smooth::new(Node::Unary(f, a.clone()))
    }

    pub fn sin(&self) -> Self {
        Smooth::unary(Unary::Sin, self)
    }

    pub fn cos(&self) -> Self {
        Smooth::unary(Unary::Cos, self)
    }

    pub fn exp(&self) -> Self {
        Smooth::unary(Unary::Exp, self)
    }

    pub fn ln(&self) -> Self {
        Smooth::unary(Unary::Log, self)
    }

    pub fn powi(&self, n: i32) -> Self {
        match n {
            0 => Smooth::one(),
            1 => self.clone(),
            _ => match self.as_const() {
                Some(c) => Smooth::constant(c.powi(n)),
                None => Smooth::new(Node::Powi(self.clone(), n)),
            },
        }
    }

    pub fn powf(&self, p: f64) -> Self {
        if p.fract() == 0.0 && p.abs() < i32::MAX as f64 {
            return self.powi(p as i32);
        }
        Smooth::new(Node::Powf(self.clone(), p))
    }

    pub fn sqrt(&self) -> Self {
        self.powf(0.5)
    }

    /// `∂^α f`, checked against the advertised derivative order.
    pub fn derive(&self, alpha: &[u8]) -> Result<Self, SmoothError> {
        let total: usize = alpha.iter().map(|&a| a as usize).sum();
        if total == 0 {
            return Ok(self.clone());
        }
        if let Some(max) = self.max_order() {
            if total > max {
                return Err(SmoothError::DerivativeOrder {
                    requested: total,
                    max,
                });
            }
        }
        Ok(match &*self.0 {
            Node::Const(_) => Smooth::zero(),
            Node::Var(i) => {
                let unit = alpha
                    .iter()
                    .enumerate()
                    .all(|(k, a)| *a == u8::from(k == *i));
                Smooth::constant(if unit { 1.0 } else { 0.0 })
            }
            Node::Derive(inner, beta) => {
                let n = alpha.len().max(beta.len());
                let sum: Vec<u8> = (0..n)
                    .map(|k| alpha.get(k).copied().unwrap_or(0) + beta.get(k).copied().unwrap_or(0))
                    .collect();
                Smooth::new(Node::Derive(inner.clone(), sum))
            }
            _ => Smooth::new(Node::Derive(self.clone(), alpha.to_vec())),
        })
    }

    pub fn as_const(&self) -> Option<f64> {
        match &*self.0 {
            Node::Const(c) => Some(*c),
            _ => None,
        }
    }

    pub fn is_zero_const(&self) -> bool {
        self.as_const() == Some(0.0)
    }

    pub fn max_order(&self) -> Option<usize> {
        let min = |a: Option<usize>, b: Option<usize>| match (a, b) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        match &*self.0 {
            Node::Const(_) | Node::Var(_) | Node::Bump { .. } => None,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                min(a.max_order(), b.max_order())
            }
            Node::Neg(a) | Node::Powi(a, _) | Node::Powf(a, _) | Node::Unary(_, a) => a.max_order(),
            Node::Derive(a, alpha) => {
                let total: usize = alpha.iter().map(|&v| v as usize).sum();
                a.max_order().map(|m| m.saturating_sub(total))
            }
            Node::Custom(f) => f.max_order(),
        }
    }

    /// Smallest dimension the expression needs.
    pub fn min_dim(&self) -> usize {
        match &*self.0 {
            Node::Const(_) | Node::Custom(_) => 0,
            Node::Var(i) => i + 1,
            Node::Bump { axis, .. } => axis + 1,
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.min_dim().max(b.min_dim())
            }
            Node::Neg(a) | Node::Powi(a, _) | Node::Powf(a, _) | Node::Unary(_, a) => a.min_dim(),
            Node::Derive(a, alpha) => a.min_dim().max(alpha.len()),
        }
    }

    pub fn breakpoints(&self, axis: usize) -> Vec<f64> {
        let mut out = Vec::new();
        self.collect_breakpoints(axis, &mut out);
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn collect_breakpoints(&self, axis: usize, out: &mut Vec<f64>) {
        match &*self.0 {
            Node::Const(_) | Node::Var(_) => {}
            Node::Bump {
                axis: a,
                center,
                radius,
            } => {
                if *a == axis {
                    out.extend([center - radius, *center, center + radius]);
                }
            }
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::Div(a, b) => {
                a.collect_breakpoints(axis, out);
                b.collect_breakpoints(axis, out);
            }
            Node::Neg(a)
            | Node::Powi(a, _)
            | Node::Powf(a, _)
            | Node::Unary(_, a)
            | Node::Derive(a, _) => a.collect_breakpoints(axis, out),
            Node::Custom(f) => out.extend(f.breakpoints(axis)),
        }
    }

    pub fn support(&self) -> Option<Support> {
        match &*self.0 {
            Node::Const(c) if *c == 0.0 => Some(Support(vec![(0.0, 0.0)])),
            Node::Const(_) | Node::Var(_) | Node::Powf(..) | Node::Unary(..) | Node::Div(..) => {
                None
            }
            Node::Bump {
                axis,
                center,
                radius,
            } => {
                let mut s = vec![(f64::NEG_INFINITY, f64::INFINITY); axis + 1];
                s[*axis] = (center - radius, center + radius);
                Some(Support(s))
            }
            Node::Add(a, b) | Node::Sub(a, b) => Some(a.support()?.hull(&b.support()?)),
            Node::Mul(a, b) => match (a.support(), b.support()) {
                (Some(x), Some(y)) => Some(x.intersect(&y)),
                (x, None) => x,
                (None, y) => y,
            },
            Node::Neg(a) | Node::Derive(a, _) => a.support(),
            Node::Powi(a, n) if *n > 0 => a.support(),
            Node::Powi(..) => None,
            Node::Custom(f) => f.support(),
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<f64, SmoothError> {
        Ok(match &*self.0 {
            Node::Const(c) => *c,
            Node::Var(i) => *x.get(*i).ok_or(SmoothError::Dimension {
                needed: i + 1,
                found: x.len(),
            })?,
            Node::Add(a, b) => a.value(x)? + b.value(x)?,
            Node::Sub(a, b) => a.value(x)? - b.value(x)?,
            Node::Mul(a, b) => a.value(x)? * b.value(x)?,
            Node::Div(a, b) => {
                let d = b.value(x)?;
                if d == 0.0 {
                    return Err(SmoothError::Domain(format!("division by zero at {x:?}")));
                }
                a.value(x)? / d
            }
            Node::Neg(a) => -a.value(x)?,
            Node::Powi(a, n) => {
                let v = a.value(x)?;
                if v == 0.0 && *n < 0 {
                    return Err(SmoothError::Domain(format!(
                        "negative power of zero at {x:?}"
                    )));
                }
                v.powi(*n)
            }
            Node::Powf(a, p) => {
                let v = a.value(x)?;
                if v <= 0.0 {
                    return Err(SmoothError::Domain(format!(
                        "fractional power of {v} at {x:?}"
                    )));
                }
                v.powf(*p)
            }
            Node::Unary(f, a) => f.value(a.value(x)?)?,
            Node::Bump {
                axis,
                center,
                radius,
            } => {
                let xi = *x.get(*axis).ok_or(SmoothError::Dimension {
                    needed: axis + 1,
                    found: x.len(),
                })?;
                bump_value((xi - center) / radius)
            }
            Node::Derive(..) => self.jet(x, 0)?.value(),
            Node::Custom(f) => f.value(x)?,
        })
    }

    pub fn jet(&self, x: &[f64], order: usize) -> Result<Jet, SmoothError> {
        let d = x.len();
        Ok(match &*self.0 {
            Node::Const(c) => Jet::constant(d, order, *c),
            Node::Var(i) => {
                if *i >= d {
                    return Err(SmoothError::Dimension {
                        needed: i + 1,
                        found: d,
                    });
                }
                Jet::variable(d, order, *i, x[*i])
            }
            Node::Add(a, b) => &a.jet(x, order)? + &b.jet(x, order)?,
            Node::Sub(a, b) => &a.jet(x, order)? - &b.jet(x, order)?,
            Node::Mul(a, b) => &a.jet(x, order)? * &b.jet(x, order)?,
            Node::Div(a, b) => {
                let r = b
                    .jet(x, order)?
                    .recip()
                    .ok_or_else(|| SmoothError::Domain(format!("division by zero at {x:?}")))?;
                &a.jet(x, order)? * &r
            }
            Node::Neg(a) => -&a.jet(x, order)?,
            Node::Powi(a, n) => {
                let base = a.jet(x, order)?;
                let base = if *n < 0 {
                    base.recip().ok_or_else(|| {
                        SmoothError::Domain(format!("negative power of zero at {x:?}"))
                    })?
                } else {
                    base
                };
                let mut acc = Jet::constant(d, order, 1.0);
                for _ in 0..n.unsigned_abs() {
                    acc = &acc * &base;
                }
                acc
            }
            Node::Powf(a, p) => {
                let base = a.jet(x, order)?;
                let v = base.value();
                if v <= 0.0 {
                    return Err(SmoothError::Domain(format!(
                        "fractional power of {v} at {x:?}"
                    )));
                }
                let mut taylor = Vec::with_capacity(order + 1);
                let mut binom = 1.0;
                for m in 0..=order {
                    taylor.push(binom * v.powf(p - m as f64));
                    binom *= (p - m as f64) / (m as f64 + 1.0);
                }
                base.compose(&taylor)
            }
            Node::Unary(f, a) => {
                let inner = a.jet(x, order)?;
                inner.compose(&f.taylor(inner.value(), order)?)
            }
            Node::Bump {
                axis,
                center,
                radius,
            } => {
                if *axis >= d {
                    return Err(SmoothError::Dimension {
                        needed: axis + 1,
                        found: d,
                    });
                }
                let t = Jet::variable(d, order, *axis, x[*axis])
                    .add_scalar(-center)
                    .scale(1.0 / radius);
                bump_jet(&t)
            }
            Node::Derive(a, alpha) => {
                let total: usize = alpha.iter().map(|&v| v as usize).sum();
                if alpha.len() > d {
                    return Err(SmoothError::Dimension {
                        needed: alpha.len(),
                        found: d,
                    });
                }
                a.jet(x, order + total)?.differentiate(alpha, order)
            }
            Node::Custom(f) => {
                if let Some(max) = f.max_order() {
                    if order > max {
                        return Err(SmoothError::DerivativeOrder {
                            requested: order,
                            max,
                        });
                    }
                }
                f.jet(x, order)?
            }
        })
    }

    /// `∂^α f(x)`.
    pub fn derivative_at(&self, x: &[f64], alpha: &[u8]) -> Result<f64, SmoothError> {
        let total: usize = alpha.iter().map(|&v| v as usize).sum();
        if total == 0 {
            return self.value(x);
        }
        Ok(self.jet(x, total)?.derivative(alpha))
    }
}

fn binary(a: &Smooth, b: &Smooth, op: char) -> Smooth {
    match (op, a.as_const(), b.as_const()) {
        ('+', Some(x), Some(y)) => Smooth::constant(x + y),
        ('-', Some(x), Some(y)) => Smooth::constant(x - y),
        ('*', Some(x), Some(y)) => Smooth::constant(x * y),
        ('/', Some(x), Some(y)) if y != 0.0 => Smooth::constant(x / y),
        ('+', Some(z), _) if z == 0.0 => b.clone(),
        ('+' | '-', _, Some(z)) if z == 0.0 => a.clone(),
        ('-', Some(z), _) if z == 0.0 => -b,
        ('*', Some(z), _) | ('*', _, Some(z)) if z == 0.0 => Smooth::zero(),
        ('*', Some(u), _) if u == 1.0 => b.clone(),
        ('*' | '/', _, Some(u)) if u == 1.0 => a.clone(),
        ('/', Some(z), _) if z == 0.0 => Smooth::zero(),
        ('+', ..) => Smooth::new(Node::Add(a.clone(), b.clone())),
        ('-', ..) => Smooth::new(Node::Sub(a.clone(), b.clone())),
        ('*', ..) => Smooth::new(Node::Mul(a.clone(), b.clone())),
        _ => Smooth::new(Node::Div(a.clone(), b.clone())),
    }
}

macro_rules! smooth_ops {
    ($tr:ident, $m:ident, $c:literal) => {
        impl $tr<&Smooth> for &Smooth {
            type Output = Smooth;
            fn $m(self, rhs: &Smooth) -> Smooth {
                binary(self, rhs, $c)
            }
        }
        impl $tr<Smooth> for Smooth {
            type Output = Smooth;
            fn $m(self, rhs: Smooth) -> Smooth {
                binary(&self, &rhs, $c)
            }
        }
    };
}

smooth_ops!(Add, add, '+');
smooth_ops!(Sub, sub, '-');
smooth_ops!(Mul, mul, '*');
smooth_ops!(Div, div, '/');

impl Neg for &Smooth {
    type Output = Smooth;

    fn neg(self) -> Smooth {
        match self.as_const() {
            Some(c) => Smooth::constant(-c),
            None => Smooth::new(Node::Neg(self.clone())),
        }
    }
}

impl Neg for Smooth {
    type Output = Smooth;

    fn neg(self) -> Smooth {
        -&self
    }
}

impl fmt::Display for Smooth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Node::Const(c) => write!(f, "{c}"),
            Node::Var(i) => write!(f, "x{}", i + 1),
            Node::Add(a, b) => write!(f, "({a} + {b})"),
            Node::Sub(a, b) => write!(f, "({a} - {b})"),
            Node::Mul(a, b) => write!(f, "{a}*{b}"),
            Node::Div(a, b) => write!(f, "{a}/({b})"),
            Node::Neg(a) => write!(f, "-({a})"),
            Node::Powi(a, n) => write!(f, "({a})^{n}"),
            Node::Powf(a, p) => write!(f, "({a})^({p})"),
            Node::Unary(u, a) => write!(f, "{}({a})", u.name()),
            Node::Bump {
                axis,
                center,
                radius,
            } => write!(f, "bump(x{}, {center}, {radius})", axis + 1),
            Node::Derive(a, alpha) => write!(f, "D{alpha:?}[{a}]"),
            Node::Custom(c) => f.write_str(&c.describe()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_compositions() {
        let x = Smooth::var(0);
        let f = (&x * &x).sin();
        // d/dx sin(x²) = 2x cos(x²)
        let at = [0.7];
        let d1 = f.derivative_at(&at, &[1]).unwrap();
        assert!((d1 - 1.4 * 0.49f64.cos()).abs() < 1e-14);
        let g = f.derive(&[1]).unwrap();
        assert!((g.value(&at).unwrap() - d1).abs() < 1e-14);
    }

    #[test]
    fn bump_is_flat_at_edges() {
        let b = Smooth::bump(0, 0.0, 1.0);
        assert_eq!(b.value(&[1.0]).unwrap(), 0.0);
        assert!((b.value(&[0.0]).unwrap() - (-1f64).exp()).abs() < 1e-16);
        let j = b.jet(&[0.999], 3).unwrap();
        assert!(j.max_abs() < 1e-100);
        assert_eq!(b.breakpoints(0), vec![-1.0, 0.0, 1.0]);
    }

    #[test]
    fn bump_derivative_matches_finite_difference() {
        let b = Smooth::bump(0, 0.3, 0.5);
        let h = 1e-5;
        for x in [0.0, 0.3, 0.55, 0.7] {
            let fd = (b.value(&[x + h]).unwrap() - b.value(&[x - h]).unwrap()) / (2.0 * h);
            assert!((b.derivative_at(&[x], &[1]).unwrap() - fd).abs() < 1e-8);
        }
    }

    #[test]
    fn domain_errors() {
        let x = Smooth::var(0);
        assert!(matches!(x.ln().value(&[-1.0]), Err(SmoothError::Domain(_))));
        assert!(matches!(
            (Smooth::one() / x).jet(&[0.0], 1),
            Err(SmoothError::Domain(_))
        ));
    }
}
