//! Text forms for asymptotic functions, test functions and distributions.
//!
//! * fn-spec: an expression in `eps` and `x`, `x1`, …, `x9` whose powers of
//!   `eps` become the series exponents, e.g. `sin(x) + eps*x^2 + exp(-x^2)/eps`.
//! * bump-spec: `gauss-bump` or `bump(c1, …, cd, r)`.
//! * dist-spec: `delta`, `delta(p1, …)`, `ddelta(a1, …)`, `ddelta(a1, …; p1, …)`,
//!   `heaviside`, `heaviside(axis)` or `f:<expression in x>`.

use std::collections::BTreeMap;

use asym_core::asym::{AsymptoticFunction, Domain};
use asym_core::lc::{Exponent, ExtExp};
use asym_core::mollify::{DistributionSpec, TestFunction};
use asym_core::smooth::Smooth;
use num_traits::ToPrimitive;

use crate::eval::{exponent, is_rho, positive_index, EvalError};
use crate::syntax::{parse, BinOp, Expr, ExprKind, Span};
use crate::CliError;

type Terms = BTreeMap<Exponent, Smooth>;

/// Index of a coordinate name: `x` and `x1` are axis 0.
fn axis_of(name: &str) -> Option<usize> {
    if name == "x" {
        return Some(0);
    }
    let k: usize = name.strip_prefix('x')?.parse().ok()?;
    (1..=9).contains(&k).then(|| k - 1)
}

fn single(q: Exponent, s: Smooth) -> Terms {
    let mut t = Terms::new();
    if !s.is_zero_const() {
        t.insert(q, s);
    }
    t
}

fn combine(a: &Terms, b: &Terms, sign: f64) -> Terms {
    let mut out = a.clone();
    for (q, s) in b {
        let s = if sign < 0.0 { -s } else { s.clone() };
        let sum = match out.remove(q) {
            Some(prev) => &prev + &s,
            None => s,
        };
        if !sum.is_zero_const() {
            out.insert(*q, sum);
        }
    }
    out
}

struct FnEval {
    cap: ExtExp,
    /// Smallest `O(r^h)` seen.
    horizon: ExtExp,
}

impl FnEval {
    fn mul(&self, a: &Terms, b: &Terms) -> Terms {
        let mut out = Terms::new();
        for (p, s) in a {
            for (q, t) in b {
                if !self.cap.above(p + q) {
                    continue;
                }
                let prod = s * t;
                let sum = match out.remove(&(p + q)) {
                    Some(prev) => &prev + &prod,
                    None => prod,
                };
                if !sum.is_zero_const() {
                    out.insert(p + q, sum);
                }
            }
        }
        out
    }

    /// The only term, when there is exactly one (zero counts as `0·ρ⁰`).
    fn monomial(t: &Terms, span: Span) -> Result<(Exponent, Smooth), EvalError> {
        match t.len() {
            0 => Ok((Exponent::from_integer(0), Smooth::zero())),
            1 => {
                let (q, s) = t.iter().next().expect("one term");
                Ok((*q, s.clone()))
            }
            _ => Err(EvalError::domain(
                span,
                "operation needs a single power of eps",
            )),
        }
    }

    fn standard(t: &Terms, span: Span) -> Result<Smooth, EvalError> {
        match Self::monomial(t, span)? {
            (q, s) if q == Exponent::from_integer(0) || s.is_zero_const() => Ok(s),
            _ => Err(EvalError::domain(
                span,
                "function applies only to eps-free arguments",
            )),
        }
    }

    fn eval(&mut self, e: &Expr) -> Result<Terms, EvalError> {
        let zero = Exponent::from_integer(0);
        Ok(match &e.kind {
            ExprKind::Number(q) => single(zero, Smooth::constant(q.to_f64().unwrap_or(f64::NAN))),
            ExprKind::Ident(name) if is_rho(name) => {
                single(Exponent::from_integer(1), Smooth::one())
            }
            ExprKind::Ident(name) => match axis_of(name) {
                Some(i) => single(zero, Smooth::var(i)),
                None => {
                    return Err(EvalError::Name {
                        span: e.span,
                        name: name.clone(),
                    })
                }
            },
            ExprKind::Neg(a) => combine(&Terms::new(), &self.eval(a)?, -1.0),
            ExprKind::Binary(BinOp::Pow, a, b) => {
                let q = exponent(b)?;
                if let ExprKind::Ident(name) = &a.kind {
                    if is_rho(name) {
                        return Ok(single(q, Smooth::one()));
                    }
                }
                let base = self.eval(a)?;
                if q.is_integer() && *q.numer() >= 0 {
                    let mut acc = single(zero, Smooth::one());
                    for _ in 0..*q.numer() {
                        acc = self.mul(&acc, &base);
                    }
                    acc
                } else {
                    let (p, s) = Self::monomial(&base, e.span)?;
                    single(p * q, s.powf(q.to_f64().unwrap_or(f64::NAN)))
                }
            }
            ExprKind::Binary(op, a, b) => {
                let x = self.eval(a)?;
                let y = self.eval(b)?;
                match op {
                    BinOp::Add => combine(&x, &y, 1.0),
                    BinOp::Sub => combine(&x, &y, -1.0),
                    BinOp::Mul => self.mul(&x, &y),
                    BinOp::Div => {
                        let (q, s) = Self::monomial(&y, b.span)?;
                        if s.as_const() == Some(0.0) {
                            return Err(EvalError::domain(e.span, "division by zero"));
                        }
                        x.iter()
                            .map(|(p, t)| (p - q, t / &s))
                            .filter(|(p, _)| self.cap.above(*p))
                            .collect()
                    }
                    BinOp::Pow => unreachable!("handled above"),
                }
            }
            ExprKind::Call(name, args) => {
                if name == "O" {
                    let t = self.eval(&args[0])?;
                    let (h, s) = Self::monomial(&t, e.span)?;
                    if s.as_const() != Some(1.0) {
                        return Err(EvalError::domain(
                            e.span,
                            "O(...) takes a single power of r",
                        ));
                    }
                    self.horizon = self.horizon.min(ExtExp::Finite(h));
                    return Ok(Terms::new());
                }
                if name == "root" {
                    let n = positive_index(&args[0])?;
                    let s = Self::standard(&self.eval(&args[1])?, e.span)?;
                    return Ok(single(zero, s.powf(1.0 / n as f64)));
                }
                let s = Self::standard(&self.eval(&args[0])?, e.span)?;
                single(
                    zero,
                    match name.as_str() {
                        "sqrt" => s.sqrt(),
                        "sin" => s.sin(),
                        "cos" => s.cos(),
                        "exp" => s.exp(),
                        "log" => s.ln(),
                        other => {
                            return Err(EvalError::domain(
                                e.span,
                                format!("{other} is not available for functions"),
                            ))
                        }
                    },
                )
            }
        })
    }
}

fn max_axis(e: &Expr) -> usize {
    match &e.kind {
        ExprKind::Ident(n) => axis_of(n).map_or(0, |i| i + 1),
        ExprKind::Number(_) => 0,
        ExprKind::Neg(a) => max_axis(a),
        ExprKind::Binary(_, a, b) => max_axis(a).max(max_axis(b)),
        ExprKind::Call(_, args) => args.iter().map(max_axis).max().unwrap_or(0),
    }
}

/// Number of coordinates an fn-spec mentions.
pub fn spec_dim(text: &str) -> Result<usize, CliError> {
    Ok(max_axis(&parse(text)?))
}

/// Parses an fn-spec into an asymptotic function on `domain`.
pub fn parse_function(
    text: &str,
    domain: Domain,
    cap: ExtExp,
) -> Result<AsymptoticFunction, CliError> {
    let e = parse(text)?;
    let mut ev = FnEval { cap, horizon: cap };
    let terms = ev.eval(&e)?;
    AsymptoticFunction::from_terms(terms, ev.horizon, domain)
        .map_err(|err| CliError::Domain(err.to_string()))
}

/// Parses an eps-free expression in `x` into a smooth function.
pub fn parse_smooth(text: &str) -> Result<Smooth, CliError> {
    let e = parse(text)?;
    let mut ev = FnEval {
        cap: ExtExp::Infinity,
        horizon: ExtExp::Infinity,
    };
    let t = ev.eval(&e)?;
    Ok(FnEval::standard(&t, e.span)?)
}

fn spec_error(message: impl Into<String>) -> CliError {
    CliError::Spec(message.into())
}

/// `name` or `name(a, b; c, d)` with numeric arguments.
fn call_form(text: &str) -> Result<(String, Vec<Vec<f64>>), CliError> {
    let t = text.trim();
    let Some(open) = t.find('(') else {
        return Ok((t.to_string(), Vec::new()));
    };
    let inner = t[open + 1..]
        .strip_suffix(')')
        .ok_or_else(|| spec_error(format!("missing ')' in {t:?}")))?;
    let groups = inner
        .split(';')
        .map(|g| {
            g.split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| spec_error(format!("expected a number, found {:?}", v.trim())))
                })
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((t[..open].trim().to_string(), groups))
}

/// Test function from a bump-spec; `dim` fixes the dimension of `gauss-bump`.
pub fn parse_bump(text: &str, dim: usize) -> Result<TestFunction, CliError> {
    let (name, groups) = call_form(text)?;
    match (name.as_str(), groups.as_slice()) {
        ("gauss-bump", []) => Ok(TestFunction::bump(
            &vec![0.0; dim.max(1)],
            &vec![1.0; dim.max(1)],
        )),
        ("bump", [args]) if args.len() >= 2 => {
            let (center, r) = args.split_at(args.len() - 1);
            if !(r[0] > 0.0) {
                return Err(spec_error("bump radius must be positive"));
            }
            Ok(TestFunction::bump(center, &vec![r[0]; center.len()]))
        }
        _ => Err(spec_error(format!(
            "unknown test function {text:?}; use gauss-bump or bump(c1,...,r)"
        ))),
    }
}

/// Distribution from a dist-spec in dimension `dim`.
pub fn parse_distribution(text: &str, dim: usize) -> Result<DistributionSpec, CliError> {
    if let Some(body) = text.trim().strip_prefix("f:") {
        return Ok(DistributionSpec::LocallyIntegrable(parse_smooth(body)?));
    }
    let (name, groups) = call_form(text)?;
    let origin = vec![0.0; dim];
    let point = |p: &[f64]| -> Result<Vec<f64>, CliError> {
        if p.len() != dim {
            return Err(spec_error(format!("point needs {dim} coordinates")));
        }
        Ok(p.to_vec())
    };
    match (name.as_str(), groups.as_slice()) {
        ("delta", []) => Ok(DistributionSpec::DeltaAt(origin)),
        ("delta", [p]) => Ok(DistributionSpec::DeltaAt(point(p)?)),
        ("ddelta", [a]) | ("ddelta", [a, _]) => {
            let p = if groups.len() == 2 {
                point(&groups[1])?
            } else {
                origin
            };
            if a.len() != dim || a.iter().any(|v| *v < 0.0 || v.fract() != 0.0 || *v > 255.0) {
                return Err(spec_error(
                    "derivative orders must be small nonnegative integers, one per axis",
                ));
            }
            Ok(DistributionSpec::DerivativeOfDelta {
                point: p,
                alpha: a.iter().map(|v| *v as u8).collect(),
            })
        }
        ("heaviside", []) => Ok(DistributionSpec::Heaviside { axis: 0 }),
        ("heaviside", [a])
            if a.len() == 1 && a[0] >= 1.0 && a[0].fract() == 0.0 && (a[0] as usize) <= dim =>
        {
            Ok(DistributionSpec::Heaviside {
                axis: a[0] as usize - 1,
            })
        }
        _ => Err(spec_error(format!("unknown distribution {text:?}"))),
    }
}

/// `lo,hi[;lo,hi…]` as a box.
pub fn parse_box(text: &str) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for part in text.split(';') {
        let v: Vec<f64> = part
            .split(',')
            .map(|s| {
                s.trim()
                    .parse::<f64>()
                    .map_err(|_| spec_error(format!("expected a number, found {:?}", s.trim())))
            })
            .collect::<Result<_, _>>()?;
        if v.len() != 2 || !(v[0] < v[1]) {
            return Err(spec_error(format!(
                "expected lo,hi with lo < hi, found {part:?}"
            )));
        }
        lo.push(v[0]);
        hi.push(v[1]);
    }
    Ok((lo, hi))
}
