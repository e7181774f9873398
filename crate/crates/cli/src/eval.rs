//! Evaluation of expressions as Levi-Civita numbers.

use std::cmp::Ordering;
use std::fmt;

use asym_core::closure::{cos_to, exp_to, inverse_to, ln_to, nth_root_to, sin_to};
use asym_core::lc::{
    rho_power_text, Backend, Exponent, ExtExp, ExtendedScalar, LcError, LcNumber, Magnitude,
    Scalar, ScalarText,
};
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::syntax::{BinOp, Expr, ExprKind, Span};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("{span}: unknown name {name:?}")]
    Name { span: Span, name: String },
    #[error("{span}: {message}")]
    Domain { span: Span, message: String },
}

impl EvalError {
    pub(crate) fn domain(span: Span, message: impl Into<String>) -> Self {
        EvalError::Domain {
            span,
            message: message.into(),
        }
    }

    fn lc(span: Span, e: LcError) -> Self {
        EvalError::domain(span, e.to_string())
    }
}

/// Evaluation settings shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Env {
    /// Truncation cap for inverses, roots and elementary functions.
    pub horizon: ExtExp,
    pub backend: Backend,
}

impl Default for Env {
    fn default() -> Self {
        Env {
            horizon: asym_core::lc::default_horizon(),
            backend: Backend::ExactRational,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value<C> {
    Number(LcNumber<C>),
    Standard(ExtendedScalar<C>),
    Valuation(ExtExp),
    Class(Magnitude),
}

/// Series text with an `O(r^h)` tail when the number is truncated.
pub fn serialize<C: Scalar + ScalarText>(x: &LcNumber<C>) -> String {
    match x.horizon() {
        ExtExp::Infinity => x.to_text(),
        ExtExp::Finite(h) if x.is_zero() => format!("O({})", rho_power_text(h)),
        ExtExp::Finite(h) => format!("{} + O({})", x.to_text(), rho_power_text(h)),
    }
}

impl<C: Scalar + ScalarText> fmt::Display for Value<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Number(x) => f.write_str(&serialize(x)),
            Value::Standard(s) => write!(f, "{s}"),
            Value::Valuation(v) => write!(f, "{v}"),
            Value::Class(m) => write!(f, "{m}"),
        }
    }
}

/// A value in whichever backend was selected.
#[derive(Debug, Clone, PartialEq)]
pub enum AnyValue {
    Rational(Value<BigRational>),
    Float(Value<Complex64>),
}

impl fmt::Display for AnyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnyValue::Rational(v) => v.fmt(f),
            AnyValue::Float(v) => v.fmt(f),
        }
    }
}

impl AnyValue {
    /// Tag used by the JSON output.
    pub fn kind(&self) -> &'static str {
        let tag = |k: u8| match k {
            0 => "number",
            1 => "standard_part",
            2 => "valuation",
            _ => "classification",
        };
        fn idx<C>(v: &Value<C>) -> u8 {
            match v {
                Value::Number(_) => 0,
                Value::Standard(_) => 1,
                Value::Valuation(_) => 2,
                Value::Class(_) => 3,
            }
        }
        match self {
            AnyValue::Rational(v) => tag(idx(v)),
            AnyValue::Float(v) => tag(idx(v)),
        }
    }
}

pub fn eval(e: &Expr, env: &Env) -> Result<AnyValue, EvalError> {
    Ok(match env.backend {
        Backend::ExactRational => AnyValue::Rational(eval_value(e, env.horizon)?),
        Backend::ComplexFloat => AnyValue::Float(eval_value(e, env.horizon)?),
    })
}

pub fn is_rho(name: &str) -> bool {
    matches!(name, "eps" | "r" | "rho")
}

/// Evaluates an exponent: an exact standard rational.
pub fn exponent(e: &Expr) -> Result<Exponent, EvalError> {
    let x: LcNumber<BigRational> = eval_number(e, ExtExp::Infinity)?;
    if !x.is_exact() || x.terms().any(|(q, _)| q != Exponent::from_integer(0)) {
        return Err(EvalError::domain(
            e.span,
            "exponent must be an exact standard rational",
        ));
    }
    let c = x.coeff(Exponent::from_integer(0));
    match (c.numer().to_i64(), c.denom().to_i64()) {
        (Some(n), Some(d)) => Ok(Rational64::new(n, d)),
        _ => Err(EvalError::domain(e.span, "exponent out of range")),
    }
}

/// Evaluates an expression that must produce a number.
pub fn eval_number<C: Scalar>(e: &Expr, cap: ExtExp) -> Result<LcNumber<C>, EvalError> {
    match eval_value(e, cap)? {
        Value::Number(x) => Ok(x),
        Value::Standard(ExtendedScalar::Finite(c)) => Ok(LcNumber::constant(c)),
        Value::Standard(_) => Err(EvalError::domain(e.span, "the standard part is infinite")),
        _ => Err(EvalError::domain(e.span, "expected a number")),
    }
}

pub(crate) fn positive_index(e: &Expr) -> Result<u32, EvalError> {
    let q = exponent(e)?;
    if !q.is_integer() || *q.numer() < 1 || *q.numer() > u32::MAX as i64 {
        return Err(EvalError::domain(e.span, "expected a positive integer"));
    }
    Ok(*q.numer() as u32)
}

fn power<C: Scalar>(
    x: &LcNumber<C>,
    q: Exponent,
    cap: ExtExp,
    span: Span,
) -> Result<LcNumber<C>, EvalError> {
    let root = if q.is_integer() {
        x.clone()
    } else {
        nth_root_to(x, *q.denom() as u32, cap).map_err(|e| EvalError::lc(span, e))?
    };
    let n = *q.numer();
    let p = root.powi(n.unsigned_abs() as u32);
    if n >= 0 {
        Ok(p)
    } else {
        inverse_to(&p, cap).map_err(|e| EvalError::lc(span, e))
    }
}

fn eval_value<C: Scalar>(e: &Expr, cap: ExtExp) -> Result<Value<C>, EvalError> {
    let lc = |err: LcError| EvalError::lc(e.span, err);
    Ok(match &e.kind {
        ExprKind::Number(q) => Value::Number(LcNumber::constant(C::from_ratio(q))),
        ExprKind::Ident(name) if is_rho(name) => Value::Number(LcNumber::rho()),
        ExprKind::Ident(name) => {
            return Err(EvalError::Name {
                span: e.span,
                name: name.clone(),
            })
        }
        ExprKind::Neg(a) => Value::Number(-&eval_number::<C>(a, cap)?),
        ExprKind::Binary(BinOp::Pow, a, b) => {
            let q = exponent(b)?;
            match &a.kind {
                ExprKind::Ident(name) if is_rho(name) => {
                    Value::Number(LcNumber::monomial(C::one(), q))
                }
                _ => Value::Number(power(&eval_number::<C>(a, cap)?, q, cap, e.span)?),
            }
        }
        ExprKind::Binary(op, a, b) => {
            let x = eval_number::<C>(a, cap)?;
            let y = eval_number::<C>(b, cap)?;
            Value::Number(match op {
                BinOp::Add => &x + &y,
                BinOp::Sub => &x - &y,
                BinOp::Mul => &x * &y,
                BinOp::Div => {
                    if y.is_zero() {
                        return Err(lc(LcError::DivisionByZero));
                    }
                    &x * &inverse_to(&y, cap).map_err(lc)?
                }
                BinOp::Pow => unreachable!("handled above"),
            })
        }
        ExprKind::Call(name, args) => {
            let arg = |i: usize| eval_number::<C>(&args[i], cap);
            match name.as_str() {
                "sqrt" => Value::Number(nth_root_to(&arg(0)?, 2, cap).map_err(lc)?),
                "root" => Value::Number(
                    nth_root_to(&arg(1)?, positive_index(&args[0])?, cap).map_err(lc)?,
                ),
                "st" => Value::Standard(arg(0)?.standard_part()),
                "v" => Value::Valuation(arg(0)?.valuation()),
                "classify" => Value::Class(arg(0)?.classify()),
                "abs" => {
                    let x = arg(0)?;
                    Value::Number(if x.signum().map_err(lc)? == Ordering::Less {
                        -&x
                    } else {
                        x
                    })
                }
                "sin" => Value::Number(sin_to(&arg(0)?, cap).map_err(lc)?),
                "cos" => Value::Number(cos_to(&arg(0)?, cap).map_err(lc)?),
                "exp" => Value::Number(exp_to(&arg(0)?, cap).map_err(lc)?),
                "log" => Value::Number(ln_to(&arg(0)?, cap).map_err(lc)?),
                "O" => {
                    let x = arg(0)?;
                    match (x.len(), x.leading()) {
                        (1, Some((h, _))) if x.is_exact() => {
                            Value::Number(LcNumber::zero().with_horizon(ExtExp::Finite(h)))
                        }
                        _ => {
                            return Err(EvalError::domain(
                                e.span,
                                "O(...) takes a single power of r",
                            ))
                        }
                    }
                }
                other => unreachable!("arity check admits only known names, got {other}"),
            }
        }
    })
}

/// Parses series text back into a number, exactly on the rational backend.
pub fn deserialize<C: Scalar>(text: &str) -> Result<LcNumber<C>, crate::CliError> {
    let e = crate::syntax::parse(text)?;
    Ok(eval_number(&e, ExtExp::Infinity)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;

    fn run(s: &str) -> String {
        eval(&parse(s).unwrap(), &Env::default())
            .unwrap()
            .to_string()
    }

    #[test]
    fn worked_values() {
        assert_eq!(run("st((sqrt(1+eps)-1)/eps)"), "1/2");
        assert_eq!(run("v(3*eps^2)"), "2");
        assert_eq!(run("classify(1/eps)"), "Infinite");
        assert_eq!(run("3*r^-2 + 1"), "3*r^-2 + 1");
        assert_eq!(run("st(1/eps)"), "+inf");
        assert_eq!(run("abs(-2*r + r^2)"), "2*r - r^2");
        assert_eq!(run("root(3, 8*r^3)"), "2*r");
        assert_eq!(run("v(0)"), "inf");
    }

    #[test]
    fn truncation_is_shown() {
        let env = Env {
            horizon: ExtExp::int(3),
            backend: Backend::ExactRational,
        };
        let v = eval(&parse("1/(1-eps)").unwrap(), &env).unwrap();
        assert_eq!(v.to_string(), "1 + r + r^2 + O(r^3)");
        let back: LcNumber<BigRational> = deserialize(&v.to_string()).unwrap();
        assert_eq!(AnyValue::Rational(Value::Number(back)), v);
    }

    #[test]
    fn domain_errors() {
        let env = Env::default();
        assert!(matches!(
            eval(&parse("1/0").unwrap(), &env),
            Err(EvalError::Domain { .. })
        ));
        assert!(matches!(
            eval(&parse("x + 1").unwrap(), &env),
            Err(EvalError::Name { .. })
        ));
        assert!(matches!(
            eval(&parse("sqrt(2)").unwrap(), &env),
            Err(EvalError::Domain { .. })
        ));
        let float = Env {
            backend: Backend::ComplexFloat,
            ..env
        };
        assert_eq!(
            eval(&parse("sqrt(4+4*eps)").unwrap(), &float).map(|v| v.kind()),
            Ok("number")
        );
    }
}
