//! Polynomials in `x` with Levi-Civita coefficients, for `asym roots`.

use asym_core::closure::{inverse_to, poly_roots, LcPolynomial, PolyRoot};
use asym_core::lc::{ExtExp, LcComplex};
use num_complex::Complex64;

use crate::eval::{eval_number, exponent, EvalError};
use crate::syntax::{parse, BinOp, Expr, ExprKind};
use crate::CliError;

fn mentions_x(e: &Expr) -> bool {
    match &e.kind {
        ExprKind::Ident(n) => n == "x",
        ExprKind::Number(_) => false,
        ExprKind::Neg(a) => mentions_x(a),
        ExprKind::Binary(_, a, b) => mentions_x(a) || mentions_x(b),
        ExprKind::Call(_, args) => args.iter().any(mentions_x),
    }
}

fn add(a: &[LcComplex], b: &[LcComplex], sign: f64) -> Vec<LcComplex> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(LcComplex::zero);
            let y = b.get(i).cloned().unwrap_or_else(LcComplex::zero);
            if sign < 0.0 {
                &x - &y
            } else {
                &x + &y
            }
        })
        .collect()
}

fn mul(a: &[LcComplex], b: &[LcComplex]) -> Vec<LcComplex> {
    let mut out = vec![LcComplex::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

fn coeffs(e: &Expr, cap: ExtExp) -> Result<Vec<LcComplex>, EvalError> {
    if !mentions_x(e) {
        return Ok(vec![eval_number::<Complex64>(e, cap)?]);
    }
    Ok(match &e.kind {
        ExprKind::Ident(_) => vec![LcComplex::zero(), LcComplex::one()],
        ExprKind::Neg(a) => add(&[], &coeffs(a, cap)?, -1.0),
        ExprKind::Binary(BinOp::Add, a, b) => add(&coeffs(a, cap)?, &coeffs(b, cap)?, 1.0),
        ExprKind::Binary(BinOp::Sub, a, b) => add(&coeffs(a, cap)?, &coeffs(b, cap)?, -1.0),
        ExprKind::Binary(BinOp::Mul, a, b) => mul(&coeffs(a, cap)?, &coeffs(b, cap)?),
        ExprKind::Binary(BinOp::Div, a, b) if !mentions_x(b) => {
            let d = eval_number::<Complex64>(b, cap)?;
            if d.is_zero() {
                return Err(EvalError::domain(b.span, "division by zero"));
            }
            let inv =
                inverse_to(&d, cap).map_err(|err| EvalError::domain(b.span, err.to_string()))?;
            coeffs(a, cap)?.iter().map(|c| c * &inv).collect()
        }
        ExprKind::Binary(BinOp::Pow, a, b) => {
            let q = exponent(b)?;
            if !q.is_integer() || *q.numer() < 0 {
                return Err(EvalError::domain(
                    b.span,
                    "powers of x must be nonnegative integers",
                ));
            }
            let base = coeffs(a, cap)?;
            (0..*q.numer()).fold(vec![LcComplex::one()], |acc, _| mul(&acc, &base))
        }
        _ => return Err(EvalError::domain(e.span, "not a polynomial in x")),
    })
}

/// Parses `text` as a polynomial in `x` and lifts all roots to `v(p(root)) ≥ horizon`.
pub fn roots(text: &str, horizon: ExtExp) -> Result<Vec<PolyRoot>, CliError> {
    let e = parse(text)?;
    let target = horizon
        .finite()
        .ok_or_else(|| CliError::Domain("root lifting needs a finite horizon".into()))?;
    // coefficients carry a margin so the lifted roots are not starved
    let cap = horizon + asym_core::lc::Exponent::from_integer(8);
    let p = LcPolynomial::new(coeffs(&e, cap)?);
    if p.degree() == 0 {
        return Err(CliError::Domain("expression is constant in x".into()));
    }
    poly_roots(&p, target).map_err(|err| CliError::Domain(err.to_string()))
}
