//! Lexer and recursive-descent parser for the expression language.
//!
//! Precedence from loosest to tightest: `+ -`, `* /`, unary sign, `^`
//! (right-associative, and its right operand may carry a sign, so `r^-2`
//! parses).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

/// A 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Span {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at {span}: {message}")]
pub struct SyntaxError {
    pub span: Span,
    pub message: String,
}

impl SyntaxError {
    pub fn line(&self) -> usize {
        self.span.line
    }

    pub fn column(&self) -> usize {
        self.span.column
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn name(self) -> &'static str {
        match self {
            BinOp::Add => "add",
            BinOp::Sub => "sub",
            BinOp::Mul => "mul",
            BinOp::Div => "div",
            BinOp::Pow => "pow",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ExprKind {
    /// Decimal literals are kept exact.
    Number(BigRational),
    Ident(String),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

fn rational_text(q: &BigRational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Prefix form, e.g. `st(div(sub(sqrt(add(1,eps)),1),eps))`.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            ExprKind::Number(q) => f.write_str(&rational_text(q)),
            ExprKind::Ident(s) => f.write_str(s),
            ExprKind::Neg(a) => write!(f, "neg({a})"),
            ExprKind::Binary(op, a, b) => write!(f, "{}({a},{b})", op.name()),
            ExprKind::Call(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    Ident(String),
    Sym(char),
    End,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(q) => write!(f, "number {}", rational_text(q)),
            Tok::Ident(s) => write!(f, "name {s:?}"),
            Tok::Sym(c) => write!(f, "{c:?}"),
            Tok::End => f.write_str("end of input"),
        }
    }
}

fn decimal(int: &str, frac: &str, exp: i64) -> BigRational {
    let digits: BigInt = format!("{int}{frac}")
        .parse()
        .unwrap_or_else(|_| BigInt::zero());
    let shift = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let p = num_traits::pow(ten, shift.unsigned_abs() as usize);
    if shift >= 0 {
        BigRational::from_integer(digits * p)
    } else {
        BigRational::new(digits, p)
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, SyntaxError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, column: col };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit()))
        {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int: String = chars[start..i].iter().collect();
            let mut frac = String::new();
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                let fs = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                frac = chars[fs..i].iter().collect();
            }
            let mut exp = 0i64;
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    let es = i + 1;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    let text: String = chars[es..j].iter().collect();
                    exp = text.parse().map_err(|_| SyntaxError {
                        span,
                        message: "exponent out of range".into(),
                    })?;
                    i = j;
                }
            }
            out.push((Tok::Num(decimal(&int, &frac, exp)), span));
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), span));
        } else if "+-*/^(),".contains(c) {
            i += 1;
            out.push((Tok::Sym(c), span));
        } else {
            return Err(SyntaxError {
                span,
                message: format!("unexpected character {c:?}"),
            });
        }
        col += i - start;
    }
    out.push((Tok::End, Span { line, column: col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError {
            span: self.span(),
            message: message.into(),
        }
    }

    fn expect(&mut self, c: char) -> Result<(), SyntaxError> {
        if *self.peek() == Tok::Sym(c) {
            self.bump();
            Ok(())
        } else {
            Err(self.error(format!("expected {c:?}, found {}", self.peek())))
        }
    }

    fn sum(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('+') => BinOp::Add,
                Tok::Sym('-') => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let (_, span) = self.bump();
            let rhs = self.product()?;
            lhs = Expr {
                kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
    }

    fn product(&mut self) -> Result<Expr, SyntaxError> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Sym('*') => BinOp::Mul,
                Tok::Sym('/') => BinOp::Div,
                _ => return Ok(lhs),
            };
            let (_, span) = self.bump();
            let rhs = self.unary()?;
            lhs = Expr {
                kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
    }

    fn unary(&mut self) -> Result<Expr, SyntaxError> {
        match self.peek() {
            Tok::Sym('-') => {
                let (_, span) = self.bump();
                let inner = self.unary()?;
                Ok(Expr {
                    kind: ExprKind::Neg(Box::new(inner)),
                    span,
                })
            }
            Tok::Sym('+') => {
                self.bump();
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Expr, SyntaxError> {
        let base = self.atom()?;
        if *self.peek() == Tok::Sym('^') {
            let (_, span) = self.bump();
            let exp = self.unary()?;
            return Ok(Expr {
                kind: ExprKind::Binary(BinOp::Pow, Box::new(base), Box::new(exp)),
                span,
            });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, SyntaxError> {
        let (tok, span) = self.bump();
        match tok {
            Tok::Num(q) => Ok(Expr {
                kind: ExprKind::Number(q),
                span,
            }),
            Tok::Ident(name) => {
                if *self.peek() != Tok::Sym('(') {
                    return Ok(Expr {
                        kind: ExprKind::Ident(name),
                        span,
                    });
                }
                self.bump();
                let mut args = Vec::new();
                if *self.peek() != Tok::Sym(')') {
                    loop {
                        args.push(self.sum()?);
                        if *self.peek() == Tok::Sym(',') {
                            self.bump();
                        } else {
                            break;
                        }
                    }
                }
                self.expect(')')?;
                Ok(Expr {
                    kind: ExprKind::Call(name, args),
                    span,
                })
            }
            Tok::Sym('(') => {
                let e = self.sum()?;
                self.expect(')')?;
                Ok(e)
            }
            other => {
                self.pos -= usize::from(other != Tok::End);
                Err(self.error(format!("expected an operand, found {other}")))
            }
        }
    }
}

/// Arity of the built-in functions; `None` for unknown names.
pub fn arity(name: &str) -> Option<usize> {
    match name {
        "sqrt" | "st" | "v" | "abs" | "sin" | "cos" | "exp" | "log" | "classify" | "O" => Some(1),
        "root" => Some(2),
        _ => None,
    }
}

fn check_calls(e: &Expr) -> Result<(), SyntaxError> {
    match &e.kind {
        ExprKind::Number(_) | ExprKind::Ident(_) => Ok(()),
        ExprKind::Neg(a) => check_calls(a),
        ExprKind::Binary(_, a, b) => {
            check_calls(a)?;
            check_calls(b)
        }
        ExprKind::Call(name, args) => {
            let want = arity(name).ok_or_else(|| SyntaxError {
                span: e.span,
                message: format!("unknown function {name:?}"),
            })?;
            if args.len() != want {
                return Err(SyntaxError {
                    span: e.span,
                    message: format!("{name} takes {want} argument(s), found {}", args.len()),
                });
            }
            args.iter().try_for_each(check_calls)
        }
    }
}

pub fn parse(text: &str) -> Result<Expr, SyntaxError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let e = p.sum()?;
    if *p.peek() != Tok::End {
        return Err(p.error(format!("unexpected {}", p.peek())));
    }
    check_calls(&e)?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_structure() {
        let e = parse("st((sqrt(1+eps)-1)/eps)").unwrap();
        assert_eq!(e.to_string(), "st(div(sub(sqrt(add(1,eps)),1),eps))");
        assert_eq!(
            parse("3*r^-2 + 1").unwrap().to_string(),
            "add(mul(3,pow(r,neg(2))),1)"
        );
        assert_eq!(parse("2^3^2").unwrap().to_string(), "pow(2,pow(3,2))");
        assert_eq!(parse("-x^2").unwrap().to_string(), "neg(pow(x,2))");
        assert_eq!(parse("0.25e1").unwrap().to_string(), "5/2");
    }

    #[test]
    fn positioned_errors() {
        let e = parse("st(").unwrap_err();
        assert_eq!((e.line(), e.column()), (1, 4));
        let e = parse("1 +\n  * 2").unwrap_err();
        assert_eq!((e.line(), e.column()), (2, 3));
        assert_eq!(parse("1 $ 2").unwrap_err().column(), 3);
        assert!(parse("foo(1)").is_err());
        assert!(parse("root(2)").is_err());
        assert!(parse("(1").is_err());
    }
}
