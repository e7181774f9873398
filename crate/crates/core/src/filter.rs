//! Sequences over `N` modulo the Fréchet filter of cofinite sets.
//!
//! Answers are three-valued. Wherever a free ultrafilter would have to pick
//! a side, the sandbox says `Undecided` and records why.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FilterError {
    #[error("value {value} at index {index} is not in the set")]
    Domain { index: usize, value: String },
    #[error("cannot parse sequence at column {column}: {message}")]
    Parse { column: usize, message: String },
}

/// Behaviour of a sequence after its finite prefix. Indices start at 1.
#[derive(Debug, Clone, PartialEq)]
pub enum Tail {
    Constant(f64),
    /// `a_i = pattern[(i − 1) mod p]`.
    Periodic(Vec<f64>),
    ClosedForm(ClosedForm),
    /// Nothing is known past the prefix.
    Undetermined,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClosedForm {
    /// `a_i = i`.
    Identity,
    /// `a_i = 1/i`.
    Reciprocal,
    /// `a_i = on_prime` for prime `i`, else `otherwise`. With
    /// `density_known` the generator asserts that the primes have density
    /// zero, which picks `otherwise` as the typical value.
    PrimeIndicator {
        on_prime: f64,
        otherwise: f64,
        density_known: bool,
    },
}

/// A sequence `⟨a_i⟩` given by a finite prefix overriding a tail rule.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterSeq {
    pub prefix: Vec<f64>,
    pub tail: Tail,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tri {
    True,
    False,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reason {
    /// Both the set and its complement are infinite; an ultrafilter would
    /// decide.
    UltrafilterDependent,
    /// The generator says nothing past its prefix.
    NoTailKnowledge,
    /// Decided by the density declared by the generator rather than by a
    /// cofinite set.
    DensityOne,
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reason::UltrafilterDependent => "ultrafilter-dependent",
            Reason::NoTailKnowledge => "no tail knowledge",
            Reason::DensityOne => "decided by declared density",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Verdict {
    pub answer: Tri,
    pub reason: Option<Reason>,
}

impl Verdict {
    fn yes() -> Self {
        Verdict {
            answer: Tri::True,
            reason: None,
        }
    }

    fn no() -> Self {
        Verdict {
            answer: Tri::False,
            reason: None,
        }
    }

    fn no_because(r: Reason) -> Self {
        Verdict {
            answer: Tri::False,
            reason: Some(r),
        }
    }

    fn undecided(r: Reason) -> Self {
        Verdict {
            answer: Tri::Undecided,
            reason: Some(r),
        }
    }

    fn from_bool(b: bool) -> Self {
        if b {
            Verdict::yes()
        } else {
            Verdict::no()
        }
    }

    pub fn is_decided(&self) -> bool {
        self.answer != Tri::Undecided
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = match self.answer {
            Tri::True => "true",
            Tri::False => "false",
            Tri::Undecided => "undecided",
        };
        match self.reason {
            Some(r) => write!(f, "{a} ({r})"),
            None => f.write_str(a),
        }
    }
}

/// Tail rule in a form that makes pairwise comparison easy.
enum Shape<'a> {
    /// Finitely many values, each repeating along residue classes.
    Cyclic(&'a [f64]),
    /// Each value is taken at most once.
    Injective(&'a ClosedForm),
    Prime {
        p: f64,
        o: f64,
    },
    Unknown,
}

fn shape(t: &Tail) -> Shape<'_> {
    match t {
        Tail::Constant(c) => Shape::Cyclic(std::slice::from_ref(c)),
        Tail::Periodic(p) => Shape::Cyclic(p),
        Tail::ClosedForm(c @ (ClosedForm::Identity | ClosedForm::Reciprocal)) => {
            Shape::Injective(c)
        }
        Tail::ClosedForm(ClosedForm::PrimeIndicator {
            on_prime,
            otherwise,
            ..
        }) => {
            if on_prime == otherwise {
                Shape::Cyclic(std::slice::from_ref(otherwise))
            } else {
                Shape::Prime {
                    p: *on_prime,
                    o: *otherwise,
                }
            }
        }
        Tail::Undetermined => Shape::Unknown,
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Agreement and disagreement of two sequences along residue classes:
/// `(agree somewhere, disagree somewhere)` over one common period.
fn cyclic_overlap(a: &[f64], b: &[f64]) -> (bool, bool) {
    let l = a.len() / gcd(a.len(), b.len()) * b.len();
    let mut agree = false;
    let mut differ = false;
    for i in 0..l {
        if a[i % a.len()] == b[i % b.len()] {
            agree = true;
        } else {
            differ = true;
        }
    }
    (agree, differ)
}

/// Turns "is agreement cofinite" into a verdict given which of agreement and
/// disagreement are infinite.
fn from_sets(agree_infinite: bool, differ_infinite: bool) -> Verdict {
    match (agree_infinite, differ_infinite) {
        (_, false) => Verdict::yes(),
        (true, true) => Verdict::no_because(Reason::UltrafilterDependent),
        (false, true) => Verdict::no(),
    }
}

impl FilterSeq {
    pub fn new(prefix: Vec<f64>, tail: Tail) -> Self {
        FilterSeq { prefix, tail }
    }

    pub fn eventually_constant(prefix: Vec<f64>, value: f64) -> Self {
        FilterSeq::new(prefix, Tail::Constant(value))
    }

    pub fn periodic(pattern: Vec<f64>) -> Self {
        FilterSeq::new(Vec::new(), Tail::Periodic(pattern))
    }

    pub fn closed_form(c: ClosedForm) -> Self {
        FilterSeq::new(Vec::new(), Tail::ClosedForm(c))
    }

    pub fn sampled(prefix: Vec<f64>) -> Self {
        FilterSeq::new(prefix, Tail::Undetermined)
    }

    /// `a_i` for `i ≥ 1`; `None` past the prefix of an undetermined tail.
    pub fn value(&self, i: usize) -> Option<f64> {
        assert!(i >= 1, "indices start at 1");
        if let Some(v) = self.prefix.get(i - 1) {
            return Some(*v);
        }
        match &self.tail {
            Tail::Constant(c) => Some(*c),
            Tail::Periodic(p) => Some(p[(i - 1) % p.len()]),
            Tail::ClosedForm(ClosedForm::Identity) => Some(i as f64),
            Tail::ClosedForm(ClosedForm::Reciprocal) => Some(1.0 / i as f64),
            Tail::ClosedForm(ClosedForm::PrimeIndicator {
                on_prime,
                otherwise,
                ..
            }) => Some(if is_prime(i) { *on_prime } else { *otherwise }),
            Tail::Undetermined => None,
        }
    }

    /// The same sequence with another finite prefix.
    pub fn with_prefix(&self, prefix: Vec<f64>) -> Self {
        FilterSeq {
            prefix,
            tail: self.tail.clone(),
        }
    }

    /// `{i : a_i > ε}` is cofinite.
    pub fn exceeds(&self, eps: f64) -> Verdict {
        self.eventually(|v| v > eps, Some(eps))
    }

    /// `{i : |a_i| < ε}` is cofinite for every `ε > 0`.
    pub fn is_infinitesimal(&self) -> Verdict {
        match &self.tail {
            Tail::ClosedForm(ClosedForm::Reciprocal) => Verdict::yes(),
            Tail::ClosedForm(ClosedForm::Identity) => Verdict::no(),
            _ => self.eventually(|v| v == 0.0, None),
        }
    }

    fn eventually(&self, pred: impl Fn(f64) -> bool, threshold: Option<f64>) -> Verdict {
        match &self.tail {
            Tail::Constant(c) => Verdict::from_bool(pred(*c)),
            Tail::Periodic(p) => {
                let hits = p.iter().filter(|v| pred(**v)).count();
                if hits == p.len() {
                    Verdict::yes()
                } else if hits == 0 {
                    Verdict::no()
                } else {
                    Verdict::no_because(Reason::UltrafilterDependent)
                }
            }
            Tail::ClosedForm(ClosedForm::Identity) => match threshold {
                // i > ε for all large i
                Some(_) => Verdict::yes(),
                None => Verdict::no(),
            },
            Tail::ClosedForm(ClosedForm::Reciprocal) => match threshold {
                Some(eps) => Verdict::from_bool(eps < 0.0),
                None => Verdict::no(),
            },
            Tail::ClosedForm(ClosedForm::PrimeIndicator {
                on_prime,
                otherwise,
                ..
            }) => match (pred(*on_prime), pred(*otherwise)) {
                (true, true) => Verdict::yes(),
                (false, false) => Verdict::no(),
                _ => Verdict::no_because(Reason::UltrafilterDependent),
            },
            Tail::Undetermined => Verdict::undecided(Reason::NoTailKnowledge),
        }
    }
}

/// The infinitely large natural number `ν = ⟨1, 2, 3, …⟩`.
pub fn canonical_nu() -> FilterSeq {
    FilterSeq::closed_form(ClosedForm::Identity)
}

/// `a_i = b_i` almost everywhere. `False` means the disagreement set is
/// infinite; the prefix never matters.
pub fn ae_equal(a: &FilterSeq, b: &FilterSeq) -> Verdict {
    match (shape(&a.tail), shape(&b.tail)) {
        (Shape::Unknown, _) | (_, Shape::Unknown) => Verdict::undecided(Reason::NoTailKnowledge),
        (Shape::Cyclic(x), Shape::Cyclic(y)) => {
            let (agree, differ) = cyclic_overlap(x, y);
            from_sets(agree, differ)
        }
        (Shape::Injective(x), Shape::Injective(y)) => Verdict::from_bool(x == y),
        // an injective tail meets any other rule at finitely many indices
        (Shape::Injective(_), _) | (_, Shape::Injective(_)) => Verdict::no(),
        (Shape::Prime { p, o }, Shape::Prime { p: q, o: r }) => {
            from_sets(p == q || o == r, p != q || o != r)
        }
        (Shape::Prime { p, o }, Shape::Cyclic(c)) | (Shape::Cyclic(c), Shape::Prime { p, o }) => {
            // composites fill every residue class; primes fill the classes
            // coprime to the period
            let period = c.len();
            let coprime: Vec<usize> = (0..period).filter(|r| gcd(r + 1, period) == 1).collect();
            let composite_agree = c.contains(&o);
            let composite_differ = c.iter().any(|v| *v != o);
            let prime_agree = coprime.iter().any(|r| c[*r] == p);
            let prime_differ = coprime.iter().any(|r| c[*r] != p);
            from_sets(
                composite_agree || prime_agree,
                composite_differ || prime_differ,
            )
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StarValue {
    Value(f64),
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StarOutcome {
    pub value: StarValue,
    pub reason: Option<Reason>,
}

/// For finite `S`, the unique `s ∈ S` with `{i : a_i = s}` in the filter.
pub fn star_extend_finite(s: &[f64], a: &FilterSeq) -> Result<StarOutcome, FilterError> {
    let member = |v: f64| s.contains(&v);
    for (k, v) in a.prefix.iter().enumerate() {
        if !member(*v) {
            return Err(FilterError::Domain {
                index: k + 1,
                value: v.to_string(),
            });
        }
    }
    let start = a.prefix.len() + 1;
    let outside = |v: f64| FilterError::Domain {
        index: start,
        value: v.to_string(),
    };
    let decided = |v: f64| StarOutcome {
        value: StarValue::Value(v),
        reason: None,
    };
    match &a.tail {
        Tail::Constant(c) => {
            if !member(*c) {
                return Err(outside(*c));
            }
            Ok(decided(*c))
        }
        Tail::Periodic(p) => {
            if let Some(v) = p.iter().find(|v| !member(**v)) {
                return Err(outside(*v));
            }
            if p.iter().all(|v| *v == p[0]) {
                Ok(decided(p[0]))
            } else {
                Ok(StarOutcome {
                    value: StarValue::Undecided,
                    reason: Some(Reason::UltrafilterDependent),
                })
            }
        }
        Tail::ClosedForm(ClosedForm::Identity) => Err(outside(start as f64)),
        Tail::ClosedForm(ClosedForm::Reciprocal) => Err(outside(1.0 / start as f64)),
        Tail::ClosedForm(ClosedForm::PrimeIndicator {
            on_prime,
            otherwise,
            density_known,
        }) => {
            for v in [on_prime, otherwise] {
                if !member(*v) {
                    return Err(outside(*v));
                }
            }
            if on_prime == otherwise {
                Ok(decided(*otherwise))
            } else if *density_known {
                Ok(StarOutcome {
                    value: StarValue::Value(*otherwise),
                    reason: Some(Reason::DensityOne),
                })
            } else {
                Ok(StarOutcome {
                    value: StarValue::Undecided,
                    reason: Some(Reason::UltrafilterDependent),
                })
            }
        }
        Tail::Undetermined => Ok(StarOutcome {
            value: StarValue::Undecided,
            reason: Some(Reason::NoTailKnowledge),
        }),
    }
}

fn is_prime(n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn fmt_list(v: &[f64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl fmt::Display for FilterSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.prefix.is_empty() {
            write!(f, "{}; ", fmt_list(&self.prefix))?;
        }
        match &self.tail {
            Tail::Constant(c) => write!(f, "const {c}"),
            Tail::Periodic(p) => write!(f, "periodic({})", fmt_list(p)),
            Tail::ClosedForm(ClosedForm::Identity) => f.write_str("nu"),
            Tail::ClosedForm(ClosedForm::Reciprocal) => f.write_str("1/nu"),
            Tail::ClosedForm(ClosedForm::PrimeIndicator {
                on_prime,
                otherwise,
                density_known,
            }) => {
                if *density_known {
                    write!(f, "prime({on_prime},{otherwise},density)")
                } else {
                    write!(f, "prime({on_prime},{otherwise})")
                }
            }
            Tail::Undetermined => f.write_str("sampled"),
        }
    }
}

/// Grammar: `[v1,v2,…;] tail` with tail one of `const c`, `periodic(v,…)`,
/// `nu`, `1/nu`, `prime(p,o[,density])`, `sampled`.
impl FromStr for FilterSeq {
    type Err = FilterError;

    fn from_str(s: &str) -> Result<Self, FilterError> {
        let err = |column: usize, message: &str| FilterError::Parse {
            column,
            message: message.to_string(),
        };
        let (prefix, tail, offset) = match s.find(';') {
            Some(k) => (&s[..k], &s[k + 1..], k + 1),
            None => ("", s, 0),
        };
        let prefix = if prefix.trim().is_empty() {
            Vec::new()
        } else {
            numbers(prefix, 0)?
        };
        let lead = tail.len() - tail.trim_start().len();
        let col = offset + lead + 1;
        let t = tail.trim();
        let args = |name: &str| -> Option<&str> {
            t.strip_prefix(name)?
                .trim()
                .strip_prefix('(')?
                .strip_suffix(')')
        };
        let tail = if let Some(rest) = t.strip_prefix("const") {
            let v = rest.trim();
            Tail::Constant(
                v.parse()
                    .map_err(|_| err(col + 5, "expected a number after const"))?,
            )
        } else if t.starts_with("periodic") {
            let inner = args("periodic").ok_or_else(|| err(col, "expected periodic(v,...)"))?;
            let p = numbers(inner, col + 8)?;
            if p.is_empty() {
                return Err(err(col, "empty period"));
            }
            Tail::Periodic(p)
        } else if t == "nu" {
            Tail::ClosedForm(ClosedForm::Identity)
        } else if t == "1/nu" {
            Tail::ClosedForm(ClosedForm::Reciprocal)
        } else if t.starts_with("prime") {
            let inner = args("prime").ok_or_else(|| err(col, "expected prime(p,o[,density])"))?;
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            let density_known = match parts.len() {
                2 => false,
                3 if parts[2] == "density" => true,
                _ => return Err(err(col, "expected prime(p,o[,density])")),
            };
            let num = |x: &str| x.parse::<f64>().map_err(|_| err(col, "expected a number"));
            Tail::ClosedForm(ClosedForm::PrimeIndicator {
                on_prime: num(parts[0])?,
                otherwise: num(parts[1])?,
                density_known,
            })
        } else if t == "sampled" {
            Tail::Undetermined
        } else {
            return Err(err(col, "unknown tail rule"));
        };
        Ok(FilterSeq { prefix, tail })
    }
}

fn numbers(s: &str, offset: usize) -> Result<Vec<f64>, FilterError> {
    let mut out = Vec::new();
    let mut col = offset + 1;
    for part in s.split(',') {
        let v = part.trim();
        out.push(v.parse().map_err(|_| FilterError::Parse {
            column: col + part.len() - part.trim_start().len(),
            message: format!("expected a number, found {v:?}"),
        })?);
        col += part.len() + 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(s: &str) -> FilterSeq {
        s.parse().unwrap()
    }

    #[test]
    fn finite_prefixes_are_invisible() {
        assert_eq!(
            ae_equal(&seq("const 1"), &seq("5; const 1")).answer,
            Tri::True
        );
        let v = ae_equal(&seq("periodic(0,1)"), &seq("const 0"));
        assert_eq!(v.answer, Tri::False);
        assert_eq!(v.reason, Some(Reason::UltrafilterDependent));
        assert_eq!(
            ae_equal(&seq("1,1,1; sampled"), &seq("const 1")).answer,
            Tri::Undecided
        );
    }

    #[test]
    fn nu_is_infinitely_large() {
        let nu = canonical_nu();
        for eps in [1.0, 1e3, 1e6, 1e9] {
            assert_eq!(nu.exceeds(eps).answer, Tri::True);
        }
        assert_eq!(ae_equal(&nu, &seq("3; const 7")).answer, Tri::False);
        assert_eq!(seq("1/nu").is_infinitesimal().answer, Tri::True);
        assert_eq!(nu.is_infinitesimal().answer, Tri::False);
    }

    #[test]
    fn finite_sets_extend_to_themselves() {
        let s = [1.0, 2.0];
        assert_eq!(
            star_extend_finite(&s, &seq("periodic(1,2)")).unwrap().value,
            StarValue::Undecided
        );
        assert_eq!(
            star_extend_finite(&s, &seq("1; const 2")).unwrap().value,
            StarValue::Value(2.0)
        );
        let dens = star_extend_finite(&s, &seq("prime(1,2,density)")).unwrap();
        assert_eq!(dens.value, StarValue::Value(2.0));
        assert_eq!(
            star_extend_finite(&s, &seq("prime(1,2)")).unwrap().value,
            StarValue::Undecided
        );
        assert!(matches!(
            star_extend_finite(&s, &seq("const 3")),
            Err(FilterError::Domain { .. })
        ));
        assert!(matches!(
            star_extend_finite(&s, &seq("nu")),
            Err(FilterError::Domain { .. })
        ));
    }

    #[test]
    fn prime_indicator_against_periodic() {
        // odd indices ≥ 3 include every odd prime; even indices are composite past 2
        let v = ae_equal(&seq("prime(1,0)"), &seq("periodic(1,0)"));
        assert_eq!(v.answer, Tri::False);
        assert_eq!(seq("prime(1,0)").value(7), Some(1.0));
        assert_eq!(seq("prime(1,0)").value(9), Some(0.0));
    }

    #[test]
    fn text_round_trip() {
        for s in [
            "5,1; const 1",
            "periodic(0,1)",
            "nu",
            "1/nu",
            "prime(1,2,density)",
            "1,2; sampled",
        ] {
            assert_eq!(seq(s).to_string(), s);
        }
        match "const x".parse::<FilterSeq>() {
            Err(FilterError::Parse { column, .. }) => assert_eq!(column, 6),
            other => panic!("{other:?}"),
        }
    }
}
