//! Subcommand implementations. Each returns the rendered output.

use std::fmt::Write as _;

use asym_core::asym::{pair_with_tol, AsymptoticFunction, CompactBox, Domain, OpenBox};
use asym_core::filter::{ae_equal, star_extend_finite, FilterSeq, StarValue, Verdict};
use asym_core::growth::{chain_position, classify_ring, GrowthOrder, RingFamilyId};
use asym_core::lc::{Exponent, ExtExp, LcComplex};
use asym_core::mollify::{
    build_mollifier, convergence_rate, embed_with, reference_pairing, sup_rate, Rate, RateReport,
};
use serde_json::{json, Value as Json};

use crate::eval::{eval, exponent, Env};
use crate::fnspec::{
    parse_box, parse_bump, parse_distribution, parse_function, parse_smooth, spec_dim,
};
use crate::syntax::parse;
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Emit {
    #[default]
    Text,
    Csv,
    Json,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Reads a `--horizon` value: an exact rational such as `8` or `17/2`.
pub fn parse_horizon(text: &str) -> Result<ExtExp, CliError> {
    if matches!(text.trim(), "inf" | "infinity") {
        return Ok(ExtExp::Infinity);
    }
    Ok(ExtExp::Finite(exponent(&parse(text)?)?))
}

pub fn run_eval(text: &str, env: &Env, emit: Emit) -> Result<String, CliError> {
    let v = eval(&parse(text)?, env)?;
    Ok(match emit {
        Emit::Text => v.to_string(),
        Emit::Csv => format!("input,kind,value\n{},{},{}", csv_field(text), v.kind(), csv_field(&v.to_string())),
        Emit::Json => json!({"input": text, "kind": v.kind(), "value": v.to_string(), "backend": env.backend.to_string()})
            .to_string(),
    })
}

pub fn run_roots(text: &str, env: &Env, emit: Emit) -> Result<String, CliError> {
    let roots = crate::poly::roots(text, env.horizon)?;
    Ok(match emit {
        Emit::Text => roots
            .iter()
            .map(|r| r.to_string())
            .collect::<Vec<_>>()
            .join("\n"),
        Emit::Csv => {
            let mut s = String::from("root,multiplicity,residual_valuation");
            for r in &roots {
                let _ = write!(
                    s,
                    "\n{},{},{}",
                    csv_field(&r.root.to_string()),
                    r.multiplicity,
                    r.residual_valuation
                );
            }
            s
        }
        Emit::Json => Json::Array(
            roots
                .iter()
                .map(|r| {
                    json!({"root": r.root.to_string(), "multiplicity": r.multiplicity,
                           "residual_valuation": r.residual_valuation.to_string()})
                })
                .collect(),
        )
        .to_string(),
    })
}

/// Classifies a growth order (`rho^(-3)*log1^2`, `exp2`, `1`) along the
/// ring chain, or else an expression by magnitude.
pub fn run_classify(text: &str, env: &Env, emit: Emit) -> Result<String, CliError> {
    let g: GrowthOrder = match text.parse() {
        Ok(g) => g,
        Err(growth_err) => {
            return match parse(text) {
                Ok(e) => {
                    let wrapped = crate::syntax::Expr {
                        span: e.span,
                        kind: crate::syntax::ExprKind::Call("classify".into(), vec![e]),
                    };
                    let v = eval(&wrapped, env)?;
                    Ok(match emit {
                        Emit::Json => {
                            json!({"input": text, "magnitude": v.to_string()}).to_string()
                        }
                        Emit::Csv => format!("input,magnitude\n{},{v}", csv_field(text)),
                        Emit::Text => v.to_string(),
                    })
                }
                Err(_) => Err(growth_err.into()),
            };
        }
    };
    let smallest = chain_position(&g);
    let rows: Vec<(RingFamilyId, String)> = RingFamilyId::CHAIN
        .iter()
        .map(|r| (*r, classify_ring(&g, *r).to_string()))
        .collect();
    let label = format!("{} \\ {}", smallest.name(), smallest.ideal_name());
    Ok(match emit {
        Emit::Text => {
            let mut s = format!("order: {g}\nclass: {label}");
            for (r, m) in &rows {
                let _ = write!(s, "\n{}: {m}", r.name());
            }
            s
        }
        Emit::Csv => {
            let mut s = String::from("ring,membership");
            for (r, m) in &rows {
                let _ = write!(s, "\n{},{m}", r.name());
            }
            s
        }
        Emit::Json => {
            let m: serde_json::Map<String, Json> = rows
                .iter()
                .map(|(r, m)| (r.name().to_string(), json!(m)))
                .collect();
            json!({"order": g.to_string(), "class": label, "smallest": smallest.name(), "membership": m}).to_string()
        }
    })
}

fn default_domain(dim: usize, text: Option<&str>) -> Result<Domain, CliError> {
    match text {
        None => Ok(Domain::from_box(OpenBox::new(
            vec![-3.0; dim],
            vec![3.0; dim],
        ))),
        Some(t) => {
            let (lo, hi) = parse_box(t)?;
            if lo.len() != dim {
                return Err(CliError::Spec(format!("domain needs {dim} intervals")));
            }
            Ok(Domain::from_box(OpenBox::new(lo, hi)))
        }
    }
}

fn lc_json(x: &LcComplex) -> Json {
    let terms: Vec<Json> = x
        .terms()
        .map(|(q, c)| json!({"exponent": q.to_string(), "re": c.re, "im": c.im}))
        .collect();
    json!({"text": crate::serialize(x), "terms": terms, "horizon": x.horizon().to_string()})
}

/// `⟨f, τ⟩` truncated below `ρ^probe`.
pub fn run_pair(
    f_spec: &str,
    tau_spec: &str,
    probe: Exponent,
    emit: Emit,
) -> Result<String, CliError> {
    let dim = spec_dim(f_spec)?.max(1);
    let tau = parse_bump(tau_spec, dim)?;
    if tau.dim() != dim && spec_dim(f_spec)? > 0 {
        return Err(CliError::Spec(format!(
            "test function has dimension {}, function {dim}",
            tau.dim()
        )));
    }
    // terms at or beyond the probe are not reported
    let f: AsymptoticFunction =
        parse_function(f_spec, Domain::whole(tau.dim()), ExtExp::Finite(probe))?;
    let p = pair_with_tol(&f, &tau, 1e-13)?;
    Ok(match emit {
        Emit::Text => crate::serialize(&p),
        Emit::Csv => {
            let mut s = String::from("exponent,re,im");
            for (q, c) in p.terms() {
                let _ = write!(s, "\n{q},{:e},{:e}", c.re, c.im);
            }
            s
        }
        Emit::Json => lc_json(&p).to_string(),
    })
}

/// Options shared by `embed` and `rate`.
#[derive(Debug, Clone)]
pub struct EmbedOptions {
    pub dist: String,
    pub moments: usize,
    pub rhos: Vec<f64>,
    pub tau: String,
    pub domain: Option<String>,
    pub dim: usize,
}

/// Rows `(ρ, ⟨embed(T), τ⟩, error)` for each `ρ`.
pub fn run_embed(o: &EmbedOptions, emit: Emit) -> Result<String, CliError> {
    let t = parse_distribution(&o.dist, o.dim)?;
    let tau = parse_bump(&o.tau, o.dim)?;
    let omega = default_domain(o.dim, o.domain.as_deref())?;
    let m = build_mollifier(o.moments, o.dim)?;
    let reference = reference_pairing(&t, &tau)?;
    let mut rows = Vec::new();
    for &rho in &o.rhos {
        let e = embed_with(&t, &omega, rho, &m)?;
        let v = pair_with_tol(&e, &tau, 1e-15)?
            .coeff(Exponent::from_integer(0))
            .re;
        rows.push((rho, v, (v - reference).abs()));
    }
    Ok(match emit {
        Emit::Json => json!({
            "distribution": o.dist, "moments": o.moments, "reference": reference,
            "rows": rows.iter().map(|(r, v, e)| json!({"rho": r, "pairing": v, "error": e})).collect::<Vec<_>>()
        })
        .to_string(),
        Emit::Csv | Emit::Text => {
            let mut s = String::from("rho,pairing,error");
            for (r, v, e) in &rows {
                let _ = write!(s, "\n{r:e},{v:.15e},{e:e}");
            }
            s
        }
    })
}

/// Where `rate` measures the error.
#[derive(Debug, Clone)]
pub enum RateTarget {
    /// `⟨embed(T) − T, τ⟩`.
    Pairing,
    /// `sup_K |embed(T_f) − f|` on the given box and grid resolution.
    Sup { k: String, resolution: usize },
}

pub fn run_rate(o: &EmbedOptions, target: &RateTarget, emit: Emit) -> Result<String, CliError> {
    let omega = default_domain(o.dim, o.domain.as_deref())?;
    let report: RateReport = match target {
        RateTarget::Pairing => {
            let t = parse_distribution(&o.dist, o.dim)?;
            let tau = parse_bump(&o.tau, o.dim)?;
            convergence_rate(&t, &tau, &omega, &o.rhos, o.moments)?
        }
        RateTarget::Sup { k, resolution } => {
            let body = o.dist.trim().strip_prefix("f:").unwrap_or(&o.dist);
            let f = parse_smooth(body)?;
            let (lo, hi) = parse_box(k)?;
            sup_rate(
                &f,
                &omega,
                &CompactBox::new(lo, hi, *resolution),
                &o.rhos,
                o.moments,
            )?
        }
    };
    Ok(match emit {
        Emit::Json => json!({
            "rows": report.rows.iter().map(|r| json!({"rho": r.rho, "value": r.value, "reference": r.reference,
                                                      "error": r.error})).collect::<Vec<_>>(),
            "slope": match report.rate { Rate::Slope(s) => json!(s), Rate::Exact => json!("exact") },
        })
        .to_string(),
        Emit::Csv | Emit::Text => report.to_string(),
    })
}

fn verdict_json(v: &Verdict) -> Json {
    json!({"answer": format!("{:?}", v.answer).to_lowercase(), "reason": v.reason.map(|r| r.to_string())})
}

/// Filter subcommands.
#[derive(Debug, Clone)]
pub enum FilterQuery {
    Eq(String, String),
    Exceeds(String, f64),
    Infinitesimal(String),
    Star(String, String),
}

pub fn run_filter(q: &FilterQuery, emit: Emit) -> Result<String, CliError> {
    let seq = |s: &str| -> Result<FilterSeq, CliError> { Ok(s.parse::<FilterSeq>()?) };
    let verdict = match q {
        FilterQuery::Eq(a, b) => ae_equal(&seq(a)?, &seq(b)?),
        FilterQuery::Exceeds(a, eps) => seq(a)?.exceeds(*eps),
        FilterQuery::Infinitesimal(a) => seq(a)?.is_infinitesimal(),
        FilterQuery::Star(set, a) => {
            let s: Vec<f64> = set
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| CliError::Spec(format!("expected a number, found {v:?}")))
                })
                .collect::<Result<_, _>>()?;
            let out = star_extend_finite(&s, &seq(a)?)?;
            let value = match out.value {
                StarValue::Value(v) => v.to_string(),
                StarValue::Undecided => "undecided".to_string(),
            };
            return Ok(match emit {
                Emit::Json => {
                    json!({"value": value, "reason": out.reason.map(|r| r.to_string())}).to_string()
                }
                Emit::Csv => format!(
                    "value,reason\n{value},{}",
                    out.reason.map(|r| r.to_string()).unwrap_or_default()
                ),
                Emit::Text => match out.reason {
                    Some(r) => format!("{value} ({r})"),
                    None => value,
                },
            });
        }
    };
    Ok(match emit {
        Emit::Text => verdict.to_string(),
        Emit::Csv => format!(
            "answer,reason\n{:?},{}",
            verdict.answer,
            verdict.reason.map(|r| r.to_string()).unwrap_or_default()
        ),
        Emit::Json => verdict_json(&verdict).to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_examples() {
        let env = Env::default();
        let out = run_classify("rho^(-3)*log1^2", &env, Emit::Text).unwrap();
        assert!(out.contains("class: M_rho \\ N_rho"), "{out}");
        assert_eq!(run_classify("1/eps", &env, Emit::Text).unwrap(), "Infinite");
        assert!(run_classify("rho^(", &env, Emit::Text).is_err());
    }

    #[test]
    fn filter_output() {
        let q = FilterQuery::Eq("periodic(0,1)".into(), "const 0".into());
        assert_eq!(
            run_filter(&q, Emit::Text).unwrap(),
            "false (ultrafilter-dependent)"
        );
        let q = FilterQuery::Star("1,2".into(), "const 3".into());
        assert_eq!(run_filter(&q, Emit::Text).unwrap_err().exit_code(), 3);
    }

    #[test]
    fn pairing_text() {
        let out = run_pair(
            "eps^-1 + x",
            "bump(0,1)",
            Exponent::from_integer(6),
            Emit::Json,
        )
        .unwrap();
        let v: Json = serde_json::from_str(&out).unwrap();
        assert_eq!(v["terms"][0]["exponent"], "-1");
    }
}
