//! Acceptance suite: one line per criterion, nonzero exit on any failure.

use std::cmp::Ordering;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use asym_cli::{deserialize, serialize};
use asym_core::asym::{
    glue, gradient_constancy, is_moderate, is_negligible, pair, restrict, AsymError,
    AsymptoticFunction, AsymptoticPoint, CompactBox, Constancy, Domain, NegligibleMode, OpenBox,
};
use asym_core::closure::{inverse_to, nth_root_to, poly_roots, LcPolynomial};
use asym_core::filter::{ae_equal, canonical_nu, ClosedForm, FilterSeq, Tail, Tri};
use asym_core::growth::{
    chain_position, classify_ring, Base, GrowthOrder, Membership, RingFamilyId,
};
use asym_core::lc::{Exponent, ExtExp, ExtendedScalar, LcComplex, LcNumber, LcRational};
use asym_core::mollify::{
    build_mollifier, convergence_rate, embed_distribution, sup_rate, DistributionSpec, TestFunction,
};
use asym_core::smooth::Smooth;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::{BigRational, Rational64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, budget_s: f64) -> bool {
    elapsed.as_secs_f64() < budget_s
}

fn q(n: i64, d: i64) -> Exponent {
    Exponent::new(n, d)
}

fn big(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn rand_coeff(rng: &mut StdRng) -> BigRational {
    let mut n = rng.gen_range(-9..=9);
    if n == 0 {
        n = 1;
    }
    big(n, rng.gen_range(1..=5))
}

/// Random rational series `ρ^v·(c₀ + c₁ρ^{1/d} + …)` with relative
/// precision `rel` (horizon `v + rel`), or exact when `rel` is `None`.
fn rand_lc(rng: &mut StdRng, rel: Option<i64>, min_val: i64) -> LcRational {
    let den = [1, 2, 3][rng.gen_range(0..3)];
    let v = q(rng.gen_range(min_val * den..=2 * den), den);
    let terms: Vec<(Exponent, BigRational)> = (0..rng.gen_range(1..=4))
        .map(|k| (v + q(k * rng.gen_range(1..=2), den), rand_coeff(rng)))
        .collect();
    // the leading term is always present
    let mut terms = terms;
    terms[0].0 = v;
    let horizon = match rel {
        Some(r) => ExtExp::Finite(v + Exponent::from_integer(r)),
        None => ExtExp::Infinity,
    };
    LcRational::from_terms(terms, horizon)
}

fn to_float(x: &LcRational) -> LcComplex {
    x.to_complex()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(1);
    let mut failures = 0;
    let n = 10_000;
    for _ in 0..n {
        let (a, b, c) = (
            rand_lc(&mut rng, Some(8), -2),
            rand_lc(&mut rng, Some(8), -2),
            rand_lc(&mut rng, Some(8), -2),
        );
        let ok = (&(&a + &b) + &c).agrees_with(&(&a + &(&b + &c)))
            && (&(&a * &b) * &c).agrees_with(&(&a * &(&b * &c)))
            && (&a + &b).agrees_with(&(&b + &a))
            && (&a * &b).agrees_with(&(&b * &a))
            && (&a * &(&b + &c)).agrees_with(&(&(&a * &b) + &(&a * &c)));
        let inv = inverse_to(&a, ExtExp::Infinity).expect("nonzero");
        let residual = &(&a * &inv) - &LcRational::one();
        let inverse_ok = residual.is_zero() && residual.horizon() >= ExtExp::int(8);
        if !(ok && inverse_ok) {
            failures += 1;
        }
    }
    let t = start.elapsed();
    outcome(
        failures == 0 && within(t, 30.0),
        format!("{n} samples, {failures} failures, {:.2} s", t.as_secs_f64()),
    )
}

fn criterion_2() -> Outcome {
    let mut rng = StdRng::seed_from_u64(2);
    let mut failures = 0;
    let n = 10_000;
    for i in 0..n {
        let x = rand_lc(&mut rng, None, -2);
        let y = if i % 10 == 0 {
            x.clone()
        } else {
            rand_lc(&mut rng, None, -2)
        };
        let o = x.compare(&y).unwrap();
        let d = &x - &y;
        let tri = o == y.compare(&x).unwrap().reverse()
            && (o == Ordering::Equal) == d.is_zero()
            && o == d.signum().unwrap();
        let vxy = (&x * &y).valuation() == x.valuation() + y.valuation().finite().unwrap();
        let vs = (&x + &y).valuation();
        let m = x.valuation().min(y.valuation());
        let ultra = vs >= m && (x.valuation() == y.valuation() || vs == m);
        if !(tri && vxy && ultra) {
            failures += 1;
        }
    }
    outcome(failures == 0, format!("{n} pairs, {failures} failures"))
}

fn st(x: &LcRational) -> BigRational {
    match x.standard_part() {
        ExtendedScalar::Finite(c) => c,
        other => panic!("finite input expected, got {other:?}"),
    }
}

fn criterion_3() -> Outcome {
    let mut rng = StdRng::seed_from_u64(3);
    let mut failures = 0;
    let n = 1_000;
    for _ in 0..n {
        let x = rand_lc(&mut rng, None, 0);
        let mut y = rand_lc(&mut rng, None, 0);
        if st(&y) == big(0, 1) {
            y = &y + &LcRational::one();
        }
        let quotient = &x * &inverse_to(&y, ExtExp::int(8)).unwrap();
        let ok = st(&(&x + &y)) == st(&x) + st(&y)
            && st(&(&x - &y)) == st(&x) - st(&y)
            && st(&(&x * &y)) == st(&x) * st(&y)
            && st(&quotient) == st(&x) / st(&y);
        if !ok {
            failures += 1;
        }
    }
    outcome(
        failures == 0,
        format!("{n} finite pairs, {failures} failures"),
    )
}

fn abs_terms(x: &LcComplex) -> LcComplex {
    LcComplex::from_terms(
        x.terms().map(|(q, c)| (q, Complex64::new(c.norm(), 0.0))),
        x.horizon(),
    )
}

/// Least exponent whose coefficient exceeds rounding relative to `bound`,
/// a termwise magnitude bound on everything summed into `x`.
fn significant_valuation(x: &LcComplex, bound: &LcComplex) -> ExtExp {
    x.terms()
        .find(|(q, c)| c.norm() > 1e-10 * bound.coeff(*q).norm().max(1.0))
        .map(|(q, _)| ExtExp::Finite(q))
        .unwrap_or(x.horizon())
}

/// `p(y)` next to the bound `Σ |a_k|·|y|^k`, both by naive power sums.
fn eval_with_bound(p: &LcPolynomial<Complex64>, y: &LcComplex) -> (LcComplex, LcComplex) {
    let ay = abs_terms(y);
    let (mut value, mut bound) = (LcComplex::zero(), LcComplex::zero());
    for (k, a) in p.coeffs().iter().enumerate() {
        value = &value + &(a * &y.powi(k as u32));
        bound = &bound + &(&abs_terms(a) * &ay.powi(k as u32));
    }
    (value, bound)
}

fn check_roots(p: &LcPolynomial<Complex64>, target: Exponent) -> Result<(), String> {
    let roots = poly_roots(p, target).map_err(|e| e.to_string())?;
    let total: usize = roots.iter().map(|r| r.multiplicity).sum();
    if total != p.degree() {
        return Err(format!("multiplicities sum to {total}"));
    }
    for r in &roots {
        let (value, bound) = eval_with_bound(p, &r.root);
        let v = significant_valuation(&value, &bound);
        if r.residual_valuation < ExtExp::Finite(target) || v < ExtExp::Finite(target) {
            return Err(format!(
                "residual valuation {} / {v} for root {}",
                r.residual_valuation, r.root
            ));
        }
    }
    let back = LcPolynomial::from_roots(
        &roots
            .iter()
            .map(|r| (r.root.clone(), r.multiplicity))
            .collect::<Vec<_>>(),
    );
    // the same product over coefficient magnitudes scales the tolerance
    let back_bound = LcPolynomial::from_roots(
        &roots
            .iter()
            .map(|r| (-&abs_terms(&r.root), r.multiplicity))
            .collect::<Vec<_>>(),
    );
    for ((a, b), bound) in back
        .coeffs()
        .iter()
        .zip(p.coeffs())
        .zip(back_bound.coeffs())
    {
        let d = a - b;
        // rounding at ρ^q comes from products of terms at or below q
        let mut running = 1.0f64;
        let mut scales = std::collections::BTreeMap::new();
        for (q, c) in bound.terms() {
            running = running.max(c.norm());
            scales.insert(q, running);
        }
        let scale_at = |q: Exponent| scales.range(..=q).next_back().map_or(1.0, |(_, s)| *s);
        if let Some((q, c)) = d
            .terms()
            .find(|(q, c)| *q < target && c.norm() >= 1e-8 * scale_at(*q))
        {
            return Err(format!(
                "factor-back error {} at exponent {q} (scale {})",
                c.norm(),
                scale_at(q)
            ));
        }
        if d.horizon() < ExtExp::Finite(target) && b.horizon() >= ExtExp::Finite(target) {
            // too little precision left to compare
            let first = b.terms().next().map(|(q, _)| q).unwrap_or(target);
            if d.horizon() <= ExtExp::Finite(first) {
                return Err(format!("factor-back precision {} too low", d.horizon()));
            }
        }
    }
    Ok(())
}

fn rand_float_lc(rng: &mut StdRng, min_val: i64) -> LcComplex {
    to_float(&rand_lc(rng, None, min_val))
}

fn criterion_4() -> Outcome {
    let mut rng = StdRng::seed_from_u64(4);
    let target = Exponent::from_integer(8);
    let mut failures = Vec::new();
    for (degree, count) in [(2usize, 200usize), (3, 50)] {
        for i in 0..count {
            let mut coeffs: Vec<LcComplex> =
                (0..degree).map(|_| rand_float_lc(&mut rng, 0)).collect();
            coeffs.push(LcComplex::one());
            let p = LcPolynomial::new(coeffs);
            if let Err(e) = check_roots(&p, target) {
                failures.push(format!("degree {degree} #{i}: {e}"));
            }
        }
    }
    let horizon = ExtExp::int(8);
    let mut root_fail = 0;
    for _ in 0..200 {
        let mut x = rand_float_lc(&mut rng, 0);
        if x.leading().is_some_and(|(_, c)| c.re < 0.0) {
            x = -x;
        }
        for n in [2u32, 3] {
            let y = nth_root_to(&x, n, horizon).unwrap();
            let residual = &y.powi(n) - &x;
            let bound = &abs_terms(&y).powi(n) + &abs_terms(&x);
            if significant_valuation(&residual, &bound) < horizon {
                root_fail += 1;
            }
        }
    }
    let pass = failures.is_empty() && root_fail == 0;
    let mut detail = format!(
        "200 quadratics + 50 cubics, {} failures; 400 sqrt/cbrt round trips, {root_fail} failures",
        failures.len()
    );
    if let Some(f) = failures.first() {
        detail.push_str(&format!("; first: {f}"));
    }
    outcome(pass, detail)
}

fn rand_growth(rng: &mut StdRng) -> GrowthOrder {
    let mut factors = Vec::new();
    for _ in 0..rng.gen_range(0..=3) {
        let base = match rng.gen_range(0..3) {
            0 => Base::Rho,
            1 => Base::Log(rng.gen_range(1..=3)),
            _ => Base::Exp(rng.gen_range(1..=3)),
        };
        let m = Rational64::new(rng.gen_range(-6..=6), rng.gen_range(1..=3));
        if m != Rational64::from_integer(0) {
            factors.push((base, m));
        }
    }
    GrowthOrder::from_factors(&factors).unwrap_or_else(|_| GrowthOrder::unit())
}

fn criterion_5() -> Outcome {
    let g = |s: &str| s.parse::<GrowthOrder>().unwrap();
    let in_ring_not_ideal = |x: &GrowthOrder, r| classify_ring(x, r) == Membership::InRingNotIdeal;
    let mut examples = vec![
        ("ln rho", in_ring_not_ideal(&g("log1"), RingFamilyId::FRho)),
        (
            "e^(1/rho)",
            in_ring_not_ideal(&g("exp1"), RingFamilyId::ERho)
                && classify_ring(&g("exp1"), RingFamilyId::MRho) == Membership::Outside,
        ),
    ];
    for x in ["rho", "rho^(-3)", "rho^(1/2)", "rho^(-7/3)"] {
        let ok = in_ring_not_ideal(&g(x), RingFamilyId::MRho)
            && classify_ring(&g(x), RingFamilyId::FRho) != Membership::InRingNotIdeal;
        examples.push(("rho^x", ok));
    }
    for k in 1..=4 {
        examples.push((
            "log_k(1/rho)",
            classify_ring(&GrowthOrder::log(k), RingFamilyId::LRho) != Membership::Outside,
        ));
    }
    let bad_examples: Vec<&str> = examples.iter().filter(|e| !e.1).map(|e| e.0).collect();
    let mut rng = StdRng::seed_from_u64(5);
    let mut violations = 0;
    let n = 1_000;
    for _ in 0..n {
        let a = rand_growth(&mut rng);
        let b = rand_growth(&mut rng);
        let chain = RingFamilyId::CHAIN;
        for (i, r) in chain.iter().enumerate() {
            let m = classify_ring(&a, *r);
            if m != Membership::Outside
                && chain[i..]
                    .iter()
                    .any(|s| classify_ring(&a, *s) == Membership::Outside)
            {
                violations += 1;
            }
            if m == Membership::InIdeal
                && classify_ring(&b, *r) != Membership::Outside
                && classify_ring(&a.mul(&b), *r) != Membership::InIdeal
            {
                violations += 1;
            }
            if !a.is_unit()
                && (m == Membership::Outside)
                    != (classify_ring(&a.inverse(), *r) == Membership::InIdeal)
            {
                violations += 1;
            }
        }
        if classify_ring(&a, chain_position(&a)) == Membership::Outside {
            violations += 1;
        }
    }
    outcome(
        bad_examples.is_empty() && violations == 0,
        format!(
            "{} named examples, misplaced {:?}; {n} random orders, {violations} violations",
            examples.len(),
            bad_examples
        ),
    )
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for n in 0..=6 {
        let m = build_mollifier(n, 1).unwrap();
        worst = worst.max((m.theta.integral() - 1.0).abs());
        for k in 1..=n {
            worst = worst.max(m.theta.moment(&[k as u8]).abs());
        }
    }
    let t = start.elapsed();
    outcome(
        worst < 1e-10 && within(t, 5.0),
        format!(
            "n = 0..6, worst moment error {worst:.2e}, {:.2} s",
            t.as_secs_f64()
        ),
    )
}

const RHOS: [f64; 3] = [1e-1, 3e-2, 1e-2];

fn criterion_7() -> Outcome {
    let start = Instant::now();
    let x = Smooth::var(0);
    let f = &(-&(&x * &x)).exp() * &x.cos();
    let omega = Domain::interval(-3.0, 3.0);
    let k = CompactBox::interval(-2.0, 2.0, 201);
    let mut slopes = Vec::new();
    let mut pass = true;
    for n in 1..=3 {
        let s = sup_rate(&f, &omega, &k, &RHOS, n)
            .unwrap()
            .slope()
            .unwrap_or(f64::NAN);
        pass &= (s - (n as f64 + 1.0)).abs() <= 0.3;
        slopes.push(format!("sup n={n}: {s:.3}"));
    }
    // an off-centre test function, so odd moments of the error do not cancel
    let tau = TestFunction::bump(&[0.2], &[1.0]);
    let s = convergence_rate(
        &DistributionSpec::DeltaAt(vec![0.0]),
        &tau,
        &omega,
        &RHOS,
        2,
    )
    .unwrap()
    .slope()
    .unwrap_or(f64::NAN);
    pass &= (s - 3.0).abs() <= 0.3;
    slopes.push(format!("delta n=2: {s:.3}"));
    let t = start.elapsed();
    outcome(
        pass && within(t, 60.0),
        format!("slopes [{}], {:.2} s", slopes.join(", "), t.as_secs_f64()),
    )
}

fn criterion_8() -> Outcome {
    let omega = Domain::interval(-3.0, 3.0);
    let tau = TestFunction::bump(&[0.2], &[1.0]);
    let m = build_mollifier(2, 1).unwrap();
    let theta = m.theta.clone();
    let sq_int = theta
        .integrate_against(&mut |x| theta.value(x), &[Vec::new()], 1e-14)
        .unwrap()
        .value;
    let mut ratios = Vec::new();
    for rho in [1e-2, 1e-3] {
        let e = embed_distribution(&DistributionSpec::DeltaAt(vec![0.0]), &omega, rho, 2).unwrap();
        let p = pair(&e.mul(&e).unwrap(), &tau)
            .unwrap()
            .coeff(Exponent::from_integer(0))
            .re;
        ratios.push(p * rho / (tau.value(&[0.0]).unwrap() * sq_int));
    }
    let pass = ratios.iter().all(|r| (0.9..=1.1).contains(r));
    outcome(
        pass,
        format!(
            "ratios {:?}",
            ratios.iter().map(|r| format!("{r:.6}")).collect::<Vec<_>>()
        ),
    )
}

fn rand_smooth(rng: &mut StdRng) -> Smooth {
    let x = Smooth::var(0);
    let a = rng.gen_range(0.5..2.0);
    let b = rng.gen_range(-1.0..1.0);
    let c = rng.gen_range(-3.0..3.0);
    match rng.gen_range(0..3) {
        0 => &Smooth::constant(c) * &(&(&Smooth::constant(a) * &x) + &Smooth::constant(b)).sin(),
        1 => {
            &Smooth::constant(c)
                * &(-&(&(&x - &Smooth::constant(b)) * &(&x - &Smooth::constant(b)))).exp()
        }
        _ => &(&(&Smooth::constant(c) * &x) * &x) + &Smooth::constant(b),
    }
}

fn criterion_9() -> Outcome {
    let mut rng = StdRng::seed_from_u64(9);
    let omega = Domain::interval(-4.0, 4.0);
    let k = CompactBox::interval(-1.0, 1.0, 21);
    let probe = Exponent::from_integer(4);
    let (mut disagree, mut wrong) = (0, 0);
    for i in 0..100 {
        let negligible = i % 2 == 0;
        let mut terms = Vec::new();
        for _ in 0..rng.gen_range(1..=3) {
            // beyond the probe: bounded by ρ^probe on K
            terms.push((
                Exponent::from_integer(rng.gen_range(5..=9)),
                rand_smooth(&mut rng),
            ));
        }
        if negligible {
            // a low-order coefficient that vanishes on K
            if rng.gen_bool(0.5) {
                terms.push((
                    Exponent::from_integer(rng.gen_range(-2..=4)),
                    Smooth::bump(0, 3.0, rng.gen_range(0.5..1.5)),
                ));
            }
        } else {
            terms.push((
                Exponent::from_integer(rng.gen_range(-2..=4)),
                rand_smooth(&mut rng),
            ));
        }
        let f = AsymptoticFunction::from_terms(terms, ExtExp::int(16), omega.clone()).unwrap();
        let report = is_moderate(&f, &k, 2).unwrap();
        let all = is_negligible(&f, &k, NegligibleMode::AllDerivatives(2), probe).unwrap();
        let zero = is_negligible(
            &f,
            &k,
            NegligibleMode::OrderZeroGivenModerate(&report),
            probe,
        )
        .unwrap();
        disagree += usize::from(all != zero);
        wrong += usize::from(all != negligible);
    }
    outcome(
        disagree == 0 && wrong == 0,
        format!("100 functions, {disagree} mode disagreements, {wrong} wrong verdicts"),
    )
}

fn rand_function(rng: &mut StdRng, domain: Domain) -> AsymptoticFunction {
    let terms: Vec<(Exponent, Smooth)> = (0..rng.gen_range(1..=3))
        .map(|_| (q(rng.gen_range(-4..=8), 2), rand_smooth(rng)))
        .collect();
    AsymptoticFunction::from_terms(terms, ExtExp::int(8), domain).unwrap()
}

fn same_values(f: &AsymptoticFunction, g: &AsymptoticFunction, pts: &[Vec<f64>], tol: f64) -> bool {
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

fn criterion_10() -> Outcome {
    let mut rng = StdRng::seed_from_u64(10);
    let omega = Domain::interval(0.0, 3.0);
    let cover = [OpenBox::interval(0.0, 2.0), OpenBox::interval(1.0, 3.0)];
    let (mut restrict_fail, mut glue_fail, mut reject_fail) = (0, 0, 0);
    let n = 20;
    for _ in 0..n {
        let f = rand_function(&mut rng, omega.clone());
        let o2 = Domain::interval(0.5, 2.5);
        let o1 = Domain::interval(1.0, 2.0);
        let whole = restrict(&f, &omega).unwrap();
        let nested = restrict(&restrict(&f, &o2).unwrap(), &o1).unwrap();
        let direct = restrict(&f, &o1).unwrap();
        let exact = whole.to_string() == f.to_string()
            && whole.domain() == f.domain()
            && nested.to_string() == direct.to_string()
            && nested.domain() == direct.domain();
        restrict_fail += usize::from(!exact);

        let locals: Vec<AsymptoticFunction> = cover
            .iter()
            .map(|b| restrict(&f, &Domain::from_box(b.clone())).unwrap())
            .collect();
        let g = glue(&cover, &locals).unwrap();
        let agrees = cover.iter().zip(&locals).all(|(b, l)| {
            let pts: Vec<Vec<f64>> = (1..40)
                .map(|i| vec![b.lo[0] + (b.hi[0] - b.lo[0]) * i as f64 / 40.0])
                .collect();
            same_values(&g, l, &pts, 1e-10)
        });
        glue_fail += usize::from(!agrees);

        let bad_q = q(rng.gen_range(-2..=6), 2);
        let bump = AsymptoticFunction::from_terms(
            [(bad_q, Smooth::constant(rng.gen_range(0.5..2.0)))],
            ExtExp::int(8),
            Domain::from_box(cover[1].clone()),
        )
        .unwrap();
        let perturbed = [locals[0].clone(), locals[1].add(&bump).unwrap()];
        let rejected = match glue(&cover, &perturbed) {
            Err(AsymError::Glue {
                point,
                exponent,
                difference,
            }) => {
                let x = point[0];
                let d0 = locals[0]
                    .coefficient(exponent)
                    .map_or(0.0, |c| c.value(&point).unwrap());
                let d1 = perturbed[1]
                    .coefficient(exponent)
                    .map_or(0.0, |c| c.value(&point).unwrap());
                x > 1.0
                    && x < 2.0
                    && exponent == bad_q
                    && ((d0 - d1).abs() - difference).abs() < 1e-9
            }
            _ => false,
        };
        reject_fail += usize::from(!rejected);
    }
    outcome(
        restrict_fail + glue_fail + reject_fail == 0,
        format!("{n} cases: restriction {restrict_fail}, gluing {glue_fail}, rejection {reject_fail} failures"),
    )
}

fn criterion_11() -> Outcome {
    let mut rng = StdRng::seed_from_u64(11);
    let domain = Domain::new(
        1,
        vec![OpenBox::interval(-2.0, 1.0), OpenBox::interval(0.0, 3.0)],
    );
    let ks = [
        CompactBox::interval(-1.5, 0.5, 9),
        CompactBox::interval(0.5, 2.5, 9),
    ];
    let probe = Exponent::from_integer(6);
    let (mut const_fail, mut nonconst_fail) = (0, 0);
    for _ in 0..50 {
        let c = rand_lc(&mut rand::rngs::StdRng::seed_from_u64(rng.gen()), None, -2).to_complex();
        let f = AsymptoticFunction::constant(&c, domain.clone()).unwrap();
        let ok = match gradient_constancy(&f, &ks, probe).unwrap() {
            Constancy::Constant(v) => [-1.0, 0.3, 2.7].iter().all(|x| {
                let e = f
                    .eval_at(&AsymptoticPoint::standard(vec![*x]), ExtExp::Finite(probe))
                    .unwrap();
                (&v - &e).terms().all(|(_, d)| d.norm() < 1e-12)
            }),
            _ => false,
        };
        const_fail += usize::from(!ok);
    }
    for _ in 0..50 {
        let c = rand_lc(&mut rand::rngs::StdRng::seed_from_u64(rng.gen()), None, -2).to_complex();
        let base = AsymptoticFunction::constant(&c, domain.clone()).unwrap();
        let bad_q = q(rng.gen_range(-4..=10), 2);
        let wobble = AsymptoticFunction::from_terms(
            [(bad_q, rand_smooth(&mut rng))],
            ExtExp::Infinity,
            domain.clone(),
        )
        .unwrap();
        let f = base.add(&wobble).unwrap();
        let ok = match gradient_constancy(&f, &ks, probe).unwrap() {
            Constancy::NonConstant {
                point,
                alpha,
                exponent,
                derivative,
            } => {
                let d = f
                    .coefficient(exponent)
                    .unwrap()
                    .derivative_at(&point, &alpha)
                    .unwrap();
                exponent < probe
                    && derivative.abs() > 1e-10
                    && (d - derivative).abs() <= 1e-12 * d.abs().max(1.0)
            }
            Constancy::Constant(_) => false,
        };
        nonconst_fail += usize::from(!ok);
    }
    outcome(
        const_fail + nonconst_fail == 0,
        format!("50 constant / 50 non-constant: {const_fail} / {nonconst_fail} failures"),
    )
}

fn rand_seq(rng: &mut StdRng) -> FilterSeq {
    let vals = [0.0, 1.0, 2.0];
    let v = |rng: &mut StdRng| vals[rng.gen_range(0..3)];
    let prefix: Vec<f64> = (0..rng.gen_range(0..4)).map(|_| v(rng)).collect();
    let tail = match rng.gen_range(0..7) {
        0 => Tail::Constant(v(rng)),
        1 => Tail::Periodic((0..rng.gen_range(1..=3)).map(|_| v(rng)).collect()),
        2 => Tail::ClosedForm(ClosedForm::Identity),
        3 => Tail::ClosedForm(ClosedForm::Reciprocal),
        4 => Tail::ClosedForm(ClosedForm::PrimeIndicator {
            on_prime: v(rng),
            otherwise: v(rng),
            density_known: rng.gen(),
        }),
        5 => Tail::Undetermined,
        _ => Tail::Constant(v(rng)),
    };
    FilterSeq::new(prefix, tail)
}

fn criterion_12() -> Outcome {
    let nu = canonical_nu();
    let exceeds = [1.0, 1e3, 1e9]
        .iter()
        .all(|e| nu.exceeds(*e).answer == Tri::True);
    let mut rng = StdRng::seed_from_u64(12);
    let (mut decided, mut changed) = (0, 0);
    for _ in 0..1_000 {
        let a = rand_seq(&mut rng);
        let b = rand_seq(&mut rng);
        let v = ae_equal(&a, &b);
        if !v.is_decided() {
            continue;
        }
        decided += 1;
        let pa = a.with_prefix(
            (0..rng.gen_range(0..6))
                .map(|_| rng.gen_range(-5.0..5.0))
                .collect(),
        );
        let pb = b.with_prefix(
            (0..rng.gen_range(0..6))
                .map(|_| rng.gen_range(-5.0..5.0))
                .collect(),
        );
        if ae_equal(&pa, &pb).answer != v.answer {
            changed += 1;
        }
    }
    outcome(
        exceeds && changed == 0 && decided > 0,
        format!("nu exceeds {{1, 1e3, 1e9}}: {exceeds}; 1000 cases ({decided} decided), {changed} changed by prefixes"),
    )
}

fn criterion_13() -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_asym"))
        .args(["eval", "st((sqrt(1+eps)-1)/eps)"])
        .output();
    let printed = out
        .as_ref()
        .map(|o| String::from_utf8_lossy(&o.stdout).trim().to_string())
        .unwrap_or_default();
    let status_ok = out.as_ref().is_ok_and(|o| o.status.success());
    let mut rng = StdRng::seed_from_u64(13);
    let mut failures = 0;
    for i in 0..1_000 {
        let rel = if i % 3 == 0 {
            Some(rng.gen_range(1..=6))
        } else {
            None
        };
        let x = if i % 50 == 0 {
            LcRational::zero()
        } else {
            rand_lc(&mut rng, rel, -3)
        };
        let back: Result<LcNumber<BigRational>, _> = deserialize(&serialize(&x));
        if back.as_ref() != Ok(&x) {
            failures += 1;
        }
    }
    outcome(
        printed == "1/2" && status_ok && failures == 0,
        format!("eval printed {printed:?}; 1000 round trips, {failures} failures"),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("field laws", criterion_1),
        ("order and valuation", criterion_2),
        ("standard part homomorphism", criterion_3),
        ("roots and closure", criterion_4),
        ("convex ring chain", criterion_5),
        ("mollifier moments", criterion_6),
        ("embedding rates", criterion_7),
        ("delta squared scaling", criterion_8),
        ("negligibility modes", criterion_9),
        ("sheaf", criterion_10),
        ("constancy", criterion_11),
        ("filter sandbox", criterion_12),
        ("cli", criterion_13),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.pass);
        println!(
            "criterion {:>2} {:<28} {}  {}",
            i + 1,
            name,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
