use asym_core::closure::{inverse_to, nth_root_to, poly_roots, LcPolynomial};
use asym_core::lc::{Exponent, ExtExp, LcComplex, LcRational};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use proptest::prelude::*;

fn series() -> impl Strategy<Value = LcRational> {
    (
        1i64..=3,
        -4i64..=4,
        prop::collection::vec((1i64..=6, -9i64..=9, 1i64..=5), 0..4),
        1i64..=9,
        1i64..=4,
    )
        .prop_map(|(den, v, rest, lead_n, lead_d)| {
            let v = Exponent::new(v, den);
            let mut terms = vec![(
                v,
                BigRational::new(BigInt::from(lead_n), BigInt::from(lead_d)),
            )];
            for (k, n, d) in rest {
                terms.push((
                    v + Exponent::new(k, den),
                    BigRational::new(BigInt::from(n), BigInt::from(d)),
                ));
            }
            LcRational::from_terms(terms, ExtExp::Infinity)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inverse_is_exact_below_the_horizon(x in series()) {
        let y = inverse_to(&x, ExtExp::int(10)).unwrap();
        let residual = &(&x * &y) - &LcRational::one();
        prop_assert!(residual.is_zero());
        prop_assert_eq!(y.valuation(), ExtExp::Finite(-x.valuation().finite().unwrap()));
    }

    #[test]
    fn float_inverse_terminates_despite_rounding(x in series()) {
        let xf = x.to_complex();
        let y = inverse_to(&xf, ExtExp::int(10)).unwrap();
        let exact = inverse_to(&x, ExtExp::int(10)).unwrap().to_complex();
        for (q, c) in exact.terms() {
            prop_assert!((y.coeff(q) - c).norm() <= 1e-9 * c.norm().max(1.0));
        }
    }

    #[test]
    fn rational_square_root_of_a_square(x in series()) {
        let sq = &x * &x;
        let r = nth_root_to(&sq, 2, ExtExp::int(12)).unwrap();
        let expected = if x.signum().unwrap().is_lt() { -&x } else { x.clone() };
        prop_assert!((&r - &expected).is_zero());
    }

    #[test]
    fn quadratic_roots_factor_back(a in series(), b in series()) {
        let (a, b) = (a.to_complex(), b.to_complex());
        let p = LcPolynomial::from_roots(&[(a.clone(), 1), (b.clone(), 1)]);
        let target = Exponent::from_integer(6);
        let roots = poly_roots(&p, target).unwrap();
        prop_assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<usize>(), 2);
        for r in &roots {
            prop_assert!(r.residual_valuation >= ExtExp::Finite(target));
        }
    }
}

#[test]
fn small_terms_survive_next_to_large_ones() {
    // a tiny low-order coefficient must not be mistaken for rounding noise
    let x = LcComplex::from_terms(
        [
            (Exponent::from_integer(1), Complex64::new(1e-6, 0.0)),
            (Exponent::from_integer(5), Complex64::new(1e12, 0.0)),
        ],
        ExtExp::Infinity,
    );
    let y = &x + &LcComplex::one();
    assert_eq!(
        y.coeff(Exponent::from_integer(1)),
        Complex64::new(1e-6, 0.0)
    );
    let z = &x * &x;
    assert_eq!(
        z.coeff(Exponent::from_integer(2)),
        Complex64::new(1e-12, 0.0)
    );
}

#[test]
fn cancellation_noise_is_dropped() {
    let a = LcComplex::from_terms(
        [(Exponent::from_integer(0), Complex64::new(0.1 + 0.2, 0.0))],
        ExtExp::Infinity,
    );
    let b = LcComplex::from_terms(
        [(Exponent::from_integer(0), Complex64::new(0.3, 0.0))],
        ExtExp::Infinity,
    );
    assert!((&a - &b).is_zero());
}

#[test]
fn roots_with_growing_coefficients_lift_to_target() {
    // x² − (r^(4/3) − 4r^(5/3))x − 3r² − 4r^(8/3) + 9r^(10/3) + 6r⁴
    let c = |terms: &[(i64, i64, f64)]| {
        LcComplex::from_terms(
            terms
                .iter()
                .map(|&(n, d, v)| (Exponent::new(n, d), Complex64::new(v, 0.0))),
            ExtExp::Infinity,
        )
    };
    let p = LcPolynomial::new(vec![
        c(&[(2, 1, -3.0), (8, 3, -4.0), (10, 3, 9.0), (4, 1, 6.0)]),
        c(&[(4, 3, -1.0), (5, 3, 4.0)]),
        LcComplex::one(),
    ]);
    let target = Exponent::from_integer(8);
    let roots = poly_roots(&p, target).unwrap();
    assert_eq!(roots.len(), 2);
    let sum = &roots[0].root + &roots[1].root;
    let expected = c(&[(4, 3, 1.0), (5, 3, -4.0)]);
    for (q, d) in (&sum - &expected).terms() {
        assert!(
            q >= target || d.norm() < 1e-8,
            "sum of roots off by {d} at {q}"
        );
    }
}
