use asym_core::asym::{pair, CompactBox, Domain};
use asym_core::lc::Exponent;
use asym_core::mollify::{
    build_mollifier, convergence_rate, embed_distribution, sup_rate, DistributionSpec, TestFunction,
};
use asym_core::smooth::Smooth;

const RHOS: [f64; 3] = [1e-1, 3e-2, 1e-2];

fn gauss_cos() -> Smooth {
    let x = Smooth::var(0);
    &(-&(&x * &x)).exp() * &x.cos()
}

#[test]
fn smooth_embedding_rate_is_n_plus_one() {
    let omega = Domain::interval(-3.0, 3.0);
    let k = CompactBox::interval(-2.0, 2.0, 201);
    for n in 1..=3 {
        let r = sup_rate(&gauss_cos(), &omega, &k, &RHOS, n).unwrap();
        let s = r.slope().expect("measurable rate");
        println!("n={n}\n{r}");
        assert!((s - (n as f64 + 1.0)).abs() <= 0.3, "n={n}: slope {s}");
    }
}

#[test]
fn delta_pairing_rate_is_three_for_n_two() {
    let omega = Domain::interval(-3.0, 3.0);
    let tau = TestFunction::bump(&[0.2], &[1.0]);
    let r = convergence_rate(
        &DistributionSpec::DeltaAt(vec![0.0]),
        &tau,
        &omega,
        &RHOS,
        2,
    )
    .unwrap();
    println!("{r}");
    let s = r.slope().unwrap();
    assert!((s - 3.0).abs() <= 0.3, "slope {s}");
}

#[test]
fn heaviside_pairing_rate_is_three_for_n_two() {
    let omega = Domain::interval(-3.0, 3.0);
    let tau = TestFunction::bump(&[0.2], &[1.0]);
    let r = convergence_rate(
        &DistributionSpec::Heaviside { axis: 0 },
        &tau,
        &omega,
        &RHOS,
        2,
    )
    .unwrap();
    println!("{r}");
    let s = r.slope().unwrap();
    assert!((s - 3.0).abs() <= 0.3, "slope {s}");
}

#[test]
fn delta_squared_scaling() {
    let omega = Domain::interval(-3.0, 3.0);
    let tau = TestFunction::bump(&[0.2], &[1.0]);
    let m = build_mollifier(2, 1).unwrap();
    for rho in [1e-2, 1e-3] {
        let e = embed_distribution(&DistributionSpec::DeltaAt(vec![0.0]), &omega, rho, 2).unwrap();
        let sq = e.mul(&e).unwrap();
        let p = pair(&sq, &tau).unwrap().coeff(Exponent::from_integer(0)).re;
        let ratio = p * rho / (tau.value(&[0.0]).unwrap() * m.square_integral());
        println!("rho={rho} ratio={ratio}");
        assert!((0.9..=1.1).contains(&ratio), "{ratio}");
    }
}

#[test]
fn l1_norms_are_reported() {
    for n in 0..=6 {
        let m = build_mollifier(n, 1).unwrap();
        println!("n={n} l1={} m_n+1={}", m.l1_norm, m.factor_moment(n + 1));
        assert!(m.l1_norm >= 1.0 - 1e-12);
    }
}
