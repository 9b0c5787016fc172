use chen_core::numerics::{iterated_integral, OneForm, PiecewisePath, SolverOptions, C};
use chen_core::special::{
    integrand_closure_check, li_integral, li_series, mpl11_integral, mpl11_series, zeta, zeta_value, Mpl11Config,
};
use std::f64::consts::PI;

fn opts() -> SolverOptions {
    SolverOptions { tol: 1e-12, ..Default::default() }
}

// direct double sum, independent of the harmonic-number recursion
fn double_series(x: C, y: C) -> C {
    let mut s = C::new(0.0, 0.0);
    for k2 in 2..400 {
        for k1 in 1..k2 {
            s += x.powi(k1) * y.powi(k2) / (k1 * k2) as f64;
        }
    }
    s
}

#[test]
fn polylog_methods_agree() {
    let xs = [
        C::new(0.5, 0.0),
        C::new(0.3, 0.2),
        C::new(-0.6, 0.1),
        C::new(0.0, 0.7),
        C::new(0.45, -0.45),
    ];
    for k in 1..=4 {
        for &x in &xs {
            let s = li_series(k, x).unwrap();
            let i = li_integral(k, x, &opts()).unwrap();
            assert!((s.value - i.value).norm() < 1e-8, "k={k} x={x}: {} vs {}", s.value, i.value);
        }
    }
    let l1 = li_series(1, C::new(0.5, 0.0)).unwrap();
    assert!((l1.value.re - 2f64.ln()).abs() < 1e-14);
    assert!(li_series(2, C::new(1.0, 0.0)).is_err());
    assert!(li_integral(0, C::new(0.5, 0.0), &opts()).is_err());
}

#[test]
fn li2_at_one_half_closed_form() {
    let expected = PI * PI / 12.0 - 2f64.ln().powi(2) / 2.0;
    let v = li_integral(2, C::new(0.5, 0.0), &opts()).unwrap();
    assert!((v.value.re - expected).abs() < 1e-10);
}

#[test]
fn zeta_values() {
    let (z2, _) = zeta_value(2).unwrap();
    assert!((z2 - PI * PI / 6.0).abs() < 1e-12);
    let (z3, _) = zeta_value(3).unwrap();
    assert!((z3 - 1.202_056_903_159_594_3).abs() < 1e-12);
    let (z4, _) = zeta_value(4).unwrap();
    assert!((z4 - PI.powi(4) / 90.0).abs() < 1e-12);
    let values: Vec<f64> = (2..=8).map(|k| zeta_value(k).unwrap().0).collect();
    assert!(values.windows(2).all(|w| w[0] > w[1]));
    let r = zeta(2).unwrap();
    assert!(r.approach_monotone);
    // ζ(2) − Li₂(1−h) = log h · log(1−h) + Li₂(h)
    for &(h, v) in &r.approach {
        let gap = h.ln() * (1.0 - h).ln() + li_series(2, C::new(h, 0.0)).unwrap().value.re;
        assert!((r.value - v - gap).abs() < 1e-12, "h={h}");
    }
    assert!(r.value - r.approach[1].1 < 1.1e-3);
}

#[test]
fn mpl11_matches_double_series() {
    let cfg = Mpl11Config::default();
    for (x, y) in [
        (C::new(0.3, 0.0), C::new(0.4, 0.0)),
        (C::new(0.2, 0.0), C::new(0.2, 0.0)),
        (C::new(-0.5, 0.1), C::new(0.3, -0.2)),
        (C::new(0.6, 0.0), C::new(-0.5, 0.0)),
        (C::new(0.1, 0.4), C::new(0.5, 0.3)),
    ] {
        let oracle = double_series(x, y);
        let s = mpl11_series(x, y).unwrap();
        assert!((s.value - oracle).norm() < 1e-13, "{x},{y}");
        let i = mpl11_integral(x, y, &cfg, &opts()).unwrap();
        assert!((i.value - oracle).norm() < 1e-6, "{x},{y}: {} vs {}", i.value, oracle);
    }
    let zero = mpl11_integral(C::new(0.3, 0.0), C::new(0.0, 0.0), &cfg, &opts()).unwrap();
    assert!(zero.value.norm() < 1e-14);
}

#[test]
fn closure_relation() {
    let r = integrand_closure_check(&[
        (C::new(0.3, 0.0), C::new(0.4, 0.0)),
        (C::new(0.5, 0.1), C::new(-0.2, 0.0)),
        (C::new(2.0, 0.0), C::new(3.0, 0.0)),
    ])
    .unwrap();
    assert!(r.symbolically_zero);
    assert!(r.pass, "{r:?}");
    assert!(integrand_closure_check(&[(C::new(1.0, 0.0), C::new(0.5, 0.0))]).is_err());
}

#[test]
fn li1_square_shuffle() {
    // ∫(a,a) = li_1(x)²/2 with a = x dt/(1 − x t) on [0, 1]
    let x = C::new(0.4, 0.3);
    let a = OneForm::parse("rat(0.4+0.3i, 1-(0.4+0.3i)*z1)*dz1").unwrap();
    let path = PiecewisePath::line(&[C::new(0.0, 0.0)], &[C::new(1.0, 0.0)]).unwrap();
    let aa = iterated_integral(&[a.clone(), a], &path, &opts()).unwrap();
    let l1 = li_series(1, x).unwrap().value;
    assert!((aa.value - l1 * l1 / 2.0).norm() < 1e-8);
}
