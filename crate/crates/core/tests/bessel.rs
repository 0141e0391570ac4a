use kerr_ads_qnf::bessel_bc::traces::MAX_FIT_CONDITION;
use kerr_ads_qnf::bessel_bc::*;
use num_complex::Complex64;
use proptest::prelude::*;

/// `K_ν(w) = ∫₀^∞ e^{−w cosh t} cosh(νt) dt`, trapezoid rule on an even
/// integrand, which converges geometrically.
fn k_integral(nu: f64, w: Complex64) -> Complex64 {
    let t_end = (60.0 / w.re).acosh() + 1.0;
    let h = 2e-3;
    let n = (t_end / h).ceil() as usize;
    let mut sum = (-w).exp() * 0.5;
    for i in 1..=n {
        let t = i as f64 * h;
        sum += (-w * t.cosh()).exp() * (nu * t).cosh();
    }
    sum * h
}

#[test]
fn bessel_k_matches_integral_representation() {
    for nu in [0.0, 0.3, 0.5, 0.9, 1.5, 2.7] {
        for &(re, im) in &[(0.2, 0.0), (0.7, 0.4), (1.9, -1.3), (4.0, 3.0), (9.0, -2.0)] {
            let w = Complex64::new(re, im);
            let got = bessel_k(nu, w).unwrap();
            let want = k_integral(nu, w);
            assert!((got - want).norm() < 1e-11 * want.norm().max(1e-300), "ν={nu} w={w}: {got} vs {want}");
        }
    }
}

#[test]
fn bessel_k_satisfies_order_recurrence() {
    for &(re, im) in &[(0.4, 0.2), (2.5, -1.0), (6.0, 4.0)] {
        let w = Complex64::new(re, im);
        for nu in [1.2, 2.5] {
            let lhs = bessel_k(nu + 1.0, w).unwrap();
            let rhs = bessel_k(nu - 1.0, w).unwrap() + bessel_k(nu, w).unwrap() * (2.0 * nu) / w;
            assert!((lhs - rhs).norm() < 1e-11 * lhs.norm());
        }
    }
}

#[test]
fn model_coefficients_give_small_argument_behaviour() {
    for nu in [0.25, 0.5, 0.8] {
        let k = Complex64::new(1.3, -0.6);
        let (am, ap) = model_coefficients(nu, k);
        let x = 1e-3;
        let exact = bessel_k(nu, k * x).unwrap() * x.sqrt();
        let approx = am * x.powf(0.5 - nu) + ap * x.powf(0.5 + nu);
        // corrections are O(x²) relative to each branch
        assert!((exact - approx).norm() < 1e-5 * am.norm() * x.powf(0.5 - nu), "ν={nu}");
    }
}

#[test]
fn trace_fit_recovers_synthetic_traces() {
    let nu = 0.4;
    let (b0, b1) = (Complex64::new(1.2, -0.3), Complex64::new(0.5, 0.8));
    let (d0, d1) = (Complex64::new(-0.7, 0.2), Complex64::new(2.0, 0.0));
    let s = ladder(0.2);
    let u: Vec<Complex64> = s
        .iter()
        .map(|&x| (b0 + b1 * x * x) * x.powf(1.5 - nu) + (d0 + d1 * x * x) * x.powf(1.5 + nu))
        .collect();
    let fit = trace_fit(&s, &u, nu, TraceBasis::default()).unwrap();
    assert!((fit.gamma_minus - b0).norm() < 1e-10);
    assert!((fit.gamma_plus - d0 * (2.0 * nu)).norm() < 1e-9);
    assert!(fit.condition < MAX_FIT_CONDITION);
}

#[test]
fn trace_fit_rejects_short_input() {
    let s = [0.1, 0.05, 0.025];
    let u = [Complex64::new(1.0, 0.0); 3];
    assert!(matches!(trace_fit(&s, &u, 0.5, TraceBasis::default()), Err(BesselError::Domain(_))));
}

fn rows(bc: &BoundaryCondition) -> (Vec<Complex64>, Option<Vec<Complex64>>) {
    let d1 = [-5.5, 7.0, -2.5, 1.0];
    match boundary_rows(0.5, Some(bc), &d1).unwrap() {
        BoundaryClosure::Rows { lambda0, lambda1, exponent } => {
            assert_eq!(exponent, 1.0);
            (lambda0, lambda1)
        }
        other => panic!("expected explicit rows, got {other:?}"),
    }
}

#[test]
fn robin_with_zero_coefficient_is_neumann() {
    assert_eq!(rows(&BoundaryCondition::robin(0.5, 0.0)), rows(&BoundaryCondition::neumann(0.5)));
    let (r0, r1) = rows(&BoundaryCondition::lambda_robin(0.5, 2.0, 0.0));
    assert_eq!(r0, rows(&BoundaryCondition::robin(0.5, 2.0)).0);
    assert!(r1.unwrap().iter().all(|z| *z == Complex64::new(0.0, 0.0)));
}

#[test]
fn closures_follow_nu() {
    assert_eq!(boundary_rows(1.5, None, &[0.0; 3]).unwrap().exponent(), 3.0);
    assert!(boundary_rows(0.3, None, &[0.0; 3]).is_err());
    let d = BoundaryCondition::dirichlet(0.3);
    let n = BoundaryCondition::neumann(0.3);
    assert!((boundary_rows(0.3, Some(&d), &[0.0; 3]).unwrap().exponent() - 1.8).abs() < 1e-15);
    assert!((boundary_rows(0.3, Some(&n), &[0.0; 3]).unwrap().exponent() - 1.2).abs() < 1e-15);
    assert!(boundary_rows(-0.1, None, &[0.0; 3]).is_err());
}

#[test]
fn pure_branches_have_unit_traces() {
    let nu = 0.35;
    let s = ladder(0.2);
    let minus: Vec<Complex64> = s.iter().map(|&x| Complex64::new(x.powf(1.5 - nu), 0.0)).collect();
    let plus: Vec<Complex64> = s.iter().map(|&x| Complex64::new(x.powf(1.5 + nu), 0.0)).collect();
    let a = trace_fit(&s, &minus, nu, TraceBasis::default()).unwrap();
    let b = trace_fit(&s, &plus, nu, TraceBasis::default()).unwrap();
    assert!((a.gamma_minus - 1.0).norm() < 1e-10 && a.gamma_plus.norm() < 1e-9);
    assert!(b.gamma_minus.norm() < 1e-10 && (b.gamma_plus - 2.0 * nu).norm() < 1e-9);
}

#[test]
fn model_coefficient_ratio_has_closed_form() {
    use statrs::function::gamma::gamma;
    for nu in [0.2, 0.5, 0.75] {
        for k in [Complex64::new(1.0, 0.0), Complex64::new(0.4, -1.7), Complex64::new(2.2, 0.9)] {
            let (am, ap) = model_coefficients(nu, k);
            let want = -(k / 2.0).powf(2.0 * nu) * (gamma(1.0 - nu) / gamma(1.0 + nu));
            assert!((ap / am - want).norm() < 1e-12 * want.norm(), "ν={nu} k={k}");
        }
    }
}

#[test]
fn model_solution_solves_the_model_ode() {
    // x^{1/2}K_ν(kx) solves u'' = ((ν²−1/4)/x² + k²)u
    let h = 2e-3;
    for nu in [0.3, 1.5] {
        let k = Complex64::new(1.1, -0.4);
        let u = |x: f64| bessel_k(nu, k * x).unwrap() * x.sqrt();
        for x in [0.3, 1.0, 2.5] {
            let d2 = ((u(x + h) + u(x - h)) * 16.0 - u(x + 2.0 * h) - u(x - 2.0 * h) - u(x) * 30.0) / (12.0 * h * h);
            let rhs = u(x) * ((nu * nu - 0.25) / (x * x) + k * k);
            assert!((d2 - rhs).norm() < 1e-7 * rhs.norm().max(u(x).norm()), "ν={nu} x={x}: {d2} vs {rhs}");
        }
    }
}

proptest! {
    #[test]
    fn bessel_k_is_real_on_conjugation(nu in 0.0f64..3.0, re in 0.05f64..20.0, im in -10.0f64..10.0) {
        let w = Complex64::new(re, im);
        let a = bessel_k(nu, w).unwrap();
        let b = bessel_k(nu, w.conj()).unwrap();
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn bessel_k_decays_along_positive_axis(nu in 0.0f64..3.0, x in 0.05f64..15.0) {
        let k0 = bessel_k(nu, Complex64::new(x, 0.0)).unwrap();
        let k1 = bessel_k(nu, Complex64::new(x * 1.1, 0.0)).unwrap();
        prop_assert!(k0.re > k1.re && k1.re > 0.0);
        prop_assert!(k0.im.abs() <= 1e-14 * k0.re);
    }
}
