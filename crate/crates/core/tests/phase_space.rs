use kerr_ads_qnf::geometry::{delta_r, dual_metric_coeffs, find_horizons, BlackHoleParams, ExtensionVariant};
use kerr_ads_qnf::phase_space::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn bh(a: f64, m: f64) -> BlackHoleParams {
    BlackHoleParams::new(a, m, 1.5).unwrap()
}

/// Canonical Hamilton field `(∂_ξ σ₂, −∂_x σ₂)` by central differences.
fn canonical_field(p: &BlackHoleParams, x: [f64; 3], xi: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let h = 1e-6;
    let mut dx = [0.0; 3];
    let mut dxi = [0.0; 3];
    for k in 0..3 {
        let mut xi_p = xi;
        let mut xi_m = xi;
        xi_p[k] += h;
        xi_m[k] -= h;
        dx[k] = (principal(p, x[0], x[1], xi_p) - principal(p, x[0], x[1], xi_m)) / (2.0 * h);
        let mut x_p = x;
        let mut x_m = x;
        x_p[k] += h;
        x_m[k] -= h;
        dxi[k] = -(principal(p, x_p[0], x_p[1], xi) - principal(p, x_m[0], x_m[1], xi)) / (2.0 * h);
    }
    (dx, dxi)
}

#[test]
fn rescaled_field_matches_canonical_differences() {
    for (a, m) in [(0.0, 1.0), (0.3, 1.0), (0.6, 2.0)] {
        let p = bh(a, m);
        for &(r, theta, xi) in &[
            (1.7, 0.8, [1.3, 0.4, -0.7]),
            (3.0, 2.1, [-0.6, 1.1, 0.2]),
            (0.9, 1.4, [2.0, -0.3, 0.5]),
        ] {
            let pt = PhasePoint::from_covector(r, theta, 0.3, xi[0], xi[1], xi[2]).unwrap();
            let (dx, dxi) = canonical_field(&p, [r, theta, 0.3], xi);
            let rho = pt.rho;
            let sg = pt.sigma as f64;
            // ρ = σ/ξ_r and ξ̂ = ρ ξ, then the whole field is scaled by ρ
            let rho_dot = -sg * rho * rho * dxi[0];
            let expect = [
                rho * dx[0],
                rho * dx[1],
                rho * dx[2],
                rho * rho_dot,
                rho * (rho * dxi[1] + xi[1] * rho_dot),
                rho * (rho * dxi[2] + xi[2] * rho_dot),
            ];
            let got = hamilton_field(&p, &pt);
            for k in 0..6 {
                assert!(
                    (got[k] - expect[k]).abs() < 1e-6 * (1.0 + expect[k].abs()),
                    "a={a} r={r} component {k}: {} vs {}",
                    got[k],
                    expect[k]
                );
            }
        }
    }
}

#[test]
fn rho1_derivative_matches_flow_difference() {
    let p = bh(0.3, 1.0);
    let v = ExtensionVariant::default();
    let z = Complex64::new(0.0, 0.0);
    for pt in [
        PhasePoint::new(1.2, 0.9, 0.0, 0.01, 0.02, -0.03, 1).unwrap(),
        PhasePoint::new(0.95, 2.0, 0.0, 0.0, 0.05, 0.01, -1).unwrap(),
        PhasePoint::new(2.0, 1.5, 0.0, 0.2, 0.3, 0.1, 1).unwrap(),
    ] {
        let f = hamilton_field(&p, &pt);
        let h = 1e-6;
        let shift = |s: f64| {
            PhasePoint::new(
                pt.r + s * f[0],
                pt.theta + s * f[1],
                pt.phi + s * f[2],
                (pt.rho + s * f[3]).abs(),
                pt.xi_hat_theta + s * f[4],
                pt.xi_hat_phi + s * f[5],
                pt.sigma,
            )
            .unwrap()
        };
        let r1 = |x: &PhasePoint| symbol(&p, &v, x, z).rho1;
        // ρ may not cross zero, so use a one-sided stencil there
        let fd = if pt.rho == 0.0 {
            (r1(&shift(h)) - r1(&pt)) / h
        } else {
            (r1(&shift(h)) - r1(&shift(-h))) / (2.0 * h)
        };
        let exact = rho1_derivative(&p, &pt);
        assert!((fd - exact).abs() < 1e-4 * (1.0 + exact.abs()), "{fd} vs {exact}");
    }
}

#[test]
fn characteristic_samples_lie_on_the_characteristic_set() {
    let p = bh(0.5, 1.0);
    let v = ExtensionVariant::default();
    let pts = sample_characteristic(&p, 50, 0.1, 3, 0.05).unwrap();
    assert_eq!(pts.len(), 50);
    for x in &pts {
        assert_eq!(x.rho, 0.0);
        let s = symbol(&p, &v, x, Complex64::new(0.0, 0.0));
        assert!(s.p.abs() < 1e-9, "σ₂ = {}", s.p);
        let dr = delta_r(&p, x.r);
        assert!(dr > -0.1 && dr <= 0.25 + 1e-12);
    }
}

#[test]
fn coarse_region_is_elliptic() {
    let rep = characteristic_bound_check(&bh(0.5, 1.0), 2000, 1).unwrap();
    assert_eq!(rep.violations, 0);
    assert!(rep.n_coarse > 0);
    assert!(rep.min_normalized_coarse > 0.0);
}

#[test]
fn small_nontrapping_audit_classifies_everything() {
    let opts = AuditOptions { n_samples: 20, seed: 4, ..AuditOptions::default() };
    let rep = nontrapping_audit(&bh(0.3, 1.0), &opts).unwrap();
    assert_eq!(rep.n_samples, 20);
    assert_eq!(rep.fraction_classified, 1.0);
    assert!(rep.failures.is_empty());
    assert!(rep.worst_margin > 0.0);
}

#[test]
fn flow_records_times_with_trajectory() {
    let p = bh(0.3, 1.0);
    let start = sample_characteristic(&p, 1, 0.1, 7, 0.05).unwrap()[0];
    let out = integrate_flow(&p, &start, Direction::Forward, &FlowOptions::default()).unwrap();
    assert_ne!(out.terminal, Terminal::MaxTime);
    assert_eq!(out.times.len(), out.trajectory.len());
    assert!(out.times.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(out.trajectory[0], start);
}

#[test]
fn symbol_is_the_dual_metric_on_the_shifted_covector() {
    let p = bh(0.4, 1.0);
    let v = ExtensionVariant::default();
    for &(r, theta, xi, z) in &[
        (1.5, 0.7, [0.8, -0.3, 1.1], Complex64::new(0.6, -0.4)),
        (0.9, 2.2, [-1.4, 0.5, 0.0], Complex64::new(-1.0, 0.3)),
        (4.0, 1.3, [0.2, 0.9, -0.6], Complex64::new(0.0, 0.0)),
    ] {
        let g = dual_metric_coeffs(&p, r, theta, &v).unwrap();
        let c = |x: f64| Complex64::new(x, 0.0);
        let want = g.contract([-z, c(xi[0]), c(xi[1]), c(xi[2])]);
        let got = symbol_finite(&p, &v, r, theta, xi, z);
        assert!((got.p - want.re).abs() < 1e-12 * (1.0 + want.norm()));
        assert!((got.q + want.im).abs() < 1e-12 * (1.0 + want.norm()));
        if z.im == 0.0 {
            assert_eq!(got.q, 0.0);
        }
        if z.norm() == 0.0 {
            assert!((got.p - principal(&p, r, theta, xi)).abs() < 1e-12 * (1.0 + got.p.abs()));
        }
    }
}

fn on_radial_set(p: &BlackHoleParams, sigma: i8) -> PhasePoint {
    let h = find_horizons(p).unwrap();
    PhasePoint::new(h.r_plus, 1.1, 0.0, 0.0, 0.0, 0.0, sigma).unwrap()
}

#[test]
fn radial_set_is_stationary() {
    let p = bh(0.3, 1.0);
    let x = on_radial_set(&p, 1);
    // only the azimuthal rotation survives
    let f = hamilton_field(&p, &x);
    assert!(f.iter().enumerate().all(|(k, v)| k == 2 || v.abs() < 1e-12), "{f:?}");
    let out = integrate_flow(&p, &x, Direction::Forward, &FlowOptions::default()).unwrap();
    assert_eq!(out.terminal, Terminal::ConvergedToLplus);
    assert_eq!(out.time, 0.0);
}

#[test]
fn perturbed_radial_set_converges_backward() {
    let p = bh(0.3, 1.0);
    let mut x = on_radial_set(&p, 1);
    x.r += 1e-3;
    x.xi_hat_theta = 1e-3;
    let out = integrate_flow(&p, &x, Direction::Backward, &FlowOptions::default()).unwrap();
    assert_eq!(out.terminal, Terminal::ConvergedToLplus);
    let end = out.end();
    assert!((end.r - x.r).abs() < 1e-2);
    assert!(end.rho == 0.0);
}

#[test]
fn starting_behind_the_boundary_exits_immediately() {
    let p = bh(0.3, 1.0);
    let h = find_horizons(&p).unwrap();
    let r = kerr_ads_qnf::geometry::inner_radius(&p, &h, 0.2).unwrap();
    let x = PhasePoint::new(r, 1.0, 0.0, 0.1, 0.2, 0.0, 1).unwrap();
    let out = integrate_flow(&p, &x, Direction::Forward, &FlowOptions::default()).unwrap();
    assert_eq!(out.terminal, Terminal::ExitedDeltaRegion);
    assert_eq!(out.time, 0.0);
}

#[test]
fn characteristic_flow_stays_characteristic_and_reverses() {
    let p = bh(0.5, 1.0);
    let v = ExtensionVariant::default();
    let z = Complex64::new(0.0, 0.0);
    let start = sample_characteristic(&p, 1, 0.1, 11, 0.05).unwrap()[0];
    let opts = FlowOptions { t_max: 0.02, ..FlowOptions::default() };
    let fwd = integrate_flow(&p, &start, Direction::Forward, &opts).unwrap();
    assert_eq!(fwd.terminal, Terminal::MaxTime);
    for x in &fwd.trajectory {
        let s = symbol(&p, &v, x, z);
        assert!(s.p.abs() < 1e-8 * s.rho1.max(1e-3), "drift {}", s.p);
    }
    let back_opts = FlowOptions { t_max: fwd.time, ..opts };
    let back = integrate_flow(&p, fwd.end(), Direction::Backward, &back_opts).unwrap();
    let e = back.end();
    for (u, w) in [(e.r, start.r), (e.theta, start.theta), (e.rho, start.rho), (e.xi_hat_theta, start.xi_hat_theta)] {
        assert!((u - w).abs() < 1e-7, "{u} vs {w}");
    }
}

#[test]
fn static_source_sink_constant() {
    let h = find_horizons(&bh(0.0, 1.0)).unwrap();
    assert!((2.0 * h.d_delta_r_plus - 8.0).abs() < 1e-12);
    let rep = source_sink_audit(&bh(0.0, 1.0), &AuditOptions { n_samples: 200, seed: 2, ..AuditOptions::default() }).unwrap();
    assert!(rep.failures.is_empty());
}

#[test]
fn source_sink_remainder_is_three_halves_order() {
    let p = bh(0.3, 1.0);
    let h = find_horizons(&p).unwrap();
    let ratio = |t: f64| {
        let x = PhasePoint::new(h.r_plus + 0.5 * t / h.d_delta_r_plus, 0.9, 0.0, 0.3 * t, 0.4 * t, 0.2 * t, 1).unwrap();
        let s = symbol(&p, &ExtensionVariant::default(), &x, Complex64::new(0.0, 0.0));
        // strip the quadratic part, 2∂Δ_r(ρ₁ + p̂₂), and keep the remainder
        let rest = rho1_derivative(&p, &x) - 2.0 * h.d_delta_r_plus * (s.rho1 + s.p2);
        rest / s.rho1.powf(1.5)
    };
    let (big, small) = (ratio(1e-3), ratio(1e-5));
    assert!(big.abs() > 1e-6);
    assert!((big - small).abs() < 0.05 * big.abs(), "{big} vs {small}");
}

proptest! {
    #[test]
    fn chart_symbol_is_rescaled_finite_symbol(
        r in 0.8f64..6.0,
        theta in 0.1f64..3.0,
        xr in prop_oneof![-3.0f64..-0.1, 0.1f64..3.0],
        xt in -2.0f64..2.0,
        xp in -2.0f64..2.0,
        zr in -2.0f64..2.0,
        zi in -2.0f64..2.0,
    ) {
        let p = bh(0.4, 1.0);
        let v = ExtensionVariant::default();
        let z = Complex64::new(zr, zi);
        let pt = PhasePoint::from_covector(r, theta, 0.0, xr, xt, xp).unwrap();
        let back = pt.covector().unwrap();
        for (u, w) in back.iter().zip([xr, xt, xp]) {
            prop_assert!((u - w).abs() < 1e-12 * (1.0 + w.abs()));
        }
        let fin = symbol_finite(&p, &v, r, theta, [xr, xt, xp], z);
        let chart = symbol(&p, &v, &pt, z);
        let k = pt.rho * pt.rho;
        let tol = 1e-10 * (1.0 + fin.p.abs() + fin.q.abs());
        prop_assert!((chart.p - k * fin.p).abs() < tol * k.max(1e-300) + 1e-12);
        prop_assert!((chart.q - k * fin.q).abs() < tol * k.max(1e-300) + 1e-12);
        prop_assert!((chart.rho1 - fin.rho1).abs() < 1e-10 * (1.0 + chart.rho1));
    }

    #[test]
    fn field_is_odd_under_momentum_reflection(
        r in 0.8f64..6.0, theta in 0.1f64..3.0, xt in -1.0f64..1.0, xp in -1.0f64..1.0,
    ) {
        let p = bh(0.4, 1.0);
        let x = PhasePoint::new(r, theta, 0.0, 0.0, xt, xp, 1).unwrap();
        let y = PhasePoint::new(r, theta, 0.0, 0.0, -xt, -xp, -1).unwrap();
        let fx = hamilton_field(&p, &x);
        let fy = hamilton_field(&p, &y);
        // σ₂ is even in ξ, so ẋ flips and the projective momenta follow
        for k in 0..3 {
            prop_assert!((fx[k] + fy[k]).abs() < 1e-12 * (1.0 + fx[k].abs()));
        }
    }

    #[test]
    fn field_does_not_depend_on_phi(r in 0.8f64..6.0, theta in 0.1f64..3.0, phi in -6.0f64..6.0, rho in 0.0f64..1.0) {
        let p = bh(0.4, 1.0);
        let x = PhasePoint::new(r, theta, 0.0, rho, 0.3, -0.2, -1).unwrap();
        let y = PhasePoint { phi, ..x };
        prop_assert_eq!(hamilton_field(&p, &x), hamilton_field(&p, &y));
    }
}
