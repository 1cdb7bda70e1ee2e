//! Special functions against independent quadratures of their integral
//! definitions.

use std::f64::consts::PI;

use dephase_ee::quadrature::{integrate, integrate_panels, panel_points, QuadOptions};
use dephase_ee::special::{
    gamma, ln_gamma, lower_incomplete_gamma, poisson_tail, sine_integral, upper_incomplete_gamma,
    CoherentAmplitudes,
};
use num_complex::Complex64;
use proptest::prelude::*;

/// `gamma(a, z)` along the ray `t = z u`, with `u = v^{1/a}` removing the
/// endpoint singularity: `(z^a / a) int_0^1 exp(-z v^{1/a}) dv`.
fn incomplete_gamma_by_path(a: f64, z: Complex64) -> Complex64 {
    let width = (1.0 / (4.0 * z.norm().max(1.0))).min(0.05);
    let pts = panel_points(0.0, 1.0, width, &[]);
    let integral = integrate_panels(
        |v: f64| (-z * v.powf(1.0 / a)).exp(),
        &pts,
        QuadOptions::default(),
    )
    .unwrap()
    .value;
    (z.ln() * a).exp() / a * integral
}

#[test]
fn lower_incomplete_gamma_matches_path_quadrature() {
    for &a in &[1.0 / 3.0, 0.5, 1.0, 2.0, 3.5] {
        for &z in &[
            Complex64::new(0.0, 0.3),
            Complex64::new(0.0, 2.0),
            Complex64::new(0.0, 7.0),
            Complex64::new(0.0, 15.0),
            Complex64::new(0.0, 40.0),
            Complex64::new(1.5, 3.0),
            Complex64::new(8.0, 0.0),
        ] {
            let closed = lower_incomplete_gamma(a, z).unwrap();
            let path = incomplete_gamma_by_path(a, z);
            assert!(
                (closed - path).norm() <= 1e-10 * path.norm().max(1.0),
                "a = {a}, z = {z}: {closed} vs {path}"
            );
        }
    }
}

#[test]
fn incomplete_gamma_reference_values() {
    let cases = [
        (
            0.5,
            2.0,
            Complex64::new(2.33281740761975792, 0.33756998496891532),
        ),
        (
            1.0 / 3.0,
            50.0,
            Complex64::new(2.62597919566088442, 0.05118886082355370),
        ),
        (
            2.0,
            7.0,
            Complex64::new(-4.35280844537482827, -4.62032918168434338),
        ),
    ];
    for (a, y, expected) in cases {
        let got = lower_incomplete_gamma(a, Complex64::new(0.0, y)).unwrap();
        assert!((got - expected).norm() < 1e-12, "a = {a}, y = {y}: {got}");
        let upper = upper_incomplete_gamma(a, Complex64::new(0.0, y)).unwrap();
        assert!((got + upper - gamma(a).unwrap()).norm() < 1e-12);
    }
}

#[test]
fn gamma_against_euler_integral() {
    for &u in &[0.3, 0.5, 1.7, 2.5, 6.2] {
        let opts = QuadOptions::default();
        // t = v^{1/u} turns t^{u-1} dt into dv / u.
        let near = integrate(|v: f64| (-v.powf(1.0 / u)).exp() / u, 0.0, 1.0, opts)
            .unwrap()
            .value;
        let far = integrate(|t: f64| t.powf(u - 1.0) * (-t).exp(), 1.0, 80.0, opts)
            .unwrap()
            .value;
        let g = gamma(u).unwrap();
        assert!((g - near - far).abs() < 1e-12 * g, "u = {u}");
        assert!((ln_gamma(u).unwrap() - g.ln()).abs() < 1e-13);
    }
    assert!((gamma(0.5).unwrap() - PI.sqrt()).abs() < 1e-15);
}

#[test]
fn sine_integral_against_quadrature() {
    let sinc = |t: f64| if t == 0.0 { 1.0 } else { t.sin() / t };
    for &x in &[0.1, 1.0, 3.9, 4.1, 10.0, 37.5, 100.0] {
        let pts = panel_points(0.0, x, 1.0, &[]);
        let direct = integrate_panels(sinc, &pts, QuadOptions::default())
            .unwrap()
            .value;
        assert!((sine_integral(x) - direct).abs() < 1e-13, "x = {x}");
        assert_eq!(sine_integral(-x), -sine_integral(x));
    }
    assert!((sine_integral(100.0) - 1.56222546688905629).abs() < 1e-15);
}

#[test]
fn coherent_amplitudes_match_poisson() {
    let alpha = Complex64::new(0.6, -0.8);
    let c = CoherentAmplitudes::with_tail(alpha, 1e-12);
    assert_eq!(c.dim(), 15);
    let kept: f64 = c.amplitudes().iter().map(|z| z.norm_sqr()).sum();
    assert!((1.0 - kept - poisson_tail(1.0, 15)).abs() < 1e-15);
    let mut fact = 1.0;
    for (n, z) in c.amplitudes().iter().enumerate() {
        if n > 0 {
            fact *= n as f64;
        }
        let expected = (-0.5f64).exp() * alpha.powu(n as u32) / fact.sqrt();
        assert!((z - expected).norm() < 1e-15);
    }
}

proptest! {
    #[test]
    fn incomplete_gamma_recurrence(a in 0.2f64..4.0, y in 0.01f64..60.0) {
        // gamma(a + 1, z) = a gamma(a, z) - z^a e^{-z}
        let z = Complex64::new(0.0, y);
        let lhs = lower_incomplete_gamma(a + 1.0, z).unwrap();
        let rhs = a * lower_incomplete_gamma(a, z).unwrap() - (z.ln() * a - z).exp();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
    }

    #[test]
    fn sine_integral_is_bounded(x in 0.0f64..1e4) {
        let si = sine_integral(x);
        prop_assert!(si >= 0.0 && si <= 1.8519370519824662);
    }
}
