use std::f64::consts::{E, PI};

use kepler2d::quadrature::{integrate_finite, integrate_oscillatory_semiinfinite, SphereGrid};
use kepler2d::specfun::{assoc_laguerre, assoc_legendre, bessel_j, spherical_harmonic};
use num_complex::Complex64;

fn relation_integrand(n: u32, m: u32, x: f64) -> impl Fn(f64) -> f64 {
    move |y: f64| {
        assoc_legendre(n, m, (1.0 - y) / (1.0 + y)).unwrap() * bessel_j(m as i32, x * y.sqrt()).unwrap()
            / (1.0 + y).powf(1.5)
    }
}

fn relation_rhs(n: u32, m: u32, x: f64) -> f64 {
    let sign = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * (2.0 * x).powi(m as i32) * (-x).exp() * assoc_laguerre(n - m, 2 * m, 2.0 * x).unwrap() / (f64::from(n) + 0.5)
}

#[test]
fn tail_of_algebraic_integrand() {
    let r = integrate_finite(|y: f64| (1.0 + y).powf(-1.5), 0.0, 1e6, 1e-12).unwrap();
    assert!((r.value - (2.0 - 2.0 / (1.0f64 + 1e6).sqrt())).abs() < 1e-11);
    assert!((r.value - (2.0 - 2e-3)).abs() < 1e-6);
}

#[test]
fn oscillatory_examples() {
    let r = integrate_oscillatory_semiinfinite(relation_integrand(0, 0, 1.0), 0, 1.0, 1e-12).unwrap();
    assert!((r.value - 2.0 / E).abs() < 1e-11);
    let r = integrate_oscillatory_semiinfinite(relation_integrand(1, 0, 0.5), 0, 0.5, 1e-10).unwrap();
    assert!(r.value.abs() < 1e-10);
    let r = integrate_oscillatory_semiinfinite(relation_integrand(1, 1, 1.0), 1, 1.0, 1e-10).unwrap();
    assert!((r.value + 4.0 / (3.0 * E)).abs() < 1e-10);
}

#[test]
fn error_estimate_bounds_true_error() {
    for (n, m) in [(0, 0), (1, 0), (1, 1), (3, 2), (5, 0), (6, 4)] {
        for x in [0.1, 1.0, 5.0] {
            let r = integrate_oscillatory_semiinfinite(relation_integrand(n, m, x), m as i32, x, 1e-9).unwrap();
            let err = (r.value - relation_rhs(n, m, x)).abs();
            assert!(r.converged);
            assert!(
                err <= r.abs_error_estimate.max(1e-14),
                "n={n} m={m} x={x}: {err} > {}",
                r.abs_error_estimate
            );
        }
    }
}

#[test]
fn halving_tolerance_does_not_increase_error() {
    for (n, m, x) in [(1, 1, 1.0), (4, 2, 0.5), (2, 0, 2.0)] {
        let mut previous = f64::INFINITY;
        let mut tol = 1e-4;
        while tol > 1e-11 {
            let r = integrate_oscillatory_semiinfinite(relation_integrand(n, m, x), m as i32, x, tol).unwrap();
            assert!(r.abs_error_estimate <= previous, "n={n} m={m} x={x} tol={tol}");
            previous = r.abs_error_estimate;
            tol /= 2.0;
        }
    }
}

#[test]
fn sphere_grid_examples() {
    let g = SphereGrid::new(1);
    assert!((g.weights.iter().sum::<f64>() - 4.0 * PI).abs() < 1e-12);

    let g = SphereGrid::new(8);
    let v = g.integrate(|t, p| spherical_harmonic(1, 0, t, p).unwrap());
    assert!(v.norm() < 1e-14);

    let g = SphereGrid::new(16);
    let v = g.integrate(|t, p| Complex64::new(spherical_harmonic(3, 2, t, p).unwrap().norm_sqr(), 0.0));
    assert!((v.re - 1.0).abs() < 1e-12);
}

#[test]
fn harmonics_are_orthonormal() {
    let g = SphereGrid::new(13);
    for l in 0..=6u32 {
        for lp in 0..=6u32 {
            for m in -(l as i32)..=(l as i32) {
                for mp in -(lp as i32)..=(lp as i32) {
                    let v = g.integrate(|t, p| {
                        spherical_harmonic(l, m, t, p).unwrap() * spherical_harmonic(lp, mp, t, p).unwrap().conj()
                    });
                    let expected = if l == lp && m == mp { 1.0 } else { 0.0 };
                    assert!((v - Complex64::new(expected, 0.0)).norm() < 1e-12, "{l} {m} {lp} {mp}");
                }
            }
        }
    }
}
