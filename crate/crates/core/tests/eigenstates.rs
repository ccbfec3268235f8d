use std::f64::consts::PI;

use kepler2d::eigenstates::{
    fourier_consistency, momentum_radial_factor, radial_factor, QuantumNumbers, RealSpacePoint,
};
use kepler2d::quadrature::integrate_semi_infinite;

fn radial_overlap(a: QuantumNumbers, b: QuantumNumbers) -> f64 {
    integrate_semi_infinite(|r| 2.0 * PI * radial_factor(a, r) * radial_factor(b, r) * r, 0.0, 1e-13)
        .unwrap()
        .value
}

#[test]
fn real_space_normalization() {
    for s in QuantumNumbers::all_up_to(3) {
        assert!((radial_overlap(s, s) - 1.0).abs() < 1e-8, "{s:?}");
    }
}

#[test]
fn real_space_orthogonality() {
    // different m are orthogonal through e^{imφ}; same m needs the radial overlap
    let states = QuantumNumbers::all_up_to(3);
    for a in &states {
        for b in &states {
            if a != b && a.m() == b.m() {
                assert!(radial_overlap(*a, *b).abs() < 1e-8, "{a:?} {b:?}");
            }
        }
    }
}

#[test]
fn momentum_normalization_with_sphere_measure() {
    for s in QuantumNumbers::all_up_to(3) {
        let q0 = s.level().q0;
        let v = integrate_semi_infinite(
            |q| {
                let f = momentum_radial_factor(s, q);
                (q * q + q0 * q0) / (2.0 * q0 * q0) * f * f * q / (2.0 * PI)
            },
            0.0,
            1e-12,
        )
        .unwrap();
        assert!((v.value - 1.0).abs() < 1e-8, "{s:?}: {}", v.value);
    }
}

#[test]
fn fourier_bridge_at_sample_points() {
    for s in QuantumNumbers::all_up_to(2) {
        for k in 0..10 {
            let p = RealSpacePoint::new(0.3 + 0.9 * f64::from(k), 0.37 * f64::from(k)).unwrap();
            let r = fourier_consistency(s, p, 1e-6).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }
}
