use std::f64::consts::PI;

use kepler2d::eigenstates::{energy_level, MomentumPoint, QuantumNumbers};
use kepler2d::focksphere::{
    area_element_check, chi_from_phi, chi_identification, chord_identity_check, generator_action,
    generator_convergence, kernel_eigensolve, project, unproject, RotationAxis, SpherePoint,
};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_sphere_points(count: usize, seed: u64) -> Vec<SpherePoint> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            // uniform in cos θ, keep away from the north pole
            let z: f64 = rng.gen_range(-1.0..0.999);
            let phi: f64 = rng.gen_range(0.0..2.0 * PI);
            let s = (1.0 - z * z).sqrt();
            SpherePoint {
                ux: s * phi.cos(),
                uy: s * phi.sin(),
                uz: z,
            }
        })
        .collect()
}

#[test]
fn round_trip_of_random_points() {
    for u in random_sphere_points(1000, 7) {
        let back = project(unproject(u, 0.7).unwrap(), 0.7);
        assert!(back.distance(u) < 1e-12);
    }
}

#[test]
fn chord_identity_on_random_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let mut k = || MomentumPoint::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0));
        let (a, b) = (k(), k());
        let r = chord_identity_check(a, b, 0.4);
        worst = worst.max(r.abs_error);
    }
    assert!(worst < 1e-12, "{worst}");
}

#[test]
fn area_element_matches_jacobian() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..200 {
        let k = MomentumPoint::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
        let r = area_element_check(k, 2.0 / 3.0);
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn chi_ground_state_is_constant() {
    let qn = QuantumNumbers::new(0, 0).unwrap();
    for u in random_sphere_points(50, 1) {
        let chi = chi_from_phi(qn, u).unwrap();
        assert!((chi - Complex64::new(PI.sqrt(), 0.0)).norm() < 1e-12);
    }
}

#[test]
fn chi_north_pole_limit() {
    let qn = QuantumNumbers::new(1, 0).unwrap();
    let z: f64 = 1.0 - 1e-9;
    let u = SpherePoint {
        ux: (1.0 - z * z).sqrt(),
        uy: 0.0,
        uz: z,
    };
    let chi = chi_from_phi(qn, u).unwrap();
    assert!((chi.re - 2.0 * PI * (3.0 / (4.0 * PI)).sqrt()).abs() < 1e-7);
}

#[test]
fn chi_is_two_pi_harmonic() {
    let points = random_sphere_points(200, 42);
    for qn in QuantumNumbers::all_up_to(3) {
        let r = chi_identification(qn, &points, 1e-10).unwrap();
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn kernel_ground_state_shell() {
    let s = kernel_eigensolve(20, 2.0, 0).unwrap();
    assert!((s.eigenvalues[0] - 1.0).abs() < 1e-12);
    assert_eq!(s.clusters[0].multiplicity, 1);
    assert_eq!(s.multiplicities.iter().sum::<usize>(), s.dimension);
    assert!(kernel_eigensolve(3, 2.0, 4).is_err());
}

#[test]
fn kernel_first_excited_shell() {
    let q0 = energy_level(1).q0;
    let s = kernel_eigensolve(16, q0, 1).unwrap();
    let checks = s.check(1, 1e-3);
    assert!(checks.iter().all(|c| c.passed), "{checks:?}");
    assert_eq!(checks[1].multiplicity, 3);
    assert!((s.clusters[1].mean - 1.0).abs() < 1e-3);
}

#[test]
fn kernel_spectrum_serializes() {
    let s = kernel_eigensolve(6, 1.0, 1).unwrap();
    let json = serde_json::to_string(&s).unwrap();
    assert!(json.contains("\"multiplicities\""));
}

#[test]
fn ground_state_is_annihilated() {
    let qn = QuantumNumbers::new(0, 0).unwrap();
    for k in [MomentumPoint::new(0.3, -1.1), MomentumPoint::new(2.5, 0.4)] {
        for axis in [RotationAxis::X, RotationAxis::Y] {
            assert!(generator_action(qn, k, axis).norm() < 1e-6);
        }
    }
}

#[test]
fn generator_residual_is_second_order() {
    let k = MomentumPoint::new(0.37, 0.21);
    let alphas = [1e-2, 5e-3, 2.5e-3];
    for (n, m) in [(0, 0), (1, 0), (1, 1), (2, -1)] {
        let qn = QuantumNumbers::new(n, m).unwrap();
        for axis in [RotationAxis::X, RotationAxis::Y] {
            let c = generator_convergence(qn, k, axis, &alphas, 0.1).unwrap();
            assert!(c.passed, "n={n} m={m} {axis:?}: {c:?}");
            if n == 0 {
                assert!(c.slope.is_none());
            }
        }
    }
}

proptest! {
    #[test]
    fn projection_lands_on_sphere(qx in -50.0f64..50.0, qy in -50.0f64..50.0, q0 in 0.05f64..3.0) {
        let u = project(MomentumPoint::new(qx, qy), q0);
        prop_assert!((u.ux * u.ux + u.uy * u.uy + u.uz * u.uz - 1.0).abs() < 1e-12);
        prop_assert!(SpherePoint::new(u.ux, u.uy, u.uz).is_ok());
    }
}
