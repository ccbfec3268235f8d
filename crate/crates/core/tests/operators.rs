use kepler2d::eigenstates::QuantumNumbers;
use kepler2d::operators::{
    a_squared_residual, apply_operator, commutator_residual, eigen_residual, hamiltonian, j_squared_identity,
    refinement_study, GridField, Identity, OperatorId, RefinementPreset, TestField,
};
use num_complex::Complex64;

fn gaussian() -> TestField {
    TestField::Gaussian {
        center: (1.0, 0.7),
        sigma: 1.5,
    }
}

fn qn(n: u32, m: i32) -> QuantumNumbers {
    QuantumNumbers::new(n, m).unwrap()
}

#[test]
fn j_squared_exact_through_64() {
    for n in 0..=64 {
        assert!(j_squared_identity(n).passed, "n={n}");
    }
}

#[test]
fn eigen_actions_converge() {
    for (n, m) in [(0, 0), (1, -1), (2, 1), (2, 2)] {
        let r1 = eigen_residual(qn(n, m), 128, 12.0);
        let r2 = eigen_residual(qn(n, m), 256, 12.0);
        let ratio = r1 / r2;
        assert!((3.4..4.6).contains(&ratio), "n={n} m={m}: {r1} {r2}");
    }
}

#[test]
fn lz_eigenvalue() {
    for m in [-2, 0, 1] {
        let f = TestField::Eigenstate(qn(2, m)).sample(256, 12.0);
        let lz = apply_operator(OperatorId::Lz, &f);
        let defect = &lz - &(Complex64::new(f64::from(m), 0.0) * &f);
        assert!(kepler2d::operators::relative_residual(&defect, &f) < 1e-2);
    }
}

#[test]
fn ground_state_annihilated_by_runge_lenz() {
    let f = TestField::Eigenstate(qn(0, 0)).sample(512, 12.0);
    let r = kepler2d::operators::relative_residual(&apply_operator(OperatorId::Ax, &f), &f);
    assert!(r < 5e-3, "{r}");
}

#[test]
fn commutators_shrink_quadratically_on_gaussian() {
    for id in [Identity::HLz, Identity::LzAx, Identity::AxAy] {
        let r1 = commutator_residual(id, &gaussian().sample(128, 12.0));
        let r2 = commutator_residual(id, &gaussian().sample(256, 12.0));
        assert!((3.3..4.7).contains(&(r1 / r2)), "{id:?}: {r1} {r2}");
    }
}

#[test]
fn a_squared_on_eigenstates() {
    for (n, m) in [(0, 0), (2, 1)] {
        let f = TestField::Eigenstate(qn(n, m));
        let r1 = a_squared_residual(&f.sample(256, 12.0));
        let r2 = a_squared_residual(&f.sample(512, 12.0));
        assert!((3.3..4.7).contains(&(r1 / r2)), "n={n}: {r1} {r2}");
    }
}

#[test]
fn discrete_hamiltonian_is_hermitian() {
    let f = gaussian().sample(96, 12.0);
    let g = TestField::Eigenstate(qn(1, 1)).sample(96, 12.0);
    let a = f.inner(&hamiltonian(&g));
    let b = hamiltonian(&f).inner(&g);
    assert!((a - b).norm() < 1e-12 * a.norm().max(1.0));
}

#[test]
fn boundary_contamination_flag() {
    assert!(!gaussian().sample(64, 12.0).boundary_contaminated());
    assert!(TestField::Eigenstate(qn(2, 1)).sample(64, 12.0).boundary_contaminated());
    let wide = GridField::sample(32, 4.0, |_, _| Complex64::new(1.0, 0.0));
    assert_eq!(wide.boundary_ratio(), 1.0);
}

#[test]
fn coarse_preset_skips_slopes() {
    let s = refinement_study(&RefinementPreset::named("coarse").unwrap());
    assert!(!s.slope_checked);
    assert!(s.fits.iter().all(|f| f.slope.is_none() && f.passed));
    assert_eq!(s.rows.len(), 7 * 4);
    assert!(s.to_csv().starts_with("identity,field,n,h,residual\n"));
}
