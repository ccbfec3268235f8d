use kepler2d::eigenstates::{energy_level, QuantumNumbers};
use kepler2d::radial::{
    degeneracy_check, eigenfunction_deviation, solve_radial, solve_radial_extrapolated, spectrum_table, RadialGrid,
    DEFAULT_DRIFT_TOL,
};
use kepler2d::Error;

#[test]
fn lowest_channels_rediscover_the_spectrum() {
    let grid = RadialGrid::default();
    let s = solve_radial_extrapolated(0, 3, &grid, DEFAULT_DRIFT_TOL).unwrap();
    for (k, e) in s.energies.iter().enumerate() {
        let exact = energy_level(k as u32).energy;
        assert!(((e - exact) / exact).abs() < 1e-6, "k={k}: {e} vs {exact}");
    }
    for m in [1, 2] {
        let e = solve_radial_extrapolated(m, 1, &grid, DEFAULT_DRIFT_TOL)
            .unwrap()
            .energies[0];
        let exact = energy_level(m as u32).energy;
        assert!(((e - exact) / exact).abs() < 1e-6);
    }
}

#[test]
fn node_counts_follow_state_index() {
    let s = solve_radial(1, 4, &RadialGrid::default()).unwrap();
    assert_eq!(s.node_counts, vec![0, 1, 2, 3]);
    assert!(s.energies.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn negative_m_matches_positive() {
    let g = RadialGrid::uniform(120.0, 3000).unwrap();
    assert_eq!(
        solve_radial(-2, 2, &g).unwrap().energies,
        solve_radial(2, 2, &g).unwrap().energies
    );
}

#[test]
fn shells_are_degenerate() {
    let grid = RadialGrid::default();
    let r = degeneracy_check(0, &grid, 1e-6).unwrap();
    assert_eq!(r.abs_error, 0.0);
    assert!(degeneracy_check(2, &grid, 1e-6).unwrap().passed);
    assert!(degeneracy_check(4, &grid, 1e-5).unwrap().passed);
}

#[test]
fn table_layout() {
    let rows = spectrum_table(4, &RadialGrid::default()).unwrap();
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| r.rel_error < 1e-6), "{rows:?}");
    let rows = spectrum_table(0, &RadialGrid::default()).unwrap();
    assert_eq!(rows.len(), 1);
    assert!((rows[0].computed + 4.0).abs() < 1e-5);
}

#[test]
fn coarse_grid_drift_is_reported() {
    let g = RadialGrid::uniform(60.0, 40).unwrap();
    assert!(matches!(
        solve_radial_extrapolated(0, 1, &g, 1e-3),
        Err(Error::GridTooCoarse(_))
    ));
}

#[test]
fn eigenfunctions_match_closed_form() {
    let grid = RadialGrid::default();
    for (n, m) in [(0, 0), (1, 0), (1, 1), (2, 1), (3, -2)] {
        let qn = QuantumNumbers::new(n, m).unwrap();
        let d = eigenfunction_deviation(qn, &grid, 60.0).unwrap();
        assert!(d < 1e-4, "n={n} m={m}: {d}");
    }
}
