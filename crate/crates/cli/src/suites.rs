//! Verification suites driven by the CLI. Each writes its report files and
//! returns a [`SuiteOutcome`].

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use kepler2d::eigenstates::{energy_level, fourier_consistency, MomentumPoint, QuantumNumbers, RealSpacePoint};
use kepler2d::focksphere::{
    chi_identification, generator_action, generator_convergence, kernel_eigensolve_with, ClusterCheck, KernelConfig,
    KernelSpectrum, RotationAxis, SpherePoint,
};
use kepler2d::identity::scan_report;
use kepler2d::operators::{j_squared_identity, refinement_study, RefinementPreset};
use kepler2d::radial::{degeneracy_check, spectrum_table, RadialGrid};
use kepler2d::report::fmt_f64;
use kepler2d::Error;
use serde::Serialize;

use crate::config::{Format, RunConfig, UsageError};
use crate::svg;

#[derive(Debug, Clone, Serialize)]
pub struct SuiteOutcome {
    pub suite: &'static str,
    pub passed: bool,
    pub worst_error: f64,
    /// Wall-clock seconds, `None` when timing is disabled.
    pub runtime: Option<f64>,
    #[serde(skip)]
    pub detail: Vec<String>,
}

#[derive(Debug)]
pub enum SuiteError {
    Usage(UsageError),
    Io(String),
}

impl From<UsageError> for SuiteError {
    fn from(e: UsageError) -> Self {
        SuiteError::Usage(e)
    }
}

impl From<std::io::Error> for SuiteError {
    fn from(e: std::io::Error) -> Self {
        SuiteError::Io(e.to_string())
    }
}

/// Bad inputs surface as usage errors, numerical breakdowns as failures.
fn classify(err: Error) -> Result<String, SuiteError> {
    match err {
        Error::Domain(_) | Error::InvalidInput(_) | Error::GridTooCoarse(_) => {
            Err(SuiteError::Usage(UsageError(err.to_string())))
        }
        other => Ok(other.to_string()),
    }
}

fn write(dir: &Path, name: &str, contents: &str) -> Result<(), SuiteError> {
    std::fs::write(dir.join(name), contents).map_err(|e| SuiteError::Io(format!("{name}: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn timed<F>(cfg: &RunConfig, f: F) -> Result<SuiteOutcome, SuiteError>
where
    F: FnOnce() -> Result<SuiteOutcome, SuiteError>,
{
    let start = Instant::now();
    let mut outcome = f()?;
    outcome.runtime = cfg.timing.then(|| start.elapsed().as_secs_f64());
    Ok(outcome)
}

fn failed(suite: &'static str, message: String) -> SuiteOutcome {
    SuiteOutcome {
        suite,
        passed: false,
        worst_error: f64::INFINITY,
        runtime: None,
        detail: vec![message],
    }
}

#[derive(Serialize)]
struct SpectrumFile<'a> {
    rows: &'a [kepler2d::radial::SpectrumRow],
    degeneracy: Vec<DegeneracyRow>,
    tolerance: f64,
    degeneracy_tolerance: f64,
}

#[derive(Serialize)]
struct DegeneracyRow {
    n: u32,
    relative_spread: f64,
    passed: bool,
}

pub fn spectrum(cfg: &RunConfig, n_max: u32) -> Result<SuiteOutcome, SuiteError> {
    timed(cfg, || {
        let grid = RadialGrid::uniform(cfg.radial_r_max, cfg.radial_points).map_err(|e| UsageError(e.to_string()))?;
        let rows = match spectrum_table(n_max, &grid) {
            Ok(rows) => rows,
            Err(e) => return Ok(failed("spectrum", classify(e)?)),
        };
        let mut degeneracy = Vec::new();
        for n in 0..=n_max {
            match degeneracy_check(n, &grid, cfg.degeneracy_tol) {
                Ok(r) => degeneracy.push(DegeneracyRow {
                    n,
                    relative_spread: r.abs_error,
                    passed: r.passed,
                }),
                Err(e) => return Ok(failed("spectrum", classify(e)?)),
            }
        }
        let mut csv = String::from("n,m,e_computed,e_exact,rel_error,passed\n");
        let mut detail = Vec::new();
        for r in &rows {
            let ok = r.rel_error <= cfg.spectrum_tol;
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{ok}",
                r.n,
                r.m,
                fmt_f64(r.computed),
                fmt_f64(r.exact),
                fmt_f64(r.rel_error)
            );
            if !ok {
                detail.push(format!(
                    "n={} m={}: relative error {:.3e} > {:.1e}",
                    r.n, r.m, r.rel_error, cfg.spectrum_tol
                ));
            }
        }
        for d in degeneracy.iter().filter(|d| !d.passed) {
            detail.push(format!(
                "n={}: degeneracy spread {:.3e} > {:.1e}",
                d.n, d.relative_spread, cfg.degeneracy_tol
            ));
        }
        if cfg.wants(Format::Csv) {
            write(&cfg.out, "spectrum.csv", &csv)?;
        }
        if cfg.wants(Format::Json) {
            let file = SpectrumFile {
                rows: &rows,
                degeneracy,
                tolerance: cfg.spectrum_tol,
                degeneracy_tolerance: cfg.degeneracy_tol,
            };
            write(&cfg.out, "spectrum.json", &to_json(&file))?;
        }
        let worst = rows.iter().map(|r| r.rel_error).fold(0.0, f64::max);
        Ok(SuiteOutcome {
            suite: "spectrum",
            passed: detail.is_empty(),
            worst_error: worst,
            runtime: None,
            detail,
        })
    })
}

pub fn integral(cfg: &RunConfig, n_max: u32) -> Result<SuiteOutcome, SuiteError> {
    timed(cfg, || {
        let scan = match scan_report(n_max, &cfg.x_values, cfg.integral_tol) {
            Ok(s) => s,
            Err(e) => return Ok(failed("integral", classify(e)?)),
        };
        // integral_scan.csv is always written: it is the primary artifact
        write(&cfg.out, "integral_scan.csv", &scan.to_csv())?;
        if cfg.wants(Format::Json) {
            write(&cfg.out, "integral_scan.json", &to_json(&scan))?;
        }
        if cfg.wants(Format::Svg) {
            write(
                &cfg.out,
                "integral_scan.svg",
                &svg::error_heat_map(&scan, &cfg.x_values),
            )?;
        }
        let mut detail: Vec<String> = scan
            .entries
            .iter()
            .filter(|e| !e.report.passed)
            .take(10)
            .map(|e| {
                let why = e.failure.clone().unwrap_or_else(|| "tolerance exceeded".to_string());
                format!(
                    "n={} m={} x={}: abs error {:.3e} ({why})",
                    e.n, e.m, e.x, e.report.abs_error
                )
            })
            .collect();
        if scan.failed > detail.len() {
            detail.push(format!("... {} failed cases in total", scan.failed));
        }
        Ok(SuiteOutcome {
            suite: "integral",
            passed: scan.all_passed(),
            worst_error: scan.worst_scaled_error,
            runtime: None,
            detail,
        })
    })
}

#[derive(Serialize)]
struct FockRun {
    n: u32,
    q0: f64,
    passed: bool,
    checks: Vec<ClusterCheck>,
    spectrum: KernelSpectrum,
}

#[derive(Serialize)]
struct FockFile {
    grid_order: usize,
    cluster_tol: f64,
    runs: Vec<FockRun>,
}

/// Kernel spectra at `q0 = 1/(n + 1/2)` for each `n` in `ns`: clusters
/// `l <= n` must match `2/(q0(2l+1))` with multiplicity `2l+1`.
pub fn fock(cfg: &RunConfig, ns: &[u32]) -> Result<SuiteOutcome, SuiteError> {
    for &n in ns {
        cfg.fock_precondition(n)?;
    }
    timed(cfg, || {
        let kernel = KernelConfig {
            grid_order: cfg.grid_order,
            cluster_tol: cfg.cluster_tol,
            ..KernelConfig::default()
        };
        let mut runs = Vec::new();
        let mut detail = Vec::new();
        let mut worst = 0.0f64;
        for &n in ns {
            let q0 = energy_level(n).q0;
            let spectrum = match kernel_eigensolve_with(&kernel, q0, n) {
                Ok(s) => s,
                Err(e) => return Ok(failed("fock", classify(e)?)),
            };
            let checks = spectrum.check(n, cfg.cluster_tol);
            for c in &checks {
                worst = worst.max(c.max_deviation);
                if !c.passed {
                    detail.push(format!(
                        "n={n} l={}: multiplicity {} (expected {}), deviation {:.3e}",
                        c.l, c.multiplicity, c.expected_multiplicity, c.max_deviation
                    ));
                }
            }
            runs.push(FockRun {
                n,
                q0,
                passed: checks.iter().all(|c| c.passed),
                checks,
                spectrum,
            });
        }
        let file = FockFile {
            grid_order: cfg.grid_order,
            cluster_tol: cfg.cluster_tol,
            runs,
        };
        write(&cfg.out, "fock_spectrum.json", &to_json(&file))?;
        Ok(SuiteOutcome {
            suite: "fock",
            passed: detail.is_empty(),
            worst_error: worst,
            runtime: None,
            detail,
        })
    })
}

pub fn commutators(cfg: &RunConfig) -> Result<SuiteOutcome, SuiteError> {
    let preset = RefinementPreset::named(&cfg.preset).map_err(|e| UsageError(e.to_string()))?;
    timed(cfg, || {
        let study = refinement_study(&preset);
        if cfg.wants(Format::Csv) {
            write(&cfg.out, "commutators.csv", &study.to_csv())?;
        }
        if cfg.wants(Format::Json) {
            write(&cfg.out, "commutators.json", &to_json(&study))?;
        }
        let mut detail = Vec::new();
        if !study.slope_checked {
            detail.push(format!(
                "warning: preset '{}' has a single grid, slope check skipped",
                preset.name
            ));
        }
        for w in &study.boundary_warnings {
            detail.push(format!("warning: field {w} is not negligible at the grid boundary"));
        }
        let mut passed = study.all_passed();
        for f in study.fits.iter().filter(|f| !f.passed) {
            detail.push(format!(
                "{} on {}: slope {:.3} outside [1.85, 2.15]",
                f.identity.label(),
                f.field,
                f.slope.unwrap_or(f64::NAN)
            ));
        }
        if study.slope_checked && study.a_psi00 > cfg.a_psi00_tol {
            passed = false;
            detail.push(format!("|A psi_00| = {:.3e} > {:.1e}", study.a_psi00, cfg.a_psi00_tol));
        }
        Ok(SuiteOutcome {
            suite: "commutators",
            passed,
            worst_error: study.worst_slope_deviation(),
            runtime: None,
            detail,
        })
    })
}

/// Deterministic, roughly uniform points on the sphere away from the pole.
fn fibonacci_points(count: usize) -> Vec<SpherePoint> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = -1.0 + 1.98 * (i as f64 + 0.5) / count as f64;
            let s = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            SpherePoint {
                ux: s * phi.cos(),
                uy: s * phi.sin(),
                uz: z,
            }
        })
        .collect()
}

/// J^2 in exact arithmetic, the sphere identification of momentum states,
/// the rotation generator and the Fourier/Hankel bridge.
pub fn consistency(cfg: &RunConfig) -> Result<SuiteOutcome, SuiteError> {
    timed(cfg, || {
        let mut detail = Vec::new();
        let mut worst = 0.0f64;
        if let Some(n) = (0..=64).find(|&n| !j_squared_identity(n).passed) {
            detail.push(format!("J^2 identity fails at n={n}"));
        }
        let points = fibonacci_points(200);
        for qn in QuantumNumbers::all_up_to(3) {
            match chi_identification(qn, &points, 1e-10) {
                Ok(r) if r.passed => {}
                Ok(r) => detail.push(format!("chi n={} m={}: deviation {:.3e}", qn.n(), qn.m(), r.abs_error)),
                Err(e) => detail.push(classify(e)?),
            }
        }
        let ks = [
            MomentumPoint::new(0.37, 0.21),
            MomentumPoint::new(-1.1, 0.6),
            MomentumPoint::new(2.3, -1.7),
        ];
        for (n, m) in [(0, 0), (1, 0), (1, 1)] {
            let qn = QuantumNumbers::new(n, m).expect("valid quantum numbers");
            for k in ks {
                for axis in [RotationAxis::X, RotationAxis::Y] {
                    match generator_convergence(qn, k, axis, &[1e-2, 5e-3, 2.5e-3], 0.1) {
                        Ok(c) if c.passed => {}
                        Ok(c) => detail.push(format!("generator n={n} m={m}: slope {:?}", c.slope)),
                        Err(e) => detail.push(classify(e)?),
                    }
                }
                if n == 0 {
                    let a = generator_action(qn, k, RotationAxis::X).norm();
                    if a > 1e-6 {
                        detail.push(format!("|A_x Phi_00| = {a:.3e} > 1e-6"));
                    }
                }
            }
        }
        for qn in QuantumNumbers::all_up_to(2) {
            for i in 0..10 {
                let p = RealSpacePoint::new(0.25 + 0.85 * f64::from(i), 0.41 * f64::from(i)).expect("valid point");
                match fourier_consistency(qn, p, cfg.consistency_tol) {
                    Ok(r) => {
                        worst = worst.max(r.abs_error);
                        if !r.passed {
                            detail.push(format!(
                                "Fourier n={} m={} rho={}: error {:.3e}",
                                qn.n(),
                                qn.m(),
                                p.rho,
                                r.abs_error
                            ));
                        }
                    }
                    Err(e) => detail.push(classify(e)?),
                }
            }
        }
        Ok(SuiteOutcome {
            suite: "consistency",
            passed: detail.is_empty(),
            worst_error: worst,
            runtime: None,
            detail,
        })
    })
}
