//! Stereographic projection of momentum space onto the unit sphere, the
//! sphere-side wavefunction `χ`, a Nyström discretization of the sphere
//! integral equation, and the infinitesimal-rotation generator check.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigenstates::{phi_momentum, MomentumPoint, QuantumNumbers};
use crate::error::{domain, Error, Result};
use crate::quadrature::SphereGrid;
use crate::report::VerificationReport;
use crate::specfun::harmonic_from_cos;

/// Point on the unit sphere in Cartesian coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint {
    pub ux: f64,
    pub uy: f64,
    pub uz: f64,
}

impl SpherePoint {
    /// Rejects points further than `1e-12` from the unit sphere.
    pub fn new(ux: f64, uy: f64, uz: f64) -> Result<Self> {
        let r2 = ux * ux + uy * uy + uz * uz;
        if (r2 - 1.0).abs() > 1e-12 {
            return Err(domain(format!("point ({ux}, {uy}, {uz}) is not on the unit sphere")));
        }
        Ok(Self { ux, uy, uz })
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let s = theta.sin();
        Self {
            ux: s * phi.cos(),
            uy: s * phi.sin(),
            uz: theta.cos(),
        }
    }

    pub fn theta(self) -> f64 {
        self.ux.hypot(self.uy).atan2(self.uz)
    }

    pub fn phi(self) -> f64 {
        self.uy.atan2(self.ux)
    }

    pub fn distance(self, other: Self) -> f64 {
        ((self.ux - other.ux).powi(2) + (self.uy - other.uy).powi(2) + (self.uz - other.uz).powi(2)).sqrt()
    }
}

/// `u = (2q0 q / (q² + q0²), (q² - q0²)/(q² + q0²))`.
pub fn project(k: MomentumPoint, q0: f64) -> SpherePoint {
    let q2 = k.q_squared();
    let d = q2 + q0 * q0;
    SpherePoint {
        ux: 2.0 * q0 * k.qx / d,
        uy: 2.0 * q0 * k.qy / d,
        uz: (q2 - q0 * q0) / d,
    }
}

/// Inverse of [`project`]; the north pole `uz = 1` has no preimage.
pub fn unproject(u: SpherePoint, q0: f64) -> Result<MomentumPoint> {
    let den = 1.0 - u.uz;
    if !(den > 0.0) {
        return Err(domain("the north pole maps to infinite momentum"));
    }
    Ok(MomentumPoint::new(q0 * u.ux / den, q0 * u.uy / den))
}

/// `|u - u'| = 2q0 |q - q'| / sqrt((q² + q0²)(q'² + q0²))`.
pub fn chord_identity_check(k1: MomentumPoint, k2: MomentumPoint, q0: f64) -> VerificationReport {
    let lhs = project(k1, q0).distance(project(k2, q0));
    let dq = (k1.qx - k2.qx).hypot(k1.qy - k2.qy);
    let rhs = 2.0 * q0 * dq / ((k1.q_squared() + q0 * q0) * (k2.q_squared() + q0 * q0)).sqrt();
    VerificationReport::new("chord", lhs, rhs, 1e-12, 0)
}

/// Compare the analytic area element `(2q0/(q²+q0²))²` with the numerical
/// Jacobian `|∂u/∂q_x × ∂u/∂q_y|`.
pub fn area_element_check(k: MomentumPoint, q0: f64) -> VerificationReport {
    let h = 1e-5 * (k.q() + q0);
    let diff = |dx: f64, dy: f64| {
        let p = project(MomentumPoint::new(k.qx + dx, k.qy + dy), q0);
        let m = project(MomentumPoint::new(k.qx - dx, k.qy - dy), q0);
        [
            (p.ux - m.ux) / (2.0 * h),
            (p.uy - m.uy) / (2.0 * h),
            (p.uz - m.uz) / (2.0 * h),
        ]
    };
    let a = diff(h, 0.0);
    let b = diff(0.0, h);
    let cross = [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ];
    let lhs = (cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]).sqrt();
    let rhs = (2.0 * q0 / (k.q_squared() + q0 * q0)).powi(2);
    VerificationReport::new("area element", lhs, rhs, 1e-8, 0)
}

/// `χ(u) = q0^{-1/2} ((q² + q0²)/(2q0))^{3/2} Φ(q)` with `q = unproject(u)`.
pub fn chi_from_phi(qn: QuantumNumbers, u: SpherePoint) -> Result<Complex64> {
    let q0 = qn.level().q0;
    let k = unproject(u, q0)?;
    let weight = ((k.q_squared() + q0 * q0) / (2.0 * q0)).powf(1.5) / q0.sqrt();
    Ok(phi_momentum(qn, k) * weight)
}

/// Worst deviation of `χ_nm` from `2π Y_n^m` over the given points.
pub fn chi_identification(qn: QuantumNumbers, points: &[SpherePoint], tol: f64) -> Result<VerificationReport> {
    let mut worst = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0), 0.0);
    for &u in points {
        let chi = chi_from_phi(qn, u)?;
        let y = 2.0 * PI * harmonic_from_cos(qn.n(), qn.m(), u.uz, u.phi());
        let err = (chi - y).norm();
        if err >= worst.2 {
            worst = (chi, y, err);
        }
    }
    Ok(VerificationReport::with_error(
        format!("chi n={} m={}", qn.n(), qn.m()),
        worst.0,
        worst.1,
        worst.2,
        tol,
        0,
    ))
}

/// Defaults for the kernel eigenproblem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelConfig {
    pub grid_order: usize,
    /// Allowed absolute deviation of each eigenvalue from `2/(q0(2l+1))`.
    pub cluster_tol: f64,
    /// Relative gap between sorted eigenvalues that starts a new cluster.
    pub split_gap: f64,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            grid_order: 30,
            cluster_tol: 1e-3,
            split_gap: 1e-2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
    pub multiplicity: usize,
}

/// Spectrum of the discretized sphere kernel, largest eigenvalue first.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpectrum {
    pub q0: f64,
    pub grid_order: usize,
    pub dimension: usize,
    pub eigenvalues: Vec<f64>,
    pub clusters: Vec<Cluster>,
    pub multiplicities: Vec<usize>,
}

/// Comparison of one cluster with the expected `2/(q0(2l+1))`, `2l+1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterCheck {
    pub l: u32,
    pub expected_value: f64,
    pub expected_multiplicity: usize,
    pub multiplicity: usize,
    pub max_deviation: f64,
    pub passed: bool,
}

impl KernelSpectrum {
    /// Group the sorted eigenvalues wherever consecutive values differ by more
    /// than `split_gap` relative to the larger magnitude.
    pub fn cluster(eigenvalues: &[f64], split_gap: f64) -> Vec<Cluster> {
        let mut clusters: Vec<Cluster> = Vec::new();
        let mut start = 0;
        for i in 1..=eigenvalues.len() {
            let split = i == eigenvalues.len() || {
                let (a, b) = (eigenvalues[i - 1], eigenvalues[i]);
                (a - b).abs() > split_gap * a.abs().max(b.abs())
            };
            if split {
                let part = &eigenvalues[start..i];
                clusters.push(Cluster {
                    mean: part.iter().sum::<f64>() / part.len() as f64,
                    min: part.iter().copied().fold(f64::INFINITY, f64::min),
                    max: part.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                    multiplicity: part.len(),
                });
                start = i;
            }
        }
        clusters
    }

    /// Check clusters `l = 0..=lmax` against `2/(q0(2l+1))` with multiplicity `2l+1`.
    pub fn check(&self, lmax: u32, tol: f64) -> Vec<ClusterCheck> {
        (0..=lmax)
            .map(|l| {
                let expected_value = 2.0 / (self.q0 * f64::from(2 * l + 1));
                let expected_multiplicity = (2 * l + 1) as usize;
                match self.clusters.get(l as usize) {
                    Some(c) => {
                        let max_deviation = (c.max - expected_value).abs().max((c.min - expected_value).abs());
                        ClusterCheck {
                            l,
                            expected_value,
                            expected_multiplicity,
                            multiplicity: c.multiplicity,
                            max_deviation,
                            passed: c.multiplicity == expected_multiplicity && max_deviation <= tol,
                        }
                    }
                    None => ClusterCheck {
                        l,
                        expected_value,
                        expected_multiplicity,
                        multiplicity: 0,
                        max_deviation: f64::INFINITY,
                        passed: false,
                    },
                }
            })
            .collect()
    }
}

/// Eigenvalues of the Nyström matrix `M_ij = w_j / (2π q0 |u_i - u_j|)`.
///
/// The singular diagonal is replaced so every row reproduces
/// `∫ dΩ'/|u - u'| = 4π`, which makes the constant function an exact
/// eigenvector with eigenvalue `2/q0`.
pub fn kernel_eigensolve(grid_order: usize, q0: f64, lmax_report: u32) -> Result<KernelSpectrum> {
    kernel_eigensolve_with(
        &KernelConfig {
            grid_order,
            ..KernelConfig::default()
        },
        q0,
        lmax_report,
    )
}

pub fn kernel_eigensolve_with(config: &KernelConfig, q0: f64, lmax_report: u32) -> Result<KernelSpectrum> {
    if !(q0 > 0.0) {
        return Err(domain(format!("q0 must be positive, got {q0}")));
    }
    if config.grid_order < (lmax_report as usize + 1) {
        return Err(Error::InvalidInput(format!(
            "grid order {} cannot resolve degree {lmax_report}",
            config.grid_order
        )));
    }
    let grid = SphereGrid::new(config.grid_order);
    let n = grid.len();
    let points: Vec<[f64; 3]> = (0..n).map(|i| grid.unit_vector(i)).collect();
    let sqrt_w: Vec<f64> = grid.weights.iter().map(|w| w.sqrt()).collect();
    let scale = 1.0 / (2.0 * PI * q0);

    // Symmetrized form sqrt(w_i) M_ij / sqrt(w_j), one row per task.
    let rows: Vec<Result<Vec<f64>>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![0.0; n];
            let mut weighted = 0.0;
            for j in 0..n {
                if j == i {
                    continue;
                }
                let d = ((points[i][0] - points[j][0]).powi(2)
                    + (points[i][1] - points[j][1]).powi(2)
                    + (points[i][2] - points[j][2]).powi(2))
                .sqrt();
                if d == 0.0 {
                    return Err(Error::NodeCollision(i.min(j), i.max(j)));
                }
                weighted += grid.weights[j] / d;
                row[j] = scale * sqrt_w[i] * sqrt_w[j] / d;
            }
            row[i] = scale * (4.0 * PI - weighted);
            Ok(row)
        })
        .collect();
    let mut matrix = DMatrix::<f64>::zeros(n, n);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row?.into_iter().enumerate() {
            matrix[(i, j)] = v;
        }
    }
    let mut eigenvalues: Vec<f64> = matrix.symmetric_eigenvalues().iter().copied().collect();
    eigenvalues.sort_by(|a, b| b.total_cmp(a));
    let clusters = KernelSpectrum::cluster(&eigenvalues, config.split_gap);
    let multiplicities = clusters.iter().map(|c| c.multiplicity).collect();
    Ok(KernelSpectrum {
        q0,
        grid_order: config.grid_order,
        dimension: n,
        eigenvalues,
        clusters,
        multiplicities,
    })
}

/// Sphere rotation generating `𝒜_x` (about `u_y`) or `𝒜_y` (about `u_x`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RotationAxis {
    X,
    Y,
}

fn rotate(u: SpherePoint, axis: RotationAxis, alpha: f64) -> SpherePoint {
    let (c, s) = (alpha.cos(), alpha.sin());
    match axis {
        RotationAxis::X => SpherePoint {
            ux: u.ux * c + u.uz * s,
            uy: u.uy,
            uz: u.uz * c - u.ux * s,
        },
        RotationAxis::Y => SpherePoint {
            ux: u.ux,
            uy: u.uy * c + u.uz * s,
            uz: u.uz * c - u.uy * s,
        },
    }
}

/// `Φ` pulled back through a sphere rotation by `alpha`, carrying the
/// `(q² + q0²)^{3/2}` weight that makes `χ` a scalar on the sphere.
pub fn rotated_phi(qn: QuantumNumbers, k: MomentumPoint, axis: RotationAxis, alpha: f64) -> Result<Complex64> {
    let q0 = qn.level().q0;
    let k_rot = unproject(rotate(project(k, q0), axis, alpha), q0)?;
    let w = |p: MomentumPoint| (p.q_squared() + q0 * q0).powf(1.5);
    Ok(phi_momentum(qn, k_rot) * (w(k_rot) / w(k)))
}

/// `𝒜Φ` from the compact form: for the x component
/// `i(q² - q0²) ∂_x Φ - 2i q_x (q·∇Φ) - 3i q_x Φ`, with central differences
/// of step `1e-5 (q + q0)`.
pub fn generator_action(qn: QuantumNumbers, k: MomentumPoint, axis: RotationAxis) -> Complex64 {
    let q0 = qn.level().q0;
    let h = 1e-5 * (k.q() + q0);
    let phi = |dx: f64, dy: f64| phi_momentum(qn, MomentumPoint::new(k.qx + dx, k.qy + dy));
    let dx = (phi(h, 0.0) - phi(-h, 0.0)) / (2.0 * h);
    let dy = (phi(0.0, h) - phi(0.0, -h)) / (2.0 * h);
    let value = phi(0.0, 0.0);
    let (q_comp, d_comp) = match axis {
        RotationAxis::X => (k.qx, dx),
        RotationAxis::Y => (k.qy, dy),
    };
    let i = Complex64::new(0.0, 1.0);
    let radial = dx * k.qx + dy * k.qy;
    i * ((k.q_squared() - q0 * q0) * d_comp - 2.0 * q_comp * radial - 3.0 * q_comp * value)
}

/// Compare `2 q0 i ∂_α Φ_α` (central difference in `alpha`) with the
/// compact-form action of `𝒜` on `Φ`. The residual is `O(α²)`; the report
/// tolerance is `alpha`.
pub fn rotation_generator_check(
    qn: QuantumNumbers,
    k: MomentumPoint,
    alpha: f64,
    axis: RotationAxis,
) -> Result<VerificationReport> {
    if !(alpha > 0.0) {
        return Err(domain(format!("alpha must be positive, got {alpha}")));
    }
    let q0 = qn.level().q0;
    let derivative = (rotated_phi(qn, k, axis, alpha)? - rotated_phi(qn, k, axis, -alpha)?) / (2.0 * alpha);
    let lhs = Complex64::new(0.0, 2.0 * q0) * derivative;
    let rhs = generator_action(qn, k, axis);
    Ok(VerificationReport::new(
        format!("generator {axis:?} n={} m={} alpha={alpha}", qn.n(), qn.m()),
        lhs,
        rhs,
        alpha,
        6,
    ))
}

/// Residuals below this at every step count as exact agreement. It sits above
/// the `O(h²)` error of the momentum derivatives in [`generator_action`]
/// (about 1e-9), which does not depend on `alpha`.
pub const EXACT_RESIDUAL_FLOOR: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConvergence {
    pub alphas: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Least-squares log-log slope; `None` when all residuals are at the floor.
    pub slope: Option<f64>,
    pub passed: bool,
}

/// Fit the order of [`rotation_generator_check`] residuals in `alpha`.
/// Passes when the slope is within `slope_tol` of 2, or when every residual is
/// below [`EXACT_RESIDUAL_FLOOR`].
pub fn generator_convergence(
    qn: QuantumNumbers,
    k: MomentumPoint,
    axis: RotationAxis,
    alphas: &[f64],
    slope_tol: f64,
) -> Result<GeneratorConvergence> {
    if alphas.len() < 2 {
        return Err(Error::InvalidInput("slope fit needs at least two alpha values".into()));
    }
    let residuals = alphas
        .iter()
        .map(|&a| rotation_generator_check(qn, k, a, axis).map(|r| r.abs_error))
        .collect::<Result<Vec<_>>>()?;
    if residuals.iter().all(|&r| r < EXACT_RESIDUAL_FLOOR) {
        return Ok(GeneratorConvergence {
            alphas: alphas.to_vec(),
            residuals,
            slope: None,
            passed: true,
        });
    }
    let slope = loglog_slope(alphas, &residuals);
    Ok(GeneratorConvergence {
        alphas: alphas.to_vec(),
        residuals,
        slope: Some(slope),
        passed: (slope - 2.0).abs() <= slope_tol,
    })
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projection_examples() {
        let q0 = 0.8;
        let s = project(MomentumPoint::new(0.0, 0.0), q0);
        assert_eq!((s.ux, s.uy, s.uz), (0.0, 0.0, -1.0));
        let e = project(MomentumPoint::new(q0, 0.0), q0);
        assert!((e.ux - 1.0).abs() < 1e-15 && e.uz.abs() < 1e-15);
        let far = project(MomentumPoint::from_polar(1e8, 0.3), q0);
        assert!((far.uz - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unprojection_examples() {
        let q0 = 1.3;
        let k = unproject(SpherePoint::new(0.0, 0.0, -1.0).unwrap(), q0).unwrap();
        assert_eq!(k.q(), 0.0);
        let k = unproject(SpherePoint::new(1.0, 0.0, 0.0).unwrap(), q0).unwrap();
        assert!((k.qx - q0).abs() < 1e-15 && k.qy == 0.0);
        assert!(unproject(SpherePoint::new(0.0, 0.0, 1.0).unwrap(), q0).is_err());
        assert!(SpherePoint::new(1.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn chord_examples() {
        let q0 = 0.4;
        let r = chord_identity_check(MomentumPoint::new(0.2, 0.1), MomentumPoint::new(0.2, 0.1), q0);
        assert_eq!((r.lhs.re, r.rhs.re), (0.0, 0.0));
        let r = chord_identity_check(MomentumPoint::new(0.0, 0.0), MomentumPoint::new(q0, 0.0), q0);
        assert!((r.lhs.re - 2f64.sqrt()).abs() < 1e-15 && r.passed);
    }

    #[test]
    fn clustering_partitions_everything() {
        let ev = [4.0, 1.335, 1.333, 1.331, 0.8, 0.79999];
        let c = KernelSpectrum::cluster(&ev, 1e-2);
        assert_eq!(c.iter().map(|c| c.multiplicity).collect::<Vec<_>>(), vec![1, 3, 2]);
    }

    #[test]
    fn loglog_slope_of_power_law() {
        let x = [1e-2, 5e-3, 2.5e-3];
        let y: Vec<f64> = x.iter().map(|a| 3.0 * a * a).collect();
        assert!((loglog_slope(&x, &y) - 2.0).abs() < 1e-12);
    }
}
