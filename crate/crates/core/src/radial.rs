//! Finite-volume radial solver, used as an independent check of the spectrum.
//!
//! The radial equation `-(1/ρ)(ρR')' + (m²/ρ² - 2/ρ) R = E R` is multiplied by
//! `ρ` and integrated over cells `[kh, (k+1)h]`, giving a symmetric-definite
//! pencil `A R = E B R` with `B = diag(ρ_i)`. The flux through `ρ = 0`
//! vanishes, so no boundary condition is imposed there; `R(r_max) = 0`.
//! Scaling `u_i = sqrt(ρ_i) R_i` yields a symmetric tridiagonal matrix.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigenstates::{energy_level, radial_factor, QuantumNumbers};
use crate::error::{Error, Result};
use crate::report::VerificationReport;
use crate::tridiag::SymTridiagonal;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Uniform,
}

/// Cell-centered grid with nodes `(i + 1/2) h`, `h = r_max / n_points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    pub r_max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
    /// Position of the first node.
    pub offset: f64,
}

pub const DEFAULT_POINTS: usize = 8000;
pub const DEFAULT_R_MAX: f64 = 180.0;

impl Default for RadialGrid {
    fn default() -> Self {
        Self::uniform(DEFAULT_R_MAX, DEFAULT_POINTS).expect("default grid is valid")
    }
}

impl RadialGrid {
    pub fn uniform(r_max: f64, n_points: usize) -> Result<Self> {
        if !(r_max > 0.0) || !r_max.is_finite() || n_points < 2 {
            return Err(Error::InvalidInput(format!(
                "radial grid needs r_max > 0 and at least 2 points (got {r_max}, {n_points})"
            )));
        }
        Ok(Self {
            r_max,
            n_points,
            spacing: Spacing::Uniform,
            offset: 0.5 * r_max / n_points as f64,
        })
    }

    pub fn step(&self) -> f64 {
        self.r_max / self.n_points as f64
    }

    pub fn node(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.step()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.node(i)).collect()
    }

    /// Same extent, twice the points.
    pub fn refined(&self) -> Self {
        Self::uniform(self.r_max, 2 * self.n_points).expect("refinement of a valid grid")
    }

    fn matrix(&self, m: i32) -> SymTridiagonal {
        let n = self.n_points;
        let h = self.step();
        let h2 = h * h;
        let m2 = f64::from(m) * f64::from(m);
        let face = |k: usize| k as f64 * h;
        let r: Vec<f64> = self.nodes();
        let diag = (0..n)
            .map(|i| {
                let right = if i + 1 == n { 2.0 * face(n) } else { face(i + 1) };
                ((face(i) + right) / h2 + m2 / r[i] - 2.0) / r[i]
            })
            .collect();
        let off = (0..n - 1)
            .map(|i| -face(i + 1) / h2 / (r[i] * r[i + 1]).sqrt())
            .collect();
        SymTridiagonal::new(diag, off).expect("finite grid coefficients")
    }
}

/// Lowest radial eigenvalues for one `m` channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialSpectrum {
    pub m: i32,
    pub energies: Vec<f64>,
    pub node_counts: Vec<usize>,
}

/// A computed eigenpair with `R` normalized so `2π ∫ R² ρ dρ = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialState {
    pub energy: f64,
    pub nodes: Vec<f64>,
    pub values: Vec<f64>,
}

impl RadialState {
    pub fn node_count(&self) -> usize {
        let peak = self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let significant: Vec<f64> = self.values.iter().copied().filter(|v| v.abs() > 1e-8 * peak).collect();
        significant.windows(2).filter(|w| w[0] * w[1] < 0.0).count()
    }
}

fn check_decay(m: i32, n_states: usize, grid: &RadialGrid) -> Result<()> {
    let n_top = m.unsigned_abs() + n_states as u32 - 1;
    let q0 = energy_level(n_top).q0;
    if (-q0 * grid.r_max).exp() >= 1e-10 {
        return Err(Error::GridTooCoarse(format!(
            "r_max = {} truncates the n = {n_top} state (needs r_max > {:.1})",
            grid.r_max,
            23.1 / q0
        )));
    }
    Ok(())
}

/// Lowest `n_states` eigenpairs of the `m` channel on one grid.
pub fn radial_states(m: i32, n_states: usize, grid: &RadialGrid) -> Result<Vec<RadialState>> {
    if n_states == 0 || n_states > grid.n_points {
        return Err(Error::InvalidInput(format!("cannot compute {n_states} states")));
    }
    check_decay(m, n_states, grid)?;
    let t = grid.matrix(m);
    let r = grid.nodes();
    let h = grid.step();
    (0..n_states)
        .map(|k| {
            let energy = t.eigenvalue(k)?;
            let u = t.eigenvector(energy);
            let mut values: Vec<f64> = u.iter().zip(&r).map(|(ui, ri)| ui / ri.sqrt()).collect();
            let norm: f64 =
                values.iter().zip(&r).map(|(v, ri)| v * v * ri).sum::<f64>() * h * 2.0 * std::f64::consts::PI;
            let s = 1.0 / norm.sqrt();
            values.iter_mut().for_each(|v| *v *= s);
            Ok(RadialState {
                energy,
                nodes: r.clone(),
                values,
            })
        })
        .collect()
}

/// Lowest `n_states` eigenvalues of the `m` channel on one grid. The `k`-th
/// should approach `-1/(k + |m| + 1/2)²`.
pub fn solve_radial(m: i32, n_states: usize, grid: &RadialGrid) -> Result<RadialSpectrum> {
    let states = radial_states(m, n_states, grid)?;
    Ok(RadialSpectrum {
        m,
        energies: states.iter().map(|s| s.energy).collect(),
        node_counts: states.iter().map(RadialState::node_count).collect(),
    })
}

/// Default relative drift between the `N` and `2N` solves above which the grid
/// is reported as too coarse.
pub const DEFAULT_DRIFT_TOL: f64 = 1e-2;

/// Richardson-extrapolated energies from grids `N` and `2N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtrapolatedSpectrum {
    pub m: i32,
    pub energies: Vec<f64>,
    pub coarse: Vec<f64>,
    pub fine: Vec<f64>,
    /// Largest `|E_2N - E_N| / |E_2N|`.
    pub drift: f64,
}

/// `E = (4 E_2N - E_N) / 3`, cancelling the `h²` term.
pub fn solve_radial_extrapolated(
    m: i32,
    n_states: usize,
    grid: &RadialGrid,
    drift_tol: f64,
) -> Result<ExtrapolatedSpectrum> {
    let coarse = solve_radial(m, n_states, grid)?.energies;
    let fine = solve_radial(m, n_states, &grid.refined())?.energies;
    let drift = coarse
        .iter()
        .zip(&fine)
        .map(|(c, f)| ((f - c) / f).abs())
        .fold(0.0, f64::max);
    if drift > drift_tol {
        return Err(Error::GridTooCoarse(format!(
            "eigenvalue drift {drift:e} between {} and {} points exceeds {drift_tol:e}",
            grid.n_points,
            2 * grid.n_points
        )));
    }
    Ok(ExtrapolatedSpectrum {
        m,
        energies: coarse.iter().zip(&fine).map(|(c, f)| (4.0 * f - c) / 3.0).collect(),
        coarse,
        fine,
        drift,
    })
}

/// Computed energy of shell `n` in every channel `0 <= m <= n`; the report
/// error is the spread relative to the shell's mean energy.
pub fn degeneracy_check(n: u32, grid: &RadialGrid, tol: f64) -> Result<VerificationReport> {
    let energies = (0..=n as i32)
        .into_par_iter()
        .map(|m| {
            let k = (n - m as u32) as usize;
            solve_radial_extrapolated(m, k + 1, grid, DEFAULT_DRIFT_TOL).map(|s| s.energies[k])
        })
        .collect::<Result<Vec<f64>>>()?;
    let max = energies.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = energies.iter().sum::<f64>() / energies.len() as f64;
    let spread = (max - min) / mean.abs();
    Ok(VerificationReport::with_error(
        format!("degeneracy n={n} (relative spread)"),
        spread,
        0.0,
        spread,
        tol,
        0,
    ))
}

/// One row of the spectrum table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRow {
    pub n: u32,
    pub m: i32,
    pub computed: f64,
    pub exact: f64,
    pub rel_error: f64,
}

/// Extrapolated energies for every `0 <= m <= n <= n_max`, ordered by `n` then `m`.
pub fn spectrum_table(n_max: u32, grid: &RadialGrid) -> Result<Vec<SpectrumRow>> {
    let channels = (0..=n_max as i32)
        .into_par_iter()
        .map(|m| solve_radial_extrapolated(m, (n_max - m as u32) as usize + 1, grid, DEFAULT_DRIFT_TOL))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for n in 0..=n_max {
        for m in 0..=n as i32 {
            let computed = channels[m as usize].energies[(n - m as u32) as usize];
            let exact = energy_level(n).energy;
            rows.push(SpectrumRow {
                n,
                m,
                computed,
                exact,
                rel_error: ((computed - exact) / exact).abs(),
            });
        }
    }
    Ok(rows)
}

/// Max-norm difference between the computed radial function of `(n, m)` and
/// the closed form, over nodes with `ρ <= interior`.
///
/// The `N` and `2N` solutions are combined as `(4 R_2N - R_N) / 3` on the
/// coarse nodes, with the fine solution interpolated by a cubic. Signs are
/// fixed at the largest closed-form value.
pub fn eigenfunction_deviation(qn: QuantumNumbers, grid: &RadialGrid, interior: f64) -> Result<f64> {
    let k = (qn.n() - qn.abs_m()) as usize;
    let coarse = radial_states(qn.m(), k + 1, grid)?.pop().expect("k + 1 states");
    let fine = radial_states(qn.m(), k + 1, &grid.refined())?
        .pop()
        .expect("k + 1 states");
    let exact: Vec<f64> = coarse.nodes.iter().map(|&r| radial_factor(qn, r)).collect();
    let i_peak = (0..exact.len())
        .max_by(|&a, &b| exact[a].abs().total_cmp(&exact[b].abs()))
        .unwrap_or(0);
    let fine_at = |i: usize| interpolate_midpoint(&fine.values, 2 * i);
    let orient = |v: f64| if v * exact[i_peak] < 0.0 { -1.0 } else { 1.0 };
    let s_coarse = orient(coarse.values[i_peak]);
    let s_fine = orient(fine_at(i_peak));
    Ok(coarse
        .nodes
        .iter()
        .enumerate()
        .filter(|(_, r)| **r <= interior)
        .map(|(i, _)| {
            let extrapolated = (4.0 * s_fine * fine_at(i) - s_coarse * coarse.values[i]) / 3.0;
            (extrapolated - exact[i]).abs()
        })
        .fold(0.0, f64::max))
}

/// Cubic Lagrange value halfway between `v[j]` and `v[j + 1]`.
fn interpolate_midpoint(v: &[f64], j: usize) -> f64 {
    let n = v.len();
    if n < 4 {
        return 0.5 * (v[j] + v[(j + 1).min(n - 1)]);
    }
    // stencil j-1..=j+2, shifted inward at the ends
    let start = j.saturating_sub(1).min(n - 4);
    let t = j as f64 + 0.5 - start as f64;
    let mut sum = 0.0;
    for a in 0..4 {
        let mut w = 1.0;
        for b in 0..4 {
            if a != b {
                w *= (t - b as f64) / (a as f64 - b as f64);
            }
        }
        sum += w * v[start + a];
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_geometry() {
        let g = RadialGrid::uniform(10.0, 100).unwrap();
        assert_eq!(g.offset, 0.05);
        assert!((g.node(99) - 9.95).abs() < 1e-12);
        assert!(RadialGrid::uniform(-1.0, 10).is_err());
        assert_eq!(g.refined().n_points, 200);
    }

    #[test]
    fn short_box_is_rejected() {
        let g = RadialGrid::uniform(30.0, 2000).unwrap();
        assert!(matches!(solve_radial(0, 5, &g), Err(Error::GridTooCoarse(_))));
    }

    #[test]
    fn midpoint_interpolation_is_exact_for_cubics() {
        let v: Vec<f64> = (0..10)
            .map(|j| {
                let x = j as f64;
                x * x * x - 2.0 * x + 1.0
            })
            .collect();
        for j in [0usize, 4, 8] {
            let x = j as f64 + 0.5;
            assert!((interpolate_midpoint(&v, j) - (x * x * x - 2.0 * x + 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn second_order_convergence() {
        let g = RadialGrid::uniform(60.0, 2000).unwrap();
        let exact = -4.0;
        let e1 = solve_radial(0, 1, &g).unwrap().energies[0];
        let e2 = solve_radial(0, 1, &g.refined()).unwrap().energies[0];
        let ratio = (e1 - exact) / (e2 - exact);
        assert!((ratio - 4.0).abs() < 0.1, "ratio {ratio}");
    }
}
