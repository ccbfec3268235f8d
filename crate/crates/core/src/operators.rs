//! Finite-difference Runge–Lenz operator algebra on a cell-centered grid.
//!
//! `q̂ = -i∇` uses central differences, `q̂²` the five-point Laplacian, and
//! values outside the grid are taken as zero. The Runge–Lenz components are
//! assembled from `Â = q̂²ρ + ρĤ - 2q̂(q̂·ρ) - 3iq̂`, which needs no cross
//! products.

use std::fmt::Write as _;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_rational::Ratio;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigenstates::{psi_real, QuantumNumbers, RealSpacePoint};
use crate::error::{Error, Result};
use crate::focksphere::loglog_slope;
use crate::report::{fmt_f64, VerificationReport};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Complex samples on an `nx × ny` cell-centered grid; `values[i * ny + j]`
/// holds the sample at `(x_i, y_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    pub nx: usize,
    pub ny: usize,
    pub h: f64,
    /// Coordinates of node `(0, 0)`.
    pub origin_offset: (f64, f64),
    pub values: Vec<Complex64>,
}

impl GridField {
    /// Sample `f` on the `n × n` grid covering `[-half_width, half_width]²`.
    pub fn sample<F>(n: usize, half_width: f64, f: F) -> Self
    where
        F: Fn(f64, f64) -> Complex64 + Sync,
    {
        let h = 2.0 * half_width / n as f64;
        let x0 = -half_width + 0.5 * h;
        let mut field = Self {
            nx: n,
            ny: n,
            h,
            origin_offset: (x0, x0),
            values: vec![Complex64::new(0.0, 0.0); n * n],
        };
        field.fill(|_, _, x, y| f(x, y));
        field
    }

    pub fn x(&self, i: usize) -> f64 {
        self.origin_offset.0 + i as f64 * self.h
    }

    pub fn y(&self, j: usize) -> f64 {
        self.origin_offset.1 + j as f64 * self.h
    }

    fn zeros_like(&self) -> Self {
        Self {
            values: vec![Complex64::new(0.0, 0.0); self.values.len()],
            ..*self
        }
    }

    /// Value at `(i, j)`, zero outside the grid.
    pub fn get(&self, i: isize, j: isize) -> Complex64 {
        if i < 0 || j < 0 || i as usize >= self.nx || j as usize >= self.ny {
            Complex64::new(0.0, 0.0)
        } else {
            self.values[i as usize * self.ny + j as usize]
        }
    }

    fn fill<K>(&mut self, kernel: K)
    where
        K: Fn(usize, usize, f64, f64) -> Complex64 + Sync,
    {
        let (ny, h, (x0, y0)) = (self.ny, self.h, self.origin_offset);
        self.values.par_chunks_mut(ny).enumerate().for_each(|(i, row)| {
            let x = x0 + i as f64 * h;
            for (j, v) in row.iter_mut().enumerate() {
                *v = kernel(i, j, x, y0 + j as f64 * h);
            }
        });
    }

    fn map<K>(&self, kernel: K) -> Self
    where
        K: Fn(usize, usize, f64, f64) -> Complex64 + Sync,
    {
        let mut out = self.zeros_like();
        out.fill(kernel);
        out
    }

    fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[i * self.ny + j]
    }

    /// Largest magnitude on the outermost ring relative to the overall largest.
    pub fn boundary_ratio(&self) -> f64 {
        let peak = self.values.iter().fold(0.0f64, |m, v| m.max(v.norm()));
        if peak == 0.0 {
            return 0.0;
        }
        let mut edge = 0.0f64;
        for i in 0..self.nx {
            for j in 0..self.ny {
                if i == 0 || j == 0 || i + 1 == self.nx || j + 1 == self.ny {
                    edge = edge.max(self.at(i, j).norm());
                }
            }
        }
        edge / peak
    }

    /// `true` when the field is not decayed at the boundary (ratio above 1e-10).
    pub fn boundary_contaminated(&self) -> bool {
        self.boundary_ratio() > 1e-10
    }

    /// Euclidean inner product `Σ conj(f) g h²`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.values
            .par_iter()
            .zip(other.values.par_iter())
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * (self.h * self.h)
    }
}

impl Add for &GridField {
    type Output = GridField;
    fn add(self, rhs: Self) -> GridField {
        self.map(|i, j, _, _| self.at(i, j) + rhs.at(i, j))
    }
}

impl Sub for &GridField {
    type Output = GridField;
    fn sub(self, rhs: Self) -> GridField {
        self.map(|i, j, _, _| self.at(i, j) - rhs.at(i, j))
    }
}

impl Mul<&GridField> for Complex64 {
    type Output = GridField;
    fn mul(self, rhs: &GridField) -> GridField {
        rhs.map(|i, j, _, _| self * rhs.at(i, j))
    }
}

fn dx(f: &GridField) -> GridField {
    let s = 0.5 / f.h;
    f.map(|i, j, _, _| (f.get(i as isize + 1, j as isize) - f.get(i as isize - 1, j as isize)) * s)
}

fn dy(f: &GridField) -> GridField {
    let s = 0.5 / f.h;
    f.map(|i, j, _, _| (f.get(i as isize, j as isize + 1) - f.get(i as isize, j as isize - 1)) * s)
}

/// `q̂_x f = -i ∂_x f`.
pub fn qx(f: &GridField) -> GridField {
    -I * &dx(f)
}

/// `q̂_y f = -i ∂_y f`.
pub fn qy(f: &GridField) -> GridField {
    -I * &dy(f)
}

/// `q̂² f = -∇² f` with the five-point stencil.
pub fn q_squared(f: &GridField) -> GridField {
    let s = 1.0 / (f.h * f.h);
    f.map(|i, j, _, _| {
        let (i, j) = (i as isize, j as isize);
        (f.get(i, j) * 4.0 - f.get(i + 1, j) - f.get(i - 1, j) - f.get(i, j + 1) - f.get(i, j - 1)) * s
    })
}

fn times_x(f: &GridField) -> GridField {
    f.map(|i, j, x, _| f.at(i, j) * x)
}

fn times_y(f: &GridField) -> GridField {
    f.map(|i, j, _, y| f.at(i, j) * y)
}

/// `Ĥ = q̂² - 2/ρ`.
pub fn hamiltonian(f: &GridField) -> GridField {
    let lap = q_squared(f);
    f.map(|i, j, x, y| lap.at(i, j) - f.at(i, j) * (2.0 / x.hypot(y)))
}

/// `L̂_z = -i(x ∂_y - y ∂_x)`.
pub fn angular_momentum(f: &GridField) -> GridField {
    let fx = dx(f);
    let fy = dy(f);
    f.map(|i, j, x, y| -I * (fy.at(i, j) * x - fx.at(i, j) * y))
}

fn runge_lenz(f: &GridField, component: OperatorId) -> GridField {
    let xf = times_x(f);
    let yf = times_y(f);
    let q_dot_rho = &qx(&xf) + &qy(&yf);
    let (cf, c_h, q_c_qr, q_c_f) = match component {
        OperatorId::Ax => (xf, times_x(&hamiltonian(f)), qx(&q_dot_rho), qx(f)),
        _ => (yf, times_y(&hamiltonian(f)), qy(&q_dot_rho), qy(f)),
    };
    let a = q_squared(&cf);
    f.map(|i, j, _, _| a.at(i, j) + c_h.at(i, j) - q_c_qr.at(i, j) * 2.0 - I * 3.0 * q_c_f.at(i, j))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OperatorId {
    H,
    Lz,
    Ax,
    Ay,
}

pub fn apply_operator(op: OperatorId, f: &GridField) -> GridField {
    match op {
        OperatorId::H => hamiltonian(f),
        OperatorId::Lz => angular_momentum(f),
        OperatorId::Ax | OperatorId::Ay => runge_lenz(f, op),
    }
}

/// Operator identities checked on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Identity {
    /// `[H, L_z] = 0`
    HLz,
    /// `[H, A_x] = 0`
    HAx,
    /// `[H, A_y] = 0`
    HAy,
    /// `[L_z, A_x] = i A_y`
    LzAx,
    /// `[L_z, A_y] = -i A_x`
    LzAy,
    /// `[A_x, A_y] = -4i L_z H`
    AxAy,
    /// `A_x² + A_y² = H(4 L_z² + 1) + 4`
    ASquared,
}

impl Identity {
    pub const ALL: [Identity; 7] = [
        Identity::HLz,
        Identity::HAx,
        Identity::HAy,
        Identity::LzAx,
        Identity::LzAy,
        Identity::AxAy,
        Identity::ASquared,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Identity::HLz => "[H,Lz]=0",
            Identity::HAx => "[H,Ax]=0",
            Identity::HAy => "[H,Ay]=0",
            Identity::LzAx => "[Lz,Ax]=iAy",
            Identity::LzAy => "[Lz,Ay]=-iAx",
            Identity::AxAy => "[Ax,Ay]=-4iLzH",
            Identity::ASquared => "A^2=H(4Lz^2+1)+4",
        }
    }

    /// `(left - right) f` for the identity `left = right`.
    pub fn defect(self, f: &GridField) -> GridField {
        use OperatorId::*;
        let ap = apply_operator;
        match self {
            Identity::HLz => commutator(H, Lz, f),
            Identity::HAx => commutator(H, Ax, f),
            Identity::HAy => commutator(H, Ay, f),
            Identity::LzAx => &commutator(Lz, Ax, f) - &(I * &ap(Ay, f)),
            Identity::LzAy => &commutator(Lz, Ay, f) + &(I * &ap(Ax, f)),
            Identity::AxAy => &commutator(Ax, Ay, f) + &(I * 4.0 * &ap(Lz, &ap(H, f))),
            Identity::ASquared => {
                let a2 = &ap(Ax, &ap(Ax, f)) + &ap(Ay, &ap(Ay, f));
                let lz2 = ap(Lz, &ap(Lz, f));
                let inner = &(Complex64::new(4.0, 0.0) * &lz2) + f;
                let rhs = &ap(H, &inner) + &(Complex64::new(4.0, 0.0) * f);
                &a2 - &rhs
            }
        }
    }
}

/// `(AB - BA) f`.
pub fn commutator(a: OperatorId, b: OperatorId, f: &GridField) -> GridField {
    &apply_operator(a, &apply_operator(b, f)) - &apply_operator(b, &apply_operator(a, f))
}

/// Radius of the disk around the Coulomb singularity excluded from residual
/// norms.
pub const CORE_RADIUS: f64 = 1.0;

/// `‖g‖ / ‖f‖`, with `‖g‖` over the interior two-thirds minus the core disk
/// and `‖f‖` over the interior two-thirds.
pub fn relative_residual(defect: &GridField, f: &GridField) -> f64 {
    let limit = (f.nx as f64 * f.h) / 3.0;
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..f.nx {
        let x = f.x(i);
        if x.abs() > limit {
            continue;
        }
        for j in 0..f.ny {
            let y = f.y(j);
            if y.abs() > limit {
                continue;
            }
            den += f.at(i, j).norm_sqr();
            if x.hypot(y) >= CORE_RADIUS {
                num += defect.at(i, j).norm_sqr();
            }
        }
    }
    (num / den).sqrt()
}

/// Interior relative residual of `(AB - BA - rhs) f` for one of the
/// commutator identities.
pub fn commutator_residual(identity: Identity, f: &GridField) -> f64 {
    relative_residual(&identity.defect(f), f)
}

/// Interior relative residual of `(A_x² + A_y² - H(4L_z² + 1) - 4) f`.
pub fn a_squared_residual(f: &GridField) -> f64 {
    commutator_residual(Identity::ASquared, f)
}

/// `‖(Ĥ - E_n) Ψ‖ / ‖Ψ‖` on the interior.
pub fn eigen_residual(qn: QuantumNumbers, n: usize, half_width: f64) -> f64 {
    let f = TestField::Eigenstate(qn).sample(n, half_width);
    let e = qn.level().energy;
    let hf = hamiltonian(&f);
    relative_residual(&(&hf - &(Complex64::new(e, 0.0) * &f)), &f)
}

/// Fields the identities are exercised on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum TestField {
    Eigenstate(QuantumNumbers),
    /// `exp(-|ρ - center|² / (2σ²))`.
    Gaussian {
        center: (f64, f64),
        sigma: f64,
    },
}

impl TestField {
    pub fn label(&self) -> String {
        match self {
            TestField::Eigenstate(qn) => format!("psi_{}{}", qn.n(), qn.m()),
            TestField::Gaussian { .. } => "gaussian".to_string(),
        }
    }

    pub fn sample(&self, n: usize, half_width: f64) -> GridField {
        match *self {
            TestField::Eigenstate(qn) => {
                GridField::sample(n, half_width, |x, y| psi_real(qn, RealSpacePoint::from_cartesian(x, y)))
            }
            TestField::Gaussian { center, sigma } => GridField::sample(n, half_width, |x, y| {
                let r2 = (x - center.0).powi(2) + (y - center.1).powi(2);
                Complex64::new((-r2 / (2.0 * sigma * sigma)).exp(), 0.0)
            }),
        }
    }

    /// `Ψ_00`, `Ψ_10`, `Ψ_21` and an off-center Gaussian with `σ = 1.5`.
    pub fn standard() -> Vec<TestField> {
        let qn = |n, m| QuantumNumbers::new(n, m).expect("valid quantum numbers");
        vec![
            TestField::Eigenstate(qn(0, 0)),
            TestField::Eigenstate(qn(1, 0)),
            TestField::Eigenstate(qn(2, 1)),
            TestField::Gaussian {
                center: (1.0, 0.7),
                sigma: 1.5,
            },
        ]
    }
}

/// Exact check of `n(n+1) = -(1/4 + 1/E_n)` with `E_n = -1/(n+1/2)²`.
pub fn j_squared_identity(n: u32) -> VerificationReport {
    let half = Ratio::new(1i128, 2);
    let nn = Ratio::from_integer(i128::from(n));
    let energy = -(Ratio::from_integer(1) / ((nn + half) * (nn + half)));
    let rhs = -(Ratio::new(1, 4) + energy.recip());
    let lhs = nn * (nn + 1);
    let diff = lhs - rhs;
    let to_f64 = |r: Ratio<i128>| *r.numer() as f64 / *r.denom() as f64;
    VerificationReport::with_error(
        format!("j(j+1) n={n}"),
        to_f64(lhs),
        to_f64(rhs),
        to_f64(diff).abs(),
        0.0,
        0,
    )
    .require(diff == Ratio::from_integer(0))
}

/// Named grid-size ladder on the domain `[-half_width, half_width]²`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementPreset {
    pub name: String,
    pub sizes: Vec<usize>,
    pub half_width: f64,
}

impl RefinementPreset {
    pub fn named(name: &str) -> Result<Self> {
        let sizes = match name {
            "default" => vec![256, 512, 1024],
            "fast" => vec![128, 256, 512],
            "coarse" => vec![64],
            _ => {
                return Err(Error::InvalidInput(format!(
                    "unknown preset '{name}' (expected default, fast or coarse)"
                )))
            }
        };
        Ok(Self {
            name: name.to_string(),
            sizes,
            half_width: 12.0,
        })
    }
}

/// Accepted band for the fitted convergence order.
pub const SLOPE_RANGE: (f64, f64) = (1.85, 2.15);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub identity: Identity,
    pub field: String,
    pub n: usize,
    pub h: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlopeFit {
    pub identity: Identity,
    pub field: String,
    /// `None` when the preset has a single grid.
    pub slope: Option<f64>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementStudy {
    pub preset: RefinementPreset,
    pub rows: Vec<ResidualRow>,
    pub fits: Vec<SlopeFit>,
    /// `max(‖A_x Ψ_00‖, ‖A_y Ψ_00‖) / ‖Ψ_00‖` on the finest grid.
    pub a_psi00: f64,
    /// Fields whose boundary ring exceeds 1e-10 of their peak.
    pub boundary_warnings: Vec<String>,
    pub slope_checked: bool,
}

impl RefinementStudy {
    pub fn all_passed(&self) -> bool {
        self.fits.iter().all(|f| f.passed)
    }

    pub fn worst_slope_deviation(&self) -> f64 {
        self.fits
            .iter()
            .filter_map(|f| f.slope)
            .map(|s| (s - 2.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("identity,field,n,h,residual\n");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.identity.label(),
                r.field,
                r.n,
                fmt_f64(r.h),
                fmt_f64(r.residual)
            );
        }
        out
    }
}

/// Residuals of every identity on every standard field at each preset size,
/// with a log-log slope fit per (identity, field).
pub fn refinement_study(preset: &RefinementPreset) -> RefinementStudy {
    let fields = TestField::standard();
    let mut rows = Vec::new();
    let mut boundary_warnings = Vec::new();
    let mut a_psi00 = f64::NAN;
    for &n in &preset.sizes {
        for field in &fields {
            let f = field.sample(n, preset.half_width);
            if n == preset.sizes[0] && f.boundary_contaminated() {
                boundary_warnings.push(field.label());
            }
            for identity in Identity::ALL {
                rows.push(ResidualRow {
                    identity,
                    field: field.label(),
                    n,
                    h: f.h,
                    residual: commutator_residual(identity, &f),
                });
            }
        }
        let psi00 = TestField::standard()[0].sample(n, preset.half_width);
        a_psi00 = relative_residual(&apply_operator(OperatorId::Ax, &psi00), &psi00)
            .max(relative_residual(&apply_operator(OperatorId::Ay, &psi00), &psi00));
    }
    let slope_checked = preset.sizes.len() >= 2;
    let mut fits = Vec::new();
    for identity in Identity::ALL {
        for field in &fields {
            let label = field.label();
            let (h, r): (Vec<f64>, Vec<f64>) = rows
                .iter()
                .filter(|row| row.identity == identity && row.field == label)
                .map(|row| (row.h, row.residual))
                .unzip();
            let slope = slope_checked.then(|| loglog_slope(&h, &r));
            fits.push(SlopeFit {
                identity,
                field: label,
                slope,
                passed: slope.is_none_or(|s| (SLOPE_RANGE.0..=SLOPE_RANGE.1).contains(&s)),
            });
        }
    }
    RefinementStudy {
        preset: preset.clone(),
        rows,
        fits,
        a_psi00,
        boundary_warnings,
        slope_checked,
    }
}
