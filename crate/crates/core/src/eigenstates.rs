//! Closed-form bound states: energies, real-space and momentum-space
//! wavefunctions, and the Hankel-transform bridge between the two.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate_bessel_lobes, integrate_semi_infinite, OscillatoryOptions};
use crate::report::VerificationReport;
use crate::specfun::{
    bessel_j_unchecked, factorial_ratio, laguerre_unchecked, legendre_unchecked, phase_factor, PhaseFactor,
};

/// Principal quantum number `n` and azimuthal quantum number `m`, `|m| <= n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumNumbers {
    n: u32,
    m: i32,
}

impl QuantumNumbers {
    pub fn new(n: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > n {
            return Err(domain(format!("|m| = {} exceeds n = {n}", m.unsigned_abs())));
        }
        Ok(Self { n, m })
    }

    pub fn n(self) -> u32 {
        self.n
    }

    pub fn m(self) -> i32 {
        self.m
    }

    pub fn abs_m(self) -> u32 {
        self.m.unsigned_abs()
    }

    pub fn level(self) -> EnergyLevel {
        energy_level(self.n)
    }

    /// Every state with principal number at most `n_max`, ordered by `n` then `m`.
    pub fn all_up_to(n_max: u32) -> Vec<Self> {
        (0..=n_max)
            .flat_map(|n| {
                let n_i = n as i32;
                (-n_i..=n_i).map(move |m| Self { n, m })
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyLevel {
    /// Energy in excitonic Rydbergs, `-q0²`.
    pub energy: f64,
    pub q0: f64,
}

/// `E_n = -1/(n + 1/2)²`, `q0 = 1/(n + 1/2)`.
pub fn energy_level(n: u32) -> EnergyLevel {
    let q0 = 1.0 / (f64::from(n) + 0.5);
    EnergyLevel { energy: -q0 * q0, q0 }
}

/// Size of shell `n`: `2n + 1`.
pub fn degeneracy(n: u32) -> u32 {
    2 * n + 1
}

/// Polar coordinates `(ρ, φ_ρ)` of a point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RealSpacePoint {
    pub rho: f64,
    pub phi_rho: f64,
}

impl RealSpacePoint {
    pub fn new(rho: f64, phi_rho: f64) -> Result<Self> {
        if !(rho >= 0.0) {
            return Err(domain(format!("rho must be non-negative, got {rho}")));
        }
        Ok(Self { rho, phi_rho })
    }

    pub fn from_cartesian(x: f64, y: f64) -> Self {
        Self {
            rho: x.hypot(y),
            phi_rho: y.atan2(x),
        }
    }
}

/// Cartesian momentum `(q_x, q_y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentumPoint {
    pub qx: f64,
    pub qy: f64,
}

impl MomentumPoint {
    pub fn new(qx: f64, qy: f64) -> Self {
        Self { qx, qy }
    }

    pub fn from_polar(q: f64, phi: f64) -> Self {
        Self {
            qx: q * phi.cos(),
            qy: q * phi.sin(),
        }
    }

    pub fn q(self) -> f64 {
        self.qx.hypot(self.qy)
    }

    pub fn phi_q(self) -> f64 {
        self.qy.atan2(self.qx)
    }

    pub fn q_squared(self) -> f64 {
        self.qx * self.qx + self.qy * self.qy
    }
}

/// Real radial factor of `Ψ_nm`, so that `Ψ = R(ρ) e^{imφ}`.
pub fn radial_factor(qn: QuantumNumbers, rho: f64) -> f64 {
    let EnergyLevel { q0, .. } = qn.level();
    let am = qn.abs_m();
    let norm = (q0.powi(3) * factorial_ratio(qn.n, am) / PI).sqrt();
    let s = 2.0 * q0 * rho;
    norm * s.powi(am as i32) * (-q0 * rho).exp() * laguerre_unchecked(qn.n - am, 2 * am, s)
}

/// Normalized real-space eigenfunction `Ψ_nm(ρ, φ_ρ)`.
pub fn psi_real(qn: QuantumNumbers, p: RealSpacePoint) -> Complex64 {
    radial_factor(qn, p.rho) * Complex64::from_polar(1.0, f64::from(qn.m) * p.phi_rho)
}

/// Real part of `Φ_nm / (c_nm e^{imφ})`, a function of `|q|` only.
pub fn momentum_radial_factor(qn: QuantumNumbers, q: f64) -> f64 {
    let EnergyLevel { q0, .. } = qn.level();
    let am = qn.abs_m();
    let q2 = q * q;
    let q02 = q0 * q0;
    let cos_theta = (q2 - q02) / (q2 + q02);
    (2.0 * PI * factorial_ratio(qn.n, am)).sqrt()
        * (2.0 * q0 / (q2 + q02)).powf(1.5)
        * legendre_unchecked(qn.n, am, cos_theta)
}

/// Normalized momentum-space eigenfunction `Φ_nm(q)`.
pub fn phi_momentum(qn: QuantumNumbers, k: MomentumPoint) -> Complex64 {
    let phase = phase_factor(qn.m).value();
    let azimuthal = if qn.m == 0 {
        Complex64::new(1.0, 0.0)
    } else {
        Complex64::from_polar(1.0, f64::from(qn.m) * k.phi_q())
    };
    phase * momentum_radial_factor(qn, k.q()) * azimuthal
}

/// Reconstruct `Ψ(ρ)` from `Φ` through the one-dimensional Bessel (Hankel)
/// integral and compare it with [`psi_real`].
pub fn fourier_consistency(qn: QuantumNumbers, p: RealSpacePoint, tol: f64) -> Result<VerificationReport> {
    let (value, cost) = psi_from_momentum(qn, p, 0.1 * tol)?;
    let exact = psi_real(qn, p);
    Ok(VerificationReport::new(
        format!("fourier n={} m={} rho={}", qn.n, qn.m, p.rho),
        value,
        exact,
        tol,
        cost,
    ))
}

/// `Ψ(ρ) = c (-i)^m / sqrt(2π) · sqrt((n-|m|)!/(n+|m|)!) · e^{imφ_ρ}
///        ∫_0^∞ (2q0/(q²+q0²))^{3/2} P_n^{|m|}(cos θ) J_m(qρ) q dq`.
///
/// Returns the value and the number of integrand evaluations.
pub fn psi_from_momentum(qn: QuantumNumbers, p: RealSpacePoint, tol: f64) -> Result<(Complex64, usize)> {
    let EnergyLevel { q0, .. } = qn.level();
    let am = qn.abs_m();
    let q02 = q0 * q0;
    let profile = move |q: f64| {
        let q2 = q * q;
        (2.0 * q0 / (q2 + q02)).powf(1.5) * legendre_unchecked(qn.n, am, (q2 - q02) / (q2 + q02)) * q
    };
    let (integral, cost) = if p.rho == 0.0 {
        if qn.m != 0 {
            (0.0, 0)
        } else {
            let r = integrate_semi_infinite(profile, 0.0, tol)?;
            check_converged(
                &r.value,
                r.abs_error_estimate,
                r.n_evals,
                r.converged,
                "radial integral at rho = 0",
            )?;
            (r.value, r.n_evals)
        }
    } else {
        let opts = OscillatoryOptions {
            abs_tol: tol,
            ..OscillatoryOptions::default()
        };
        let order = qn.m;
        let rho = p.rho;
        let r = integrate_bessel_lobes(
            move |q| profile(q) * bessel_j_unchecked(order, q * rho),
            order,
            rho,
            &opts,
        )?;
        check_converged(
            &r.value,
            r.abs_error_estimate,
            r.n_evals,
            r.converged,
            "Hankel integral",
        )?;
        (r.value, r.n_evals)
    };
    let minus_i_m = if qn.m >= 0 {
        PhaseFactor::minus_i_pow(am)
    } else {
        PhaseFactor::i_pow(am)
    };
    let prefactor = phase_factor(qn.m).value() * minus_i_m.value() * (factorial_ratio(qn.n, am) / (2.0 * PI)).sqrt();
    let azimuthal = Complex64::from_polar(1.0, f64::from(qn.m) * p.phi_rho);
    Ok((prefactor * azimuthal * integral, cost))
}

fn check_converged(value: &f64, abs_error: f64, n_evals: usize, converged: bool, what: &str) -> Result<()> {
    if converged {
        Ok(())
    } else {
        Err(Error::Quadrature {
            reason: what.to_string(),
            partial: *value,
            abs_error,
            n_evals,
        })
    }
}
