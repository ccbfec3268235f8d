//! The Legendre–Bessel–Laguerre integral relation
//!
//! ```text
//! ∫_0^∞ P_n^m((1-y)/(1+y)) J_m(x√y) / (1+y)^{3/2} dy
//!     = (-1)^n (2x)^m e^{-x} L_{n-m}^{2m}(2x) / (n + 1/2)
//! ```
//!
//! together with its complex-phase form for signed `m`, the Legendre parity
//! relation it relies on, and batch scans over `(n, m, x)`.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::{
    integrate_finite_with, integrate_oscillatory_with, FiniteOptions, OscillatoryOptions, QuadResult,
};
use crate::report::{fmt_f64, VerificationReport};
use crate::specfun::{bessel_j_unchecked, laguerre_unchecked, legendre_unchecked, PhaseConvention, PhaseFactor};

/// `x = q0 ρ`, `y = q²/q0²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScaledVariables {
    pub x: f64,
    pub y: f64,
}

impl ScaledVariables {
    pub fn new(q0: f64, rho: f64, q: f64) -> Result<Self> {
        if !(q0 > 0.0) || !(rho >= 0.0) || !(q >= 0.0) {
            return Err(domain(format!(
                "scaled variables need q0 > 0, rho >= 0, q >= 0 (got {q0}, {rho}, {q})"
            )));
        }
        Ok(Self {
            x: q0 * rho,
            y: q * q / (q0 * q0),
        })
    }
}

fn check_indices(n: u32, m: i32) -> Result<()> {
    if m.unsigned_abs() > n {
        return Err(domain(format!("need |m| <= n, got n = {n}, m = {m}")));
    }
    Ok(())
}

/// `∫_0^∞ P_n^{|m|}((1-y)/(1+y)) J_m(x√y) / (1+y)^{3/2} dy` for signed `m`,
/// to within `tol · max(1, |I|)`.
pub fn integral_lhs(n: u32, m: i32, x: f64, tol: f64) -> Result<QuadResult<f64>> {
    check_indices(n, m)?;
    let am = m.unsigned_abs();
    let opts = OscillatoryOptions {
        abs_tol: tol,
        rel_tol: tol,
        ..OscillatoryOptions::default()
    };
    integrate_oscillatory_with(
        |y| {
            let s = 1.0 + y;
            legendre_unchecked(n, am, (1.0 - y) / s) * bessel_j_unchecked(m, x * y.sqrt()) / (s * s.sqrt())
        },
        m,
        x,
        &opts,
    )
}

/// `(2x)^{|m|} e^{-x} L_{n-|m|}^{2|m|}(2x) / (n + 1/2)`.
pub fn laguerre_side(n: u32, m: i32, x: f64) -> f64 {
    let am = m.unsigned_abs();
    (2.0 * x).powi(am as i32) * (-x).exp() * laguerre_unchecked(n - am, 2 * am, 2.0 * x) / (f64::from(n) + 0.5)
}

fn sign(k: u32) -> f64 {
    if k.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn quadrature_failure(r: &QuadResult<f64>, what: String) -> Error {
    Error::Quadrature {
        reason: what,
        partial: r.value,
        abs_error: r.abs_error_estimate,
        n_evals: r.n_evals,
    }
}

/// Check the real relation for `0 <= m <= n`, `x > 0`.
///
/// Fails with [`Error::Quadrature`] (carrying the partial value) when the
/// integral does not reach `tol / 10` relative to `max(1, |lhs|)`.
pub fn verify_new_integral(n: u32, m: u32, x: f64, tol: f64) -> Result<VerificationReport> {
    if m > n {
        return Err(domain(format!("need m <= n, got n = {n}, m = {m}")));
    }
    if !(x > 0.0) {
        return Err(domain(format!(
            "x must be positive, got {x}; use verify_zero_frequency for x = 0"
        )));
    }
    let m = m as i32;
    let q = integral_lhs(n, m, x, 0.1 * tol)?;
    if !q.converged {
        return Err(quadrature_failure(&q, format!("n={n} m={m} x={x}")));
    }
    let rhs = sign(n) * laguerre_side(n, m, x);
    Ok(VerificationReport::new(
        format!("integral n={n} m={m} x={x}"),
        q.value,
        rhs,
        tol,
        q.n_evals,
    ))
}

/// Check `c_nm (-1)^{n+m} (-i)^m ∫ … = (2x)^{|m|} e^{-x} L/(n+1/2)` as complex
/// numbers, with `c_nm = (-i)^{|m|}`.
pub fn verify_phase_form(n: u32, m: i32, x: f64, tol: f64) -> Result<VerificationReport> {
    verify_phase_form_with(n, m, x, tol, PhaseConvention::MinusI)
}

/// [`verify_phase_form`] with a selectable `c_nm`, for the sign-sensitivity control.
pub fn verify_phase_form_with(
    n: u32,
    m: i32,
    x: f64,
    tol: f64,
    convention: PhaseConvention,
) -> Result<VerificationReport> {
    check_indices(n, m)?;
    if !(x > 0.0) {
        return Err(domain(format!("x must be positive, got {x}")));
    }
    let am = m.unsigned_abs();
    let q = integral_lhs(n, m, x, 0.1 * tol)?;
    if !q.converged {
        return Err(quadrature_failure(&q, format!("phase form n={n} m={m} x={x}")));
    }
    let minus_i_m = if m >= 0 {
        PhaseFactor::minus_i_pow(am)
    } else {
        PhaseFactor::i_pow(am)
    };
    let lhs = convention.factor(m).value() * minus_i_m.value() * sign(n + am) * q.value;
    Ok(VerificationReport::new(
        format!("phase n={n} m={m} x={x} c={convention:?}"),
        lhs,
        laguerre_side(n, m, x),
        tol,
        q.n_evals,
    ))
}

/// `P_n^m((y-1)/(y+1)) = (-1)^{n+m} P_n^m((1-y)/(1+y))`, worst residual over
/// the samples.
pub fn verify_parity(n: u32, m: u32, y_samples: &[f64]) -> Result<VerificationReport> {
    if m > n {
        return Err(domain(format!("need m <= n, got n = {n}, m = {m}")));
    }
    let mut worst = (0.0, 0.0, 0.0);
    for &y in y_samples {
        if !(y >= 0.0) {
            return Err(domain(format!("parity samples must be non-negative, got {y}")));
        }
        let lhs = legendre_unchecked(n, m, (y - 1.0) / (y + 1.0));
        let rhs = sign(n + m) * legendre_unchecked(n, m, (1.0 - y) / (1.0 + y));
        let res = (lhs - rhs).abs();
        if res >= worst.2 {
            worst = (lhs, rhs, res);
        }
    }
    Ok(VerificationReport::with_error(
        format!("parity n={n} m={m}"),
        worst.0,
        worst.1,
        worst.2,
        1e-12,
        0,
    ))
}

/// The `x → 0` limit for `m = 0`:
/// `∫_0^∞ P_n((1-y)/(1+y)) (1+y)^{-3/2} dy = (-1)^n / (n + 1/2)`, which for
/// `n = 0` is `∫ (1+y)^{-3/2} dy = 2`.
pub fn verify_zero_frequency(n: u32, tol: f64) -> Result<VerificationReport> {
    // y = s², s = t/(1-t) keeps the integrand bounded at t = 1.
    let opts = FiniteOptions {
        abs_tol: 0.1 * tol,
        rel_tol: 0.0,
        max_subdivisions: 2000,
    };
    let q = integrate_finite_with(
        |t: f64| {
            let u = 1.0 - t;
            let s = t / u;
            let y = s * s;
            let w = 1.0 + y;
            legendre_unchecked(n, 0, (1.0 - y) / w) / (w * w.sqrt()) * 2.0 * s / (u * u)
        },
        0.0,
        1.0,
        &opts,
    )?;
    if !q.converged {
        return Err(quadrature_failure(&q, format!("zero-frequency n={n}")));
    }
    Ok(VerificationReport::new(
        format!("integral n={n} m=0 x=0"),
        q.value,
        sign(n) / (f64::from(n) + 0.5),
        tol,
        q.n_evals,
    ))
}

/// One `(n, m, x)` case of a scan.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanEntry {
    pub n: u32,
    pub m: u32,
    pub x: f64,
    pub report: VerificationReport,
    /// Set when the quadrature failed; `report.lhs` then holds the partial value.
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub entries: Vec<ScanEntry>,
    pub passed: usize,
    pub failed: usize,
    pub worst_abs_error: f64,
    /// Largest `abs_error / max(1, |rhs|)`.
    pub worst_scaled_error: f64,
    pub total_cost: usize,
}

impl ScanReport {
    pub fn all_passed(&self) -> bool {
        self.failed == 0
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,m,x,lhs,rhs,abs_error,rel_error,passed,cost\n");
        for e in &self.entries {
            let r = &e.report;
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                e.n,
                e.m,
                fmt_f64(e.x),
                fmt_f64(r.lhs.re),
                fmt_f64(r.rhs.re),
                fmt_f64(r.abs_error),
                fmt_f64(r.rel_error),
                r.passed,
                r.cost
            );
        }
        out
    }
}

/// Default scan cap on `n`; cost grows with the Legendre oscillation count.
pub const DEFAULT_MAX_SCAN_N: u32 = 12;

/// Run [`verify_new_integral`] for every `0 <= m <= n <= n_max` and every
/// `x`, in parallel. Failed quadratures are recorded as failed entries.
pub fn scan_report(n_max: u32, x_values: &[f64], tol: f64) -> Result<ScanReport> {
    if x_values.is_empty() {
        return Err(Error::InvalidInput("scan needs at least one x value".into()));
    }
    if let Some(x) = x_values.iter().find(|x| !(**x > 0.0)) {
        return Err(domain(format!("scan x values must be positive, got {x}")));
    }
    let cases: Vec<(u32, u32, f64)> = (0..=n_max)
        .flat_map(|n| (0..=n).flat_map(move |m| x_values.iter().map(move |&x| (n, m, x))))
        .collect();
    let entries: Vec<ScanEntry> = cases
        .par_iter()
        .map(|&(n, m, x)| {
            let rhs = sign(n) * laguerre_side(n, m as i32, x);
            match verify_new_integral(n, m, x, tol) {
                Ok(report) => ScanEntry {
                    n,
                    m,
                    x,
                    report,
                    failure: None,
                },
                Err(err) => {
                    let (partial, cost) = match &err {
                        Error::Quadrature { partial, n_evals, .. } => (*partial, *n_evals),
                        _ => (f64::NAN, 0),
                    };
                    let report =
                        VerificationReport::new(format!("integral n={n} m={m} x={x}"), partial, rhs, tol, cost)
                            .force_fail();
                    ScanEntry {
                        n,
                        m,
                        x,
                        report,
                        failure: Some(err.to_string()),
                    }
                }
            }
        })
        .collect();
    let passed = entries.iter().filter(|e| e.report.passed).count();
    let worst_abs_error = entries.iter().map(|e| e.report.abs_error).fold(0.0, nan_max);
    let worst_scaled_error = entries
        .iter()
        .map(|e| e.report.abs_error / e.report.rhs.norm().max(1.0))
        .fold(0.0, nan_max);
    let total_cost = entries.iter().map(|e| e.report.cost).sum();
    Ok(ScanReport {
        failed: entries.len() - passed,
        passed,
        worst_abs_error,
        worst_scaled_error,
        total_cost,
        entries,
    })
}

fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}
