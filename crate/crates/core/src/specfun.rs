//! Special functions: associated Legendre and Laguerre functions, Bessel
//! functions of the first kind and spherical harmonics.
//!
//! Legendre functions carry the `(-1)^m` factor on the cut,
//! `P_n^m(x) = (-1)^m (1 - x^2)^{m/2} d^m P_n(x) / dx^m`. The only other phase
//! in the crate is the spherical-harmonic factor `c_lm = (-i)^{|m|}`. With this
//! pair the Legendre–Bessel–Laguerre relation in [`crate::identity`] holds for
//! every `0 <= m <= n`.
//!
//! Recurrences are upward in degree. They are accurate to a few ulps times the
//! degree up to [`MAX_STABLE_DEGREE`]; past that the functions still evaluate
//! but relative accuracy degrades roughly linearly with degree.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Largest degree for which Legendre and Laguerre values are documented to
/// stay within ~1e-13 relative accuracy.
pub const MAX_STABLE_DEGREE: u32 = 32;

/// Associated Legendre function `P_n^m(x)` for `0 <= m <= n`, `|x| <= 1`.
pub fn assoc_legendre(n: u32, m: u32, x: f64) -> Result<f64> {
    if m > n {
        return Err(domain(format!("assoc_legendre: m = {m} exceeds n = {n}")));
    }
    if !(-1.0..=1.0).contains(&x) {
        return Err(domain(format!("assoc_legendre: |x| = {} > 1", x.abs())));
    }
    Ok(legendre_unchecked(n, m, x))
}

pub(crate) fn legendre_unchecked(n: u32, m: u32, x: f64) -> f64 {
    // P_m^m = (-1)^m (2m-1)!! (1-x^2)^{m/2}
    let s = ((1.0 - x) * (1.0 + x)).sqrt();
    let mut pmm = 1.0;
    let mut odd = 1.0;
    for _ in 0..m {
        pmm *= -odd * s;
        odd += 2.0;
    }
    if n == m {
        return pmm;
    }
    let mut prev = pmm;
    let mut cur = x * f64::from(2 * m + 1) * pmm;
    for l in (m + 2)..=n {
        let l_f = f64::from(l);
        let next = ((2.0 * l_f - 1.0) * x * cur - (l_f + f64::from(m) - 1.0) * prev) / (l_f - f64::from(m));
        prev = cur;
        cur = next;
    }
    cur
}

/// Generalized Laguerre polynomial `L_k^alpha(x)`, normalized so that
/// `L_k^alpha(0) = C(k + alpha, k)`.
pub fn assoc_laguerre(k: u32, alpha: u32, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(domain(format!("assoc_laguerre: x = {x} must be >= 0")));
    }
    Ok(laguerre_unchecked(k, alpha, x))
}

pub(crate) fn laguerre_unchecked(k: u32, alpha: u32, x: f64) -> f64 {
    let a = f64::from(alpha);
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for j in 1..k {
        let j_f = f64::from(j);
        let next = ((2.0 * j_f + 1.0 + a - x) * cur - (j_f + a) * prev) / (j_f + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Bessel function of the first kind `J_m(x)` for integer (possibly
/// negative) order and `x >= 0`.
pub fn bessel_j(m: i32, x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(domain(format!("bessel_j: x = {x} must be >= 0")));
    }
    if !x.is_finite() {
        return Err(domain("bessel_j: x must be finite"));
    }
    Ok(bessel_j_unchecked(m, x))
}

pub(crate) fn bessel_j_unchecked(m: i32, x: f64) -> f64 {
    let order = m.unsigned_abs();
    let v = bessel_j_nonneg(order, x);
    if m < 0 && order % 2 == 1 {
        -v
    } else {
        v
    }
}

fn bessel_j_nonneg(m: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    // The power series has no destructive cancellation while x^2/4 <= m + 1.
    if x * x <= 4.0 * (f64::from(m) + 1.0) {
        bessel_series(m, x)
    } else {
        bessel_miller(m, x)
    }
}

fn bessel_series(m: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for k in 1..=m {
        term *= half / f64::from(k);
    }
    let q = -half * half;
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + f64::from(m)));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() || k > 500.0 {
            break;
        }
        k += 1.0;
    }
    sum
}

/// Miller's backward recurrence normalized with `J_0 + 2 sum J_{2k} = 1`.
fn bessel_miller(m: u32, x: f64) -> f64 {
    const BIG: f64 = 1e250;
    let top = f64::from(m).max(x.ceil());
    let mut start = (top + 20.0 + (40.0 * top).sqrt()) as u32;
    start += start % 2;

    let mut next = 0.0;
    let mut cur = 1e-300;
    let mut norm = 0.0;
    let mut result = 0.0;
    for k in (1..=start).rev() {
        if k == m {
            result = cur;
        }
        if k % 2 == 0 {
            norm += 2.0 * cur;
        }
        let prev = 2.0 * f64::from(k) / x * cur - next;
        next = cur;
        cur = prev;
        if cur.abs() > BIG {
            cur /= BIG;
            next /= BIG;
            norm /= BIG;
            result /= BIG;
        }
    }
    if m == 0 {
        result = cur;
    }
    norm += cur;
    result / norm
}

/// Derivative `J_m'(x) = (J_{m-1}(x) - J_{m+1}(x)) / 2`.
pub(crate) fn bessel_j_derivative(m: i32, x: f64) -> f64 {
    0.5 * (bessel_j_unchecked(m - 1, x) - bessel_j_unchecked(m + 1, x))
}

/// Approximate `k`-th positive zero (`k >= 1`) of `J_m`: McMahon's expansion
/// refined by safeguarded Newton steps.
///
/// For small `k` and large `m` McMahon's series is poor and Newton may land on
/// a neighbouring zero; callers that only need lobe boundaries tolerate that.
pub fn bessel_j_zero(m: u32, k: u32) -> f64 {
    assert!(k >= 1, "zeros are counted from 1");
    let mu = 4.0 * f64::from(m) * f64::from(m);
    let beta = (f64::from(k) + 0.5 * f64::from(m) - 0.25) * PI;
    let b8 = 8.0 * beta;
    let mut t = beta
        - (mu - 1.0) / b8
        - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8.powi(3))
        - 32.0 * (mu - 1.0) * (83.0 * mu * mu - 982.0 * mu + 3779.0) / (15.0 * b8.powi(5));
    if !(t > 0.0) {
        t = beta;
    }
    let order = m as i32;
    for _ in 0..8 {
        let d = bessel_j_derivative(order, t);
        if d == 0.0 {
            break;
        }
        let step = bessel_j_unchecked(order, t) / d;
        // Stay inside the half-period around the current guess.
        if !step.is_finite() || step.abs() > FRAC_PI_2 {
            break;
        }
        t -= step;
        if step.abs() <= 1e-15 * t {
            break;
        }
    }
    t
}

/// Unit-modulus phase taking one of the four values `{1, -i, -1, i}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PhaseFactor {
    One,
    MinusI,
    MinusOne,
    I,
}

impl PhaseFactor {
    /// `(-i)^k` for `k >= 0`.
    pub fn minus_i_pow(k: u32) -> Self {
        match k % 4 {
            0 => Self::One,
            1 => Self::MinusI,
            2 => Self::MinusOne,
            _ => Self::I,
        }
    }

    /// `i^k` for `k >= 0`.
    pub fn i_pow(k: u32) -> Self {
        match k % 4 {
            0 => Self::One,
            1 => Self::I,
            2 => Self::MinusOne,
            _ => Self::MinusI,
        }
    }

    pub fn value(self) -> Complex64 {
        match self {
            Self::One => Complex64::new(1.0, 0.0),
            Self::MinusI => Complex64::new(0.0, -1.0),
            Self::MinusOne => Complex64::new(-1.0, 0.0),
            Self::I => Complex64::new(0.0, 1.0),
        }
    }
}

impl From<PhaseFactor> for Complex64 {
    fn from(p: PhaseFactor) -> Self {
        p.value()
    }
}

/// The spherical-harmonic phase `c_lm = (-i)^{|m|}`.
pub fn phase_factor(m: i32) -> PhaseFactor {
    PhaseFactor::minus_i_pow(m.unsigned_abs())
}

/// Choice of `c_lm`. Only [`PhaseConvention::MinusI`] makes the integral
/// relation hold; [`PhaseConvention::PlusI`] exists as a negative control.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum PhaseConvention {
    #[default]
    MinusI,
    PlusI,
}

impl PhaseConvention {
    pub fn factor(self, m: i32) -> PhaseFactor {
        match self {
            Self::MinusI => PhaseFactor::minus_i_pow(m.unsigned_abs()),
            Self::PlusI => PhaseFactor::i_pow(m.unsigned_abs()),
        }
    }
}

/// `(n - m)! / (n + m)!` for `m <= n`.
pub fn factorial_ratio(n: u32, m: u32) -> f64 {
    debug_assert!(m <= n);
    if n <= MAX_STABLE_DEGREE {
        let mut r = 1.0;
        for k in (n - m + 1)..=(n + m) {
            r /= f64::from(k);
        }
        r
    } else {
        let log: f64 = ((n - m + 1)..=(n + m)).map(|k| f64::from(k).ln()).sum();
        (-log).exp()
    }
}

/// Spherical harmonic
/// `Y_l^m = c_lm sqrt((2l+1)/(4π) (l-|m|)!/(l+|m|)!) P_l^{|m|}(cos θ) e^{imφ}`.
pub fn spherical_harmonic(l: u32, m: i32, theta: f64, phi: f64) -> Result<Complex64> {
    let am = m.unsigned_abs();
    if am > l {
        return Err(domain(format!("spherical_harmonic: |m| = {am} exceeds l = {l}")));
    }
    Ok(harmonic_from_cos(l, m, theta.cos(), phi))
}

pub(crate) fn harmonic_from_cos(l: u32, m: i32, cos_theta: f64, phi: f64) -> Complex64 {
    let am = m.unsigned_abs();
    let norm = ((2.0 * f64::from(l) + 1.0) / (4.0 * PI) * factorial_ratio(l, am)).sqrt();
    let p = legendre_unchecked(l, am, cos_theta.clamp(-1.0, 1.0));
    phase_factor(m).value() * norm * p * Complex64::from_polar(1.0, f64::from(m) * phi)
}
