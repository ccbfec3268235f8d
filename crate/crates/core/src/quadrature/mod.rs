//! Numerical integration engines.
//!
//! - [`integrate_finite`]: globally adaptive Gauss–Kronrod (10/21) on a finite
//!   interval, for real or complex integrands.
//! - [`integrate_semi_infinite`]: the same engine after mapping `[a, ∞)` onto
//!   `[0, 1)`, for smooth non-oscillatory integrands.
//! - [`integrate_oscillatory_semiinfinite`]: integrals of the form
//!   `∫_0^∞ f(y) dy` where `f` carries a factor `J_m(ω √y)`. The integral is
//!   split at the zeros of the Bessel factor and the alternating partial sums
//!   are accelerated with Wynn's epsilon algorithm.
//! - [`SphereGrid`]: Gauss–Legendre × trapezoid product rule on the unit sphere.

mod kronrod;
mod oscillatory;
mod sphere;

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use kronrod::{integrate_finite, integrate_finite_with, integrate_semi_infinite, FiniteOptions};
pub use oscillatory::{
    integrate_bessel_lobes, integrate_oscillatory_semiinfinite, integrate_oscillatory_with, OscillatoryOptions,
};
pub use sphere::{gauss_legendre, SphereGrid};

/// Scalar types the adaptive engine can integrate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Value of a numerical integral with its error estimate and cost.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadResult<T> {
    pub value: T,
    pub abs_error_estimate: f64,
    pub n_evals: usize,
    /// `true` when the error estimate met the requested tolerance.
    pub converged: bool,
}
