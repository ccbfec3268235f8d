//! Structured outcome of an identity check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// Result of comparing a numerically evaluated left-hand side with a reference.
///
/// `passed` holds exactly when `abs_error <= tolerance * max(1, |rhs|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub label: String,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub abs_error: f64,
    pub rel_error: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Integrand evaluations spent (0 for closed-form checks).
    pub cost: usize,
}

impl VerificationReport {
    pub fn new(
        label: impl Into<String>,
        lhs: impl Into<Complex64>,
        rhs: impl Into<Complex64>,
        tolerance: f64,
        cost: usize,
    ) -> Self {
        let lhs = lhs.into();
        let rhs = rhs.into();
        let abs_error = (lhs - rhs).norm();
        Self::with_error(label, lhs, rhs, abs_error, tolerance, cost)
    }

    /// Build a report where the error is supplied by the caller, e.g. a
    /// maximum residual over many samples.
    pub fn with_error(
        label: impl Into<String>,
        lhs: impl Into<Complex64>,
        rhs: impl Into<Complex64>,
        abs_error: f64,
        tolerance: f64,
        cost: usize,
    ) -> Self {
        let lhs = lhs.into();
        let rhs = rhs.into();
        let scale = rhs.norm();
        let rel_error = if scale > 0.0 { abs_error / scale } else { abs_error };
        let passed = abs_error <= tolerance * scale.max(1.0);
        Self {
            label: label.into(),
            lhs,
            rhs,
            abs_error,
            rel_error,
            tolerance,
            passed,
            cost,
        }
    }

    /// Mark the report as failed regardless of the error, e.g. when the
    /// quadrature behind `lhs` did not converge.
    pub fn force_fail(mut self) -> Self {
        self.passed = false;
        self
    }

    /// Fail the report unless `condition` holds, e.g. an exact-arithmetic check.
    pub fn require(mut self, condition: bool) -> Self {
        self.passed &= condition;
        self
    }
}

/// Fixed float formatting used in every report file: 17 significant digits,
/// lowercase scientific notation.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule_scales_with_rhs() {
        let r = VerificationReport::new("big", 1000.0 + 1e-6, 1000.0, 1e-8, 0);
        assert!(r.passed);
        let r = VerificationReport::new("small", 1e-3 + 2e-8, 1e-3, 1e-8, 0);
        assert!(!r.passed);
        assert!((r.rel_error - 2e-5).abs() < 1e-12);
    }

    #[test]
    fn zero_tolerance_requires_exact_match() {
        assert!(VerificationReport::new("exact", 6.0, 6.0, 0.0, 0).passed);
        assert!(!VerificationReport::new("off", 6.0 + 1e-15, 6.0, 0.0, 0).passed);
    }

    #[test]
    fn float_format_is_fixed_width_scientific() {
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
        assert_eq!(fmt_f64(-2.0), "-2.0000000000000000e0");
    }
}
