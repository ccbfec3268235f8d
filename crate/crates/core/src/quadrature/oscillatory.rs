use super::kronrod::{integrate_finite_with, FiniteOptions};
use super::QuadResult;
use crate::error::{Error, Result};
use crate::specfun::bessel_j_zero;

/// Options for the lobe-wise oscillatory engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatoryOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Lobes summed before the extrapolated estimate is trusted.
    pub min_lobes: usize,
    pub max_lobes: usize,
    /// Subdivision budget of each lobe integral.
    pub lobe_subdivisions: usize,
}

impl Default for OscillatoryOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            min_lobes: 6,
            max_lobes: 400,
            lobe_subdivisions: 200,
        }
    }
}

const EPSILON_DEPTH: usize = 50;

/// Wynn's epsilon algorithm, fed one partial sum at a time.
///
/// Only the latest antidiagonal of the table is stored. Even columns hold the
/// extrapolated estimates; odd columns are auxiliary.
#[derive(Debug, Default)]
struct EpsilonTable {
    diagonal: Vec<f64>,
    history: Vec<f64>,
}

impl EpsilonTable {
    fn push(&mut self, partial_sum: f64) -> f64 {
        let mut next = Vec::with_capacity(self.diagonal.len() + 1);
        next.push(partial_sum);
        for k in 0..self.diagonal.len().min(EPSILON_DEPTH) {
            let delta = next[k] - self.diagonal[k];
            if delta == 0.0 {
                break;
            }
            let above = if k == 0 { 0.0 } else { self.diagonal[k - 1] };
            let entry = above + 1.0 / delta;
            if !entry.is_finite() {
                break;
            }
            next.push(entry);
        }
        self.diagonal = next;
        let best = self.diagonal[(self.diagonal.len() - 1) & !1];
        self.history.push(best);
        best
    }

    fn error(&self) -> f64 {
        let h = &self.history;
        let n = h.len();
        if n < 4 {
            return f64::INFINITY;
        }
        let e = h[n - 1];
        h[n - 4..n - 1].iter().map(|p| (e - p).abs()).sum::<f64>() + 5.0 * f64::EPSILON * e.abs()
    }
}

/// `∫_0^∞ f(y) dy` where `f` contains the factor `J_order(frequency √y)`.
///
/// With `t = √y` the integrand becomes `2t f(t²)`, which is split at the zeros
/// of `J_order(frequency t)` and summed lobe by lobe with epsilon acceleration.
pub fn integrate_oscillatory_semiinfinite<F>(
    f: F,
    bessel_order: i32,
    frequency: f64,
    tol: f64,
) -> Result<QuadResult<f64>>
where
    F: Fn(f64) -> f64,
{
    integrate_oscillatory_with(
        f,
        bessel_order,
        frequency,
        &OscillatoryOptions {
            abs_tol: tol,
            ..OscillatoryOptions::default()
        },
    )
}

pub fn integrate_oscillatory_with<F>(
    f: F,
    bessel_order: i32,
    frequency: f64,
    opts: &OscillatoryOptions,
) -> Result<QuadResult<f64>>
where
    F: Fn(f64) -> f64,
{
    integrate_bessel_lobes(|t: f64| 2.0 * t * f(t * t), bessel_order, frequency, opts)
}

/// `∫_0^∞ g(t) dt` where `g` contains the factor `J_order(frequency t)`.
pub fn integrate_bessel_lobes<G>(
    g: G,
    bessel_order: i32,
    frequency: f64,
    opts: &OscillatoryOptions,
) -> Result<QuadResult<f64>>
where
    G: Fn(f64) -> f64,
{
    if !(frequency > 0.0) || !frequency.is_finite() {
        return Err(Error::Domain(format!(
            "oscillatory quadrature needs frequency > 0, got {frequency}"
        )));
    }
    if !(opts.abs_tol > 0.0 || opts.rel_tol > 0.0) {
        return Err(Error::InvalidInput(
            "oscillatory quadrature: tolerance must be positive".into(),
        ));
    }
    let order = bessel_order.unsigned_abs();

    let mut table = EpsilonTable::default();
    let mut partial = 0.0f64;
    let mut lobe_error = 0.0;
    let mut n_evals = 0;
    let mut left = 0.0;
    let mut estimate = 0.0f64;
    let mut extrapolation_error = f64::INFINITY;
    let mut previous_met = false;

    for k in 1..=opts.max_lobes {
        let mut right = bessel_j_zero(order, k as u32) / frequency;
        if !(right > left) {
            right = left + std::f64::consts::PI / frequency;
        }
        let scale = estimate.abs().max(partial.abs());
        let lobe_opts = FiniteOptions {
            abs_tol: (0.05 * opts.abs_tol.max(opts.rel_tol * scale)).max(f64::MIN_POSITIVE),
            rel_tol: 1e-13,
            max_subdivisions: opts.lobe_subdivisions,
        };
        let lobe = integrate_finite_with(&g, left, right, &lobe_opts)?;
        n_evals += lobe.n_evals;
        partial += lobe.value;
        lobe_error += lobe.abs_error_estimate;
        left = right;

        estimate = table.push(partial);
        extrapolation_error = table.error();
        let target = opts.abs_tol.max(opts.rel_tol * estimate.abs());
        let met = extrapolation_error + lobe_error <= target;
        // two consecutive confirmations guard against a lucky coincidence
        let confirmed = met && previous_met;
        previous_met = met;
        if k >= opts.min_lobes && confirmed {
            return Ok(QuadResult {
                value: estimate,
                abs_error_estimate: extrapolation_error + lobe_error,
                n_evals,
                converged: true,
            });
        }
    }
    Ok(QuadResult {
        value: estimate,
        abs_error_estimate: extrapolation_error + lobe_error,
        n_evals,
        converged: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{assoc_legendre, bessel_j};

    #[test]
    fn epsilon_accelerates_alternating_series() {
        // ln 2 = 1 - 1/2 + 1/3 - ...
        let mut table = EpsilonTable::default();
        let mut s = 0.0;
        let mut est = 0.0;
        for k in 1..=20 {
            s += if k % 2 == 1 { 1.0 } else { -1.0 } / f64::from(k);
            est = table.push(s);
        }
        assert!((est - 2f64.ln()).abs() < 1e-12);
        assert!((s - 2f64.ln()).abs() > 1e-2);
    }

    #[test]
    fn known_bessel_integral() {
        // ∫ J_0(x√y)/(1+y)^{3/2} dy = 2 e^{-x}
        for &x in &[0.1, 1.0, 10.0] {
            let r = integrate_oscillatory_semiinfinite(
                |y| bessel_j(0, x * y.sqrt()).unwrap() * (1.0 + y).powf(-1.5),
                0,
                x,
                1e-12,
            )
            .unwrap();
            assert!(r.converged);
            let exact = 2.0 * (-x).exp();
            assert!((r.value - exact).abs() < 1e-11, "x={x}: {} vs {exact}", r.value);
            assert!((r.value - exact).abs() <= r.abs_error_estimate.max(1e-13));
        }
    }

    #[test]
    fn order_one_closed_form() {
        let x = 1.0;
        let r = integrate_oscillatory_semiinfinite(
            |y| {
                assoc_legendre(1, 1, (1.0 - y) / (1.0 + y)).unwrap()
                    * bessel_j(1, x * y.sqrt()).unwrap()
                    * (1.0 + y).powf(-1.5)
            },
            1,
            x,
            1e-11,
        )
        .unwrap();
        let exact = -4.0 / (3.0 * std::f64::consts::E);
        assert!((r.value - exact).abs() < 1e-10);
    }

    #[test]
    fn rejects_zero_frequency() {
        assert!(integrate_oscillatory_semiinfinite(|y| y, 0, 0.0, 1e-8).is_err());
        assert!(integrate_oscillatory_semiinfinite(|y| y, 0, -1.0, 1e-8).is_err());
    }
}
