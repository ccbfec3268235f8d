//! Symmetric tridiagonal eigenproblems: Sturm-sequence bisection for
//! eigenvalues, inverse iteration for eigenvectors.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
    pivmin: f64,
}

impl SymTridiagonal {
    /// `off[i]` couples rows `i` and `i + 1`.
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() || off.len() + 1 != diag.len() {
            return Err(Error::InvalidInput(format!(
                "tridiagonal: {} diagonal and {} off-diagonal entries",
                diag.len(),
                off.len()
            )));
        }
        if diag.iter().chain(&off).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("tridiagonal: non-finite entry".into()));
        }
        let emax = off.iter().fold(1.0f64, |m, e| m.max(e * e));
        Ok(Self {
            diag,
            off,
            pivmin: f64::MIN_POSITIVE * emax,
        })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        let mut count = 0;
        let mut q = self.diag[0] - x;
        for i in 0..self.diag.len() {
            if i > 0 {
                q = self.diag[i] - x - self.off[i - 1] * self.off[i - 1] / q;
            }
            if q.abs() < self.pivmin {
                q = -self.pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn gershgorin(&self) -> (f64, f64) {
        let n = self.diag.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 } + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based).
    pub fn eigenvalue(&self, k: usize) -> Result<f64> {
        if k >= self.len() {
            return Err(Error::InvalidInput(format!(
                "eigenvalue index {k} out of range for dimension {}",
                self.len()
            )));
        }
        let (mut lo, mut hi) = self.gershgorin();
        let pad = f64::EPSILON * (lo.abs().max(hi.abs()) + 1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..256 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.sturm_count(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// The `count` smallest eigenvalues in increasing order.
    pub fn lowest_eigenvalues(&self, count: usize) -> Result<Vec<f64>> {
        (0..count).map(|k| self.eigenvalue(k)).collect()
    }

    /// Unit eigenvector for a converged eigenvalue `lambda`, by inverse
    /// iteration. The sign is fixed so the largest-magnitude component is
    /// positive.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let scale = self.diag.iter().fold(0.0f64, |m, d| m.max(d.abs())).max(1.0);
        let shift = lambda + 4.0 * f64::EPSILON * scale;
        let mut x: Vec<f64> = (0..n).map(|i| 1.0 + 0.1 * ((i * 7919) % 13) as f64).collect();
        for _ in 0..4 {
            x = self.solve_shifted(shift, &x);
            let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
            x.iter_mut().for_each(|v| *v /= norm);
        }
        let imax = (0..n).max_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs())).unwrap_or(0);
        if x[imax] < 0.0 {
            x.iter_mut().for_each(|v| *v = -*v);
        }
        x
    }

    /// Solve `(T - s I) y = b` by Gaussian elimination with partial pivoting.
    fn solve_shifted(&self, s: f64, b: &[f64]) -> Vec<f64> {
        let n = self.len();
        // Row i of U has entries u0[i] (diagonal), u1[i], u2[i] to the right.
        let mut u0 = vec![0.0; n];
        let mut u1 = vec![0.0; n];
        let mut u2 = vec![0.0; n];
        let mut y = b.to_vec();
        let tiny = f64::EPSILON * self.pivmin.max(f64::MIN_POSITIVE).sqrt().max(1e-300);

        let mut a = self.diag[0] - s;
        let mut c = if n > 1 { self.off[0] } else { 0.0 };
        let mut d = 0.0;
        for i in 0..n {
            if i + 1 < n {
                let low = self.off[i];
                let next_diag = self.diag[i + 1] - s;
                let next_off = if i + 2 < n { self.off[i + 1] } else { 0.0 };
                if low.abs() > a.abs() {
                    // swap rows i and i+1
                    u0[i] = low;
                    u1[i] = next_diag;
                    u2[i] = next_off;
                    let m = a / low;
                    y.swap(i, i + 1);
                    y[i + 1] -= m * y[i];
                    a = c - m * next_diag;
                    c = d - m * next_off;
                    d = 0.0;
                } else {
                    if a == 0.0 {
                        a = tiny;
                    }
                    u0[i] = a;
                    u1[i] = c;
                    u2[i] = d;
                    let m = low / a;
                    y[i + 1] -= m * y[i];
                    a = next_diag - m * c;
                    c = next_off - m * d;
                    d = 0.0;
                }
            } else {
                u0[i] = if a == 0.0 { tiny } else { a };
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut v = y[i];
            if i + 1 < n {
                v -= u1[i] * x[i + 1];
            }
            if i + 2 < n {
                v -= u2[i] * x[i + 2];
            }
            x[i] = v / u0[i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn laplacian(n: usize) -> SymTridiagonal {
        SymTridiagonal::new(vec![2.0; n], vec![-1.0; n - 1]).unwrap()
    }

    #[test]
    fn discrete_laplacian_spectrum() {
        // eigenvalues 2 - 2 cos(kπ/(n+1))
        let n = 50;
        let t = laplacian(n);
        for k in 0..n {
            let exact = 2.0 - 2.0 * ((k + 1) as f64 * PI / (n + 1) as f64).cos();
            assert!((t.eigenvalue(k).unwrap() - exact).abs() < 1e-13);
        }
    }

    #[test]
    fn eigenvector_matches_sine_mode() {
        let n = 40;
        let t = laplacian(n);
        for k in [0usize, 1, 5] {
            let lam = t.eigenvalue(k).unwrap();
            let v = t.eigenvector(lam);
            let mut s: Vec<f64> = (0..n)
                .map(|i| ((i + 1) as f64 * (k + 1) as f64 * PI / (n + 1) as f64).sin())
                .collect();
            let norm = s.iter().map(|x| x * x).sum::<f64>().sqrt();
            let sign = if s.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>() < 0.0 {
                -1.0
            } else {
                1.0
            };
            s.iter_mut().for_each(|x| *x *= sign / norm);
            let err = s.iter().zip(&v).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-10, "mode {k}: {err}");
        }
    }

    #[test]
    fn pivoting_path_is_exercised() {
        // small diagonal forces row swaps
        let t = SymTridiagonal::new(vec![1e-3, 5.0, -2.0, 0.5], vec![3.0, 1.0, 4.0]).unwrap();
        let dense = nalgebra::DMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                [1e-3, 5.0, -2.0, 0.5][i]
            } else if i + 1 == j {
                [3.0, 1.0, 4.0][i]
            } else if j + 1 == i {
                [3.0, 1.0, 4.0][j]
            } else {
                0.0
            }
        });
        let mut ref_vals: Vec<f64> = dense.clone().symmetric_eigenvalues().iter().copied().collect();
        ref_vals.sort_by(f64::total_cmp);
        for (k, r) in ref_vals.iter().enumerate() {
            let lam = t.eigenvalue(k).unwrap();
            assert!((lam - r).abs() < 1e-12);
            let v = nalgebra::DVector::from_vec(t.eigenvector(lam));
            let res = (&dense * &v - &v * lam).norm();
            assert!(res < 1e-10, "k={k} residual {res}");
        }
    }

    #[test]
    fn rejects_mismatched_lengths() {
        assert!(SymTridiagonal::new(vec![1.0, 2.0], vec![]).is_err());
        assert!(SymTridiagonal::new(vec![], vec![]).is_err());
        assert!(laplacian(3).eigenvalue(3).is_err());
    }
}
