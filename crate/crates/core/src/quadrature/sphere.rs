use std::f64::consts::PI;

use super::QuadValue;

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = ((i as f64 + 0.75) / (nf + 0.5) * PI).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Product rule on the unit sphere: Gauss–Legendre in `cos θ` times the
/// trapezoid rule in `φ`.
///
/// An order-`p` grid has `p` polar and `2p` azimuthal nodes and integrates
/// spherical harmonics exactly through degree `p - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SphereGrid {
    order: usize,
    /// `(theta, phi)` pairs, polar index major.
    pub nodes: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
    cos_theta: Vec<f64>,
}

impl SphereGrid {
    /// # Panics
    /// If `order` is zero.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "sphere grid order must be at least 1");
        let (x, w) = gauss_legendre(order);
        let n_phi = 2 * order;
        let dphi = 2.0 * PI / n_phi as f64;
        let mut nodes = Vec::with_capacity(order * n_phi);
        let mut weights = Vec::with_capacity(order * n_phi);
        let mut cos_theta = Vec::with_capacity(order * n_phi);
        for (xi, wi) in x.iter().zip(&w) {
            let theta = xi.acos();
            for j in 0..n_phi {
                nodes.push((theta, j as f64 * dphi));
                weights.push(wi * dphi);
                cos_theta.push(*xi);
            }
        }
        Self {
            order,
            nodes,
            weights,
            cos_theta,
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `cos θ` of node `i`, exact from the Gauss rule rather than `cos(acos x)`.
    pub fn cos_theta(&self, i: usize) -> f64 {
        self.cos_theta[i]
    }

    /// Cartesian unit vector of node `i`.
    pub fn unit_vector(&self, i: usize) -> [f64; 3] {
        let (_, phi) = self.nodes[i];
        let z = self.cos_theta[i];
        let s = (1.0 - z * z).sqrt();
        [s * phi.cos(), s * phi.sin(), z]
    }

    /// `Σ w_i f(θ_i, φ_i)`.
    pub fn integrate<T: QuadValue, F: Fn(f64, f64) -> T>(&self, f: F) -> T {
        self.nodes
            .iter()
            .zip(&self.weights)
            .fold(T::zero(), |acc, (&(t, p), &w)| acc + f(t, p) * w)
    }
}
