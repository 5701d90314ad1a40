//! Polar product quadrature on a disk in the complex plane.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..(n + 1) / 2 {
        let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-16 {
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
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadNode {
    pub alpha: Complex64,
    pub weight: f64,
}

/// Quadrature rule for `∫ f(α) d²α` over the disk `|α| ≤ radius`.
///
/// Nodes are stored ring by ring: radial index outer, angular index inner.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureScheme {
    radius: f64,
    radial_nodes: usize,
    angular_nodes: usize,
    nodes: Vec<QuadNode>,
}

impl QuadratureScheme {
    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn radial_nodes(&self) -> usize {
        self.radial_nodes
    }

    pub fn angular_nodes(&self) -> usize {
        self.angular_nodes
    }

    pub fn nodes(&self) -> &[QuadNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
        self.nodes.iter().map(|q| q.weight * f(q.alpha)).sum()
    }

    pub fn integrate_real(&self, f: impl Fn(Complex64) -> f64) -> f64 {
        self.nodes.iter().map(|q| q.weight * f(q.alpha)).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.nodes.iter().map(|q| q.weight).sum()
    }

    /// Rebuilds a scheme from a flat node list laid out ring by ring, as
    /// written to tomogram files. Ring sizes are inferred from the node
    /// radii and the radius from the total weight (`π R²`).
    pub fn from_nodes(nodes: Vec<QuadNode>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::InvalidQuadrature("no nodes".into()));
        }
        let first = nodes[0].alpha.norm();
        let angular = nodes
            .iter()
            .take_while(|q| (q.alpha.norm() - first).abs() <= 1e-12 * first.max(1.0))
            .count();
        if nodes.len() % angular != 0 {
            return Err(Error::InvalidQuadrature(format!(
                "{} nodes do not split into rings of {angular}",
                nodes.len()
            )));
        }
        let total: f64 = nodes.iter().map(|q| q.weight).sum();
        if !(total > 0.0) {
            return Err(Error::InvalidQuadrature("non-positive total weight".into()));
        }
        Ok(Self {
            radius: (total / PI).sqrt(),
            radial_nodes: nodes.len() / angular,
            angular_nodes: angular,
            nodes,
        })
    }

    /// Same node set (positions and weights), compared exactly.
    pub fn same_nodes(&self, other: &Self) -> bool {
        self.nodes == other.nodes
    }
}

/// Gauss–Legendre in `r ∈ [0, R]` with weight `r dr`, trapezoidal in `θ`.
pub fn disk_quadrature(radius: f64, radial_nodes: usize, angular_nodes: usize) -> Result<QuadratureScheme> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidQuadrature(format!("radius must be positive, got {radius}")));
    }
    if radial_nodes < 4 || angular_nodes < 4 {
        return Err(Error::InvalidQuadrature(format!(
            "node counts must be at least 4, got {radial_nodes}×{angular_nodes}"
        )));
    }
    let (x, w) = gauss_legendre(radial_nodes);
    let dtheta = 2.0 * PI / angular_nodes as f64;
    let mut nodes = Vec::with_capacity(radial_nodes * angular_nodes);
    for (xi, wi) in x.iter().zip(&w) {
        let r = 0.5 * radius * (xi + 1.0);
        let radial_weight = 0.5 * radius * wi * r;
        for j in 0..angular_nodes {
            nodes.push(QuadNode {
                alpha: Complex64::from_polar(r, j as f64 * dtheta),
                weight: radial_weight * dtheta,
            });
        }
    }
    Ok(QuadratureScheme {
        radius,
        radial_nodes,
        angular_nodes,
        nodes,
    })
}
