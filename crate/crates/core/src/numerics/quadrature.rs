//! Gauss-Legendre rules and polar tensor grids on the complex plane.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

use super::special::tail_cutoff_radius;
use super::ComplexSum;

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes an `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
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
        GaussLegendre { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(move |(&x, &w)| (mid + half * x, half * w))
    }

    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        self.mapped(a, b).map(|(x, w)| w * f(x)).sum()
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let d = nf * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Tensor rule on a disk: Gauss-Legendre in the radius, equispaced angles.
///
/// Weights include the `t dt dtheta` Jacobian, so summing them gives the
/// disk area `pi R^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarGrid {
    center: Complex64,
    cutoff_radius: f64,
    radii: Vec<f64>,
    radial_weights: Vec<f64>,
    angles: usize,
}

/// Relative tail mass tolerated by the default cutoff rule.
pub const TAIL_TOLERANCE: f64 = 1e-14;

impl PolarGrid {
    pub fn new(cutoff_radius: f64, radial_nodes: usize, angles: usize) -> Result<Self> {
        if !(cutoff_radius > 0.0) || !cutoff_radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "cutoff radius must be positive and finite, got {cutoff_radius}"
            )));
        }
        if radial_nodes == 0 || angles == 0 {
            return Err(Error::InvalidParameter(
                "polar grid needs at least one radial node and one angle".into(),
            ));
        }
        let rule = GaussLegendre::new(radial_nodes);
        let (radii, radial_weights): (Vec<f64>, Vec<f64>) = rule
            .mapped(0.0, cutoff_radius)
            .map(|(t, w)| (t, w * t))
            .unzip();
        Ok(PolarGrid {
            center: Complex64::new(0.0, 0.0),
            cutoff_radius,
            radii,
            radial_weights,
            angles,
        })
    }

    /// Grid resolving polynomials of `degree` against `e^{-alpha |z|^2}`:
    /// cutoff from the incomplete-gamma tail bound, at least
    /// `max(64, 2 degree)` radial nodes and `2 degree + 2` angles.
    pub fn for_degree(degree: usize, alpha: f64) -> Result<Self> {
        let cutoff = tail_cutoff_radius(degree as u64, alpha, TAIL_TOLERANCE);
        Self::new(cutoff, (2 * degree).max(64), 2 * degree + 2)
    }

    /// Same grid translated so that it is centred at `center`.
    pub fn centered_at(mut self, center: Complex64) -> Self {
        self.center = center;
        self
    }

    pub fn center(&self) -> Complex64 {
        self.center
    }

    pub fn cutoff_radius(&self) -> f64 {
        self.cutoff_radius
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    /// Radial weights including the Jacobian `t` (no angular factor).
    pub fn radial_weights(&self) -> &[f64] {
        &self.radial_weights
    }

    pub fn angles(&self) -> usize {
        self.angles
    }

    pub fn angle(&self, k: usize) -> f64 {
        2.0 * PI * k as f64 / self.angles as f64
    }

    pub fn angular_weight(&self) -> f64 {
        2.0 * PI / self.angles as f64
    }

    pub fn len(&self) -> usize {
        self.radii.len() * self.angles
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn node(&self, i: usize, k: usize) -> Complex64 {
        self.center + Complex64::from_polar(self.radii[i], self.angle(k))
    }

    /// All `(radial index, angular index, z, weight)` in row-major order.
    pub fn nodes(&self) -> impl Iterator<Item = (usize, usize, Complex64, f64)> + '_ {
        let aw = self.angular_weight();
        (0..self.radii.len()).flat_map(move |i| {
            (0..self.angles).map(move |k| (i, k, self.node(i, k), self.radial_weights[i] * aw))
        })
    }

    pub fn total_weight(&self) -> f64 {
        self.radial_weights.iter().sum::<f64>() * 2.0 * PI
    }
}

/// Quadrature of `f` over the grid's disk.
///
/// Samples may be taken in parallel; the reduction runs in node order so the
/// result does not depend on scheduling.
pub fn integrate_plane<F>(f: F, grid: &PolarGrid) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    let samples: Vec<(usize, usize, Complex64, f64, Complex64)> = grid
        .nodes()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(i, k, z, w)| (i, k, z, w, f(z)))
        .collect();
    let mut acc = ComplexSum::default();
    for (i, k, z, w, v) in samples {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite {
                radial: i,
                angular: k,
                z,
            });
        }
        acc.add(v * w);
    }
    Ok(acc.total())
}
