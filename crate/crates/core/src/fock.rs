//! Entire functions, reproducing kernels and the weighted norms
//! `||f||_{alpha,p}` on Fock spaces.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{
    integrate_plane, log_basis_coeff, log_factorial, tail_cutoff_radius, LogScalar, NeumaierSum,
    PolarGrid,
};

/// An exponent in `[1, inf]`; infinity is stored as `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Exponent(f64);

impl Exponent {
    pub const ONE: Exponent = Exponent(1.0);
    pub const TWO: Exponent = Exponent(2.0);
    pub const INFINITY: Exponent = Exponent(f64::INFINITY);

    pub fn new(p: f64) -> Result<Self> {
        if p >= 1.0 {
            Ok(Exponent(p))
        } else {
            Err(Error::InvalidParameter(format!(
                "exponent must lie in [1, inf], got {p}"
            )))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    /// `p'` with `1/p + 1/p' = 1`.
    pub fn conjugate(self) -> Exponent {
        if self.0 == 1.0 {
            Exponent::INFINITY
        } else if self.is_infinite() {
            Exponent::ONE
        } else {
            Exponent(self.0 / (self.0 - 1.0))
        }
    }

    /// `1 / p`, zero for `p = inf`.
    pub fn reciprocal(self) -> f64 {
        if self.is_infinite() {
            0.0
        } else {
            1.0 / self.0
        }
    }
}

impl TryFrom<f64> for Exponent {
    type Error = Error;

    fn try_from(p: f64) -> Result<Self> {
        Exponent::new(p)
    }
}

impl From<Exponent> for f64 {
    fn from(p: Exponent) -> f64 {
        p.0
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            f.write_str("inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

/// Gaussian weight `alpha` and the exponent pair `(p, q)` of an operator
/// `F^p_alpha -> F^q_alpha`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FockParams {
    pub alpha: f64,
    pub p: Exponent,
    pub q: Exponent,
}

impl FockParams {
    pub fn new(alpha: f64, p: Exponent, q: Exponent) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive and finite, got {alpha}"
            )));
        }
        Ok(FockParams { alpha, p, q })
    }

    /// The Hilbert setting `p = q = 2`.
    pub fn hilbert(alpha: f64) -> Result<Self> {
        Self::new(alpha, Exponent::TWO, Exponent::TWO)
    }

    /// `alpha / pi`, the constant in front of every Toeplitz integral.
    pub fn density_constant(&self) -> f64 {
        self.alpha / PI
    }
}

/// Default kernel truncation degree for points with `|z| <= r_max`:
/// `max(64, ceil(4 alpha r_max^2))`.
pub fn default_degree(r_max: f64, alpha: f64) -> usize {
    let d = (4.0 * alpha * r_max * r_max).ceil();
    (d as usize).max(64)
}

/// A polynomial `sum_n c_n z^n` with coefficients kept in log form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntireFunction {
    coefficients: Vec<LogScalar>,
}

impl EntireFunction {
    pub fn zero() -> Self {
        EntireFunction {
            coefficients: vec![LogScalar::ZERO],
        }
    }

    pub fn from_coefficients(mut coefficients: Vec<LogScalar>) -> Self {
        if coefficients.is_empty() {
            coefficients.push(LogScalar::ZERO);
        }
        EntireFunction { coefficients }
    }

    pub fn from_taylor(coefficients: &[Complex64]) -> Self {
        Self::from_coefficients(coefficients.iter().copied().map(LogScalar::from).collect())
    }

    /// Builds `f` from its coordinates `<f, e_n>` in the orthonormal basis.
    pub fn from_basis_coefficients(coords: &[Complex64], alpha: f64) -> Self {
        Self::from_coefficients(
            coords
                .iter()
                .enumerate()
                .map(|(n, &c)| LogScalar::from(c).scale_ln(log_basis_coeff(n as u64, alpha)))
                .collect(),
        )
    }

    /// The orthonormal monomial `e_n(z) = sqrt(alpha^n / n!) z^n`.
    pub fn basis(n: usize, alpha: f64) -> Self {
        let mut coefficients = vec![LogScalar::ZERO; n + 1];
        coefficients[n] = LogScalar::from_ln(log_basis_coeff(n as u64, alpha));
        EntireFunction { coefficients }
    }

    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn coefficients(&self) -> &[LogScalar] {
        &self.coefficients
    }

    pub fn coefficient(&self, n: usize) -> LogScalar {
        self.coefficients.get(n).copied().unwrap_or(LogScalar::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.iter().all(LogScalar::is_zero)
    }

    /// Coordinates `<f, e_n>_{F^2}` for `n < len`.
    pub fn basis_coefficients(&self, alpha: f64, len: usize) -> Vec<Complex64> {
        (0..len)
            .map(|n| {
                self.coefficient(n)
                    .scale_ln(-log_basis_coeff(n as u64, alpha))
                    .to_complex()
            })
            .collect()
    }

    pub fn scale(&self, factor: LogScalar) -> Self {
        Self::from_coefficients(self.coefficients.iter().map(|&c| c * factor).collect())
    }

    /// Coefficient-wise difference, computed relative to the larger magnitude.
    pub fn sub(&self, other: &EntireFunction) -> Self {
        let len = self.coefficients.len().max(other.coefficients.len());
        let coefficients = (0..len)
            .map(|n| {
                let a = self.coefficient(n);
                let b = other.coefficient(n);
                let s = a.log_magnitude().max(b.log_magnitude());
                if s == f64::NEG_INFINITY {
                    return LogScalar::ZERO;
                }
                let d = a.scale_ln(-s).to_complex() - b.scale_ln(-s).to_complex();
                LogScalar::from(d).scale_ln(s)
            })
            .collect();
        Self::from_coefficients(coefficients)
    }

    /// Exponentially scaled evaluation: returns `(ln scale, v)` with
    /// `f(z) = exp(ln scale) * v` and `|v| <= degree + 1`.
    fn eval_scaled(&self, z: Complex64, log_weight: f64) -> (f64, Complex64) {
        let r = z.norm();
        let (lr, theta) = if r == 0.0 {
            (f64::NEG_INFINITY, 0.0)
        } else {
            (r.ln(), z.arg())
        };
        let log_term = |n: usize, c: &LogScalar| {
            if n == 0 {
                c.log_magnitude()
            } else {
                c.log_magnitude() + n as f64 * lr
            }
        };
        let max = self
            .coefficients
            .iter()
            .enumerate()
            .map(|(n, c)| log_term(n, c))
            .fold(f64::NEG_INFINITY, f64::max);
        if max == f64::NEG_INFINITY {
            return (f64::NEG_INFINITY, Complex64::new(0.0, 0.0));
        }
        let mut re = NeumaierSum::default();
        let mut im = NeumaierSum::default();
        for (n, c) in self.coefficients.iter().enumerate() {
            let lt = log_term(n, c);
            if lt == f64::NEG_INFINITY {
                continue;
            }
            let phase = c.phase() + n as f64 * theta;
            let mag = (lt - max).exp();
            re.add(mag * phase.cos());
            im.add(mag * phase.sin());
        }
        (max + log_weight, Complex64::new(re.total(), im.total()))
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let (scale, v) = self.eval_scaled(z, 0.0);
        if scale == f64::NEG_INFINITY {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let out = v * scale.exp();
        if !out.re.is_finite() || !out.im.is_finite() {
            return Err(Error::Overflow {
                degree: self.degree(),
                modulus: z.norm(),
            });
        }
        Ok(out)
    }

    /// `f(z) e^{-alpha |z|^2 / 2}`, the quantity whose `L^p` norm defines
    /// `||f||_{alpha,p}`.
    pub fn eval_weighted(&self, z: Complex64, alpha: f64) -> Result<Complex64> {
        let (scale, v) = self.eval_scaled(z, -0.5 * alpha * z.norm_sqr());
        if scale == f64::NEG_INFINITY {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let out = v * scale.exp();
        if !out.re.is_finite() || !out.im.is_finite() {
            return Err(Error::Overflow {
                degree: self.degree(),
                modulus: z.norm(),
            });
        }
        Ok(out)
    }
}

/// `e_n(z) e^{-alpha |z|^2 / 2}` for `n < len`; these are the conjugated
/// basis coordinates of `k_z`.
pub fn weighted_basis(z: Complex64, alpha: f64, len: usize) -> Vec<Complex64> {
    let r = z.norm();
    let base = -0.5 * alpha * r * r;
    if r == 0.0 {
        let mut v = vec![Complex64::new(0.0, 0.0); len];
        if len > 0 {
            v[0] = Complex64::new(1.0, 0.0);
        }
        return v;
    }
    let (lr, theta) = (r.ln(), z.arg());
    (0..len)
        .map(|n| {
            let l = base + log_basis_coeff(n as u64, alpha) + n as f64 * lr;
            Complex64::from_polar(l.exp(), n as f64 * theta)
        })
        .collect()
}

/// Real radial factors `sqrt(alpha^n/n!) t^n e^{-alpha t^2 / 2}` for `n < len`.
pub fn weighted_radial_basis(t: f64, alpha: f64, len: usize) -> Vec<f64> {
    weighted_basis(Complex64::new(t, 0.0), alpha, len)
        .into_iter()
        .map(|v| v.re)
        .collect()
}

/// `F^2` inner product `<f, g>` from basis coordinates.
pub fn inner_product(f: &EntireFunction, g: &EntireFunction, alpha: f64) -> Complex64 {
    let len = f.degree().max(g.degree()) + 1;
    let fc = f.basis_coefficients(alpha, len);
    let gc = g.basis_coefficients(alpha, len);
    fc.iter().zip(&gc).map(|(a, b)| a * b.conj()).sum()
}

/// The reproducing kernel `K_z(w) = e^{alpha w conj(z)}` truncated at `degree`.
pub fn kernel(z: Complex64, params: &FockParams, degree: usize) -> Result<EntireFunction> {
    let alpha = params.alpha;
    let r = alpha * z.norm();
    if r > 0.0 {
        // |alpha conj(z)|^D / D! < 1e-16 e^{alpha |z|^2 / 2}
        let lhs = degree as f64 * r.ln() - log_factorial(degree as u64);
        let rhs = (1e-16f64).ln() + 0.5 * alpha * z.norm_sqr();
        if lhs >= rhs {
            return Err(Error::Truncation(format!(
                "kernel at |z| = {} needs degree above {degree}",
                z.norm()
            )));
        }
    }
    let lr = if r > 0.0 { r.ln() } else { f64::NEG_INFINITY };
    let theta = -z.arg();
    let coefficients = (0..=degree)
        .map(|n| {
            if n == 0 {
                LogScalar::ONE
            } else if r == 0.0 {
                LogScalar::ZERO
            } else {
                LogScalar::new(n as f64 * lr - log_factorial(n as u64), n as f64 * theta)
            }
        })
        .collect();
    Ok(EntireFunction::from_coefficients(coefficients))
}

/// The normalized kernel `k_z = e^{-alpha |z|^2 / 2} K_z`.
pub fn normalized_kernel(
    z: Complex64,
    params: &FockParams,
    degree: usize,
) -> Result<EntireFunction> {
    let k = kernel(z, params, degree)?;
    Ok(k.scale(LogScalar::from_ln(-0.5 * params.alpha * z.norm_sqr())))
}

/// Smallest cutoff radius for which `norm` accepts a grid, given the degree
/// of the function and the exponent.
pub fn required_cutoff(degree: usize, p: Exponent, alpha: f64) -> f64 {
    let pv = if p.is_infinite() { 2.0 } else { p.value() };
    let power = (pv * degree as f64 / 2.0).ceil() as u64;
    tail_cutoff_radius(power, pv * alpha / 2.0, 1e-14)
}

/// A grid adequate for `norm` of a function of the given degree.
pub fn norm_grid(degree: usize, p: Exponent, alpha: f64) -> Result<PolarGrid> {
    let cutoff = required_cutoff(degree, p, alpha).max(required_cutoff(degree, Exponent::TWO, alpha));
    PolarGrid::new(cutoff, (2 * degree).max(64), 2 * degree + 2)
}

/// `||f||_{alpha,p}`; for `p = inf` the supremum of `|f| e^{-alpha|z|^2/2}`
/// over the grid nodes, which is a lower bound for the true supremum.
pub fn norm(f: &EntireFunction, p: Exponent, params: &FockParams, grid: &PolarGrid) -> Result<f64> {
    if f.is_zero() {
        return Ok(0.0);
    }
    let alpha = params.alpha;
    let needed = required_cutoff(f.degree(), p, alpha);
    let reach = grid.cutoff_radius() - grid.center().norm();
    if reach < needed * (1.0 - 1e-12) {
        return Err(Error::GridTooSmall(format!(
            "degree {} at p = {p} needs cutoff {needed}, grid reaches {reach}",
            f.degree()
        )));
    }
    if p.is_infinite() {
        let mut sup = 0.0f64;
        for (_, _, z, _) in grid.nodes() {
            sup = sup.max(f.eval_weighted(z, alpha)?.norm());
        }
        return Ok(sup);
    }
    let pv = p.value();
    let integral = integrate_plane(
        |z| match f.eval_weighted(z, alpha) {
            Ok(v) => Complex64::new(v.norm().powf(pv), 0.0),
            Err(_) => Complex64::new(f64::NAN, 0.0),
        },
        grid,
    )?;
    Ok((pv * alpha / (2.0 * PI) * integral.re).powf(1.0 / pv))
}

/// `||k_{z0 + delta} - k_{z0}||_{alpha,p}` for each real shift `delta`.
pub fn kernel_continuity_probe(
    z0: Complex64,
    deltas: &[f64],
    p: Exponent,
    params: &FockParams,
    grid: &PolarGrid,
) -> Result<Vec<f64>> {
    let reach = deltas.iter().fold(0.0f64, |m, d| m.max(d.abs())) + z0.norm();
    let degree = default_degree(reach, params.alpha);
    let base = normalized_kernel(z0, params, degree)?;
    deltas
        .iter()
        .map(|&d| {
            if d == 0.0 {
                return Ok(0.0);
            }
            let moved = normalized_kernel(z0 + d, params, degree)?;
            norm(&moved.sub(&base), p, params, grid)
        })
        .collect()
}
