//! Matrix builders for Toeplitz and small Hankel operators.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use super::{HankelMatrix, TruncatedOperator};
use crate::error::{Error, Result};
use crate::fock::{weighted_basis, weighted_radial_basis, FockParams};
use crate::measure::{Density, GaussianDensity, MeasureSymbol, PointMass, RadialDensity, Resolution};
use crate::numerics::{tail_cutoff_radius, ComplexSum, GaussLegendre, PolarGrid};

/// Entrywise disagreement with the refined quadrature above which a density
/// build is flagged as under-resolved.
pub const REFINEMENT_TOLERANCE: f64 = 1e-8;

/// Gauss-Legendre order per radial panel.
const PANEL_ORDER: usize = 24;

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    Toeplitz,
    Hankel,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// `(alpha/pi) sum_j c_j k_{w_j} (x) k_{w_j}` in basis coordinates.
pub fn build_from_point_masses(
    masses: &[PointMass],
    truncation: usize,
    params: &FockParams,
) -> Result<TruncatedOperator> {
    let m = point_mass_matrix(masses, truncation, params.alpha, Kind::Toeplitz);
    TruncatedOperator::new(m, *params, format!("point masses ({})", masses.len()))
}

fn point_mass_matrix(masses: &[PointMass], n: usize, alpha: f64, kind: Kind) -> DMatrix<Complex64> {
    let c = alpha / PI;
    let mut acc = vec![ComplexSum::default(); n * n];
    for pm in masses {
        let v = weighted_basis(pm.location, alpha, n);
        let w = pm.weight * c;
        for col in 0..n {
            for row in 0..n {
                let val = match kind {
                    Kind::Toeplitz => v[col] * v[row].conj(),
                    Kind::Hankel => v[col] * v[row],
                };
                acc[col * n + row].add(w * val);
            }
        }
    }
    DMatrix::from_iterator(n, n, acc.iter().map(ComplexSum::total))
}

/// Composite Gauss-Legendre nodes and weights on `[0, r]`, with panels of
/// width about `1 / (2 sqrt(alpha))`.
fn radial_rule(r: f64, alpha: f64) -> Vec<(f64, f64)> {
    let panels = ((2.0 * r * alpha.sqrt()).ceil() as usize).max(1);
    let h = r / panels as f64;
    let rule = GaussLegendre::new(PANEL_ORDER);
    (0..panels)
        .flat_map(|k| {
            rule.mapped(k as f64 * h, (k + 1) as f64 * h)
                .collect::<Vec<_>>()
        })
        .collect()
}

/// `2 alpha int_0^r phi(t) u_n(t)^2 t dt` for `n < len`, where
/// `u_n(t) = sqrt(alpha^n/n!) t^n e^{-alpha t^2/2}`.
fn radial_moments(
    profile: &(dyn Fn(f64) -> Complex64 + Sync),
    r: f64,
    alpha: f64,
    len: usize,
) -> Result<Vec<Complex64>> {
    let rule = radial_rule(r, alpha);
    let samples: Vec<(f64, f64, Complex64)> = rule
        .into_par_iter()
        .map(|(t, w)| (t, w, profile(t)))
        .collect();
    let mut acc = vec![ComplexSum::default(); len];
    for (t, w, phi) in samples {
        if !phi.re.is_finite() || !phi.im.is_finite() {
            return Err(Error::NonIntegrable(format!("profile is not finite at t = {t}")));
        }
        let u = weighted_radial_basis(t, alpha, len);
        for (a, un) in acc.iter_mut().zip(u) {
            a.add(phi * (2.0 * alpha * w * t * un * un));
        }
    }
    Ok(acc.iter().map(ComplexSum::total).collect())
}

/// Radial moments over the support, with a divergence check when the
/// support is unbounded.
fn radial_diagonal(d: &RadialDensity, len: usize, alpha: f64) -> Result<Vec<Complex64>> {
    let profile = |t: f64| (d.profile)(t);
    if d.support_radius.is_finite() {
        return radial_moments(&profile, d.support_radius, alpha, len);
    }
    let r1 = tail_cutoff_radius(len.saturating_sub(1) as u64, alpha, 1e-16);
    let r2 = r1 + 4.0 / alpha.sqrt();
    let coarse = radial_moments(&profile, r1, alpha, len)?;
    let fine = radial_moments(&profile, r2, alpha, len)?;
    for (n, (a, b)) in coarse.iter().zip(&fine).enumerate() {
        let scale = b.norm().max(1.0);
        if !((a - b).norm() <= 1e-10 * scale) {
            return Err(Error::NonIntegrable(format!(
                "radial integral for n = {n} does not converge: {a} at R = {r1}, {b} at R = {r2}"
            )));
        }
    }
    Ok(fine)
}

/// Diagonal matrix `M_nn = (2 alpha^{n+1}/n!) int phi(t) t^{2n+1} e^{-alpha t^2} dt`.
pub fn build_from_radial_density(
    d: &RadialDensity,
    truncation: usize,
    params: &FockParams,
) -> Result<TruncatedOperator> {
    let diag = radial_diagonal(d, truncation, params.alpha)?;
    let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
    TruncatedOperator::new(m, *params, format!("radial density '{}'", d.label))
}

/// `M_nn = A (alpha/(alpha+beta))^{n+1}`.
pub fn build_gaussian(
    g: &GaussianDensity,
    truncation: usize,
    params: &FockParams,
) -> Result<TruncatedOperator> {
    let ratio = params.alpha / (params.alpha + g.beta);
    let diag: Vec<Complex64> = (0..truncation)
        .map(|n| g.amplitude * ratio.powi(n as i32 + 1))
        .collect();
    let m = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(diag));
    TruncatedOperator::new(m, *params, format!("gaussian beta = {}", g.beta))
}

fn density_grid(d: &Density, n: usize, alpha: f64, res: &Resolution) -> Result<PolarGrid> {
    let r = d.support_radius;
    let extent = (6.0 * r * alpha.sqrt()).ceil() as usize + 16;
    let kappa = 2.0 * alpha * r * d.center.norm();
    let bandwidth = (kappa + 10.0 * kappa.sqrt()).ceil() as usize;
    let radial = res.radial.max(n + extent);
    let angular = res.angular.max(2 * n + 2 + bandwidth);
    Ok(PolarGrid::new(r, radial, angular)?.centered_at(d.center))
}

/// Density integral on one grid. Origin-centred grids go through the angular
/// Fourier coefficients of `phi` on each ring.
fn density_matrix(d: &Density, n: usize, alpha: f64, grid: &PolarGrid, kind: Kind) -> Result<DMatrix<Complex64>> {
    let c = alpha / PI;
    let mm = grid.angles();
    let aw = grid.angular_weight();
    let centred = grid.center() == zero();
    let roots: Vec<Complex64> = (0..mm).map(|k| Complex64::from_polar(1.0, grid.angle(k))).collect();
    let rings: Vec<Result<DMatrix<Complex64>>> = (0..grid.radii().len())
        .into_par_iter()
        .map(|i| {
            let t = grid.radii()[i];
            let rw = grid.radial_weights()[i] * c;
            let mut phi = Vec::with_capacity(mm);
            for k in 0..mm {
                let z = grid.node(i, k);
                let v = (d.density)(z);
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(Error::NonFinite { radial: i, angular: k, z });
                }
                phi.push(v);
            }
            let mut out = DMatrix::zeros(n, n);
            if centred {
                let u = weighted_radial_basis(t, alpha, n);
                // coef[s] = aw * sum_k phi_k e^{i s theta_k}, s = n-m or m+n
                let span = 2 * n.max(1) - 1;
                let coef = |s: i64| -> Complex64 {
                    let mut acc = Complex64::new(0.0, 0.0);
                    for (k, p) in phi.iter().enumerate() {
                        acc += p * roots[(s * k as i64).rem_euclid(mm as i64) as usize];
                    }
                    acc * aw
                };
                match kind {
                    Kind::Toeplitz => {
                        let f: Vec<Complex64> = (0..span).map(|j| coef(j as i64 - (n as i64 - 1))).collect();
                        for col in 0..n {
                            for row in 0..n {
                                out[(row, col)] = f[col + n - 1 - row] * (rw * u[col] * u[row]);
                            }
                        }
                    }
                    Kind::Hankel => {
                        let g: Vec<Complex64> = (0..span).map(|s| coef(s as i64)).collect();
                        for col in 0..n {
                            for row in 0..n {
                                out[(row, col)] = g[row + col] * (rw * u[col] * u[row]);
                            }
                        }
                    }
                }
            } else {
                for (k, p) in phi.iter().enumerate() {
                    let v = weighted_basis(grid.node(i, k), alpha, n);
                    let w = p * (rw * aw);
                    for col in 0..n {
                        let wc = w * v[col];
                        for row in 0..n {
                            out[(row, col)] += match kind {
                                Kind::Toeplitz => wc * v[row].conj(),
                                Kind::Hankel => wc * v[row],
                            };
                        }
                    }
                }
            }
            Ok(out)
        })
        .collect();
    let mut acc = vec![ComplexSum::default(); n * n];
    for ring in rings {
        for (a, v) in acc.iter_mut().zip(ring?.iter()) {
            a.add(*v);
        }
    }
    Ok(DMatrix::from_iterator(n, n, acc.iter().map(ComplexSum::total)))
}

/// Density build with a refinement check; returns the refined matrix and
/// the largest entrywise change.
fn refined_density_matrix(
    d: &Density,
    n: usize,
    alpha: f64,
    res: &Resolution,
    kind: Kind,
) -> Result<(DMatrix<Complex64>, f64)> {
    let coarse_grid = density_grid(d, n, alpha, res)?;
    let fine_grid = PolarGrid::new(
        coarse_grid.cutoff_radius(),
        2 * coarse_grid.radii().len(),
        2 * coarse_grid.angles(),
    )?
    .centered_at(d.center);
    let coarse = density_matrix(d, n, alpha, &coarse_grid, kind)?;
    let fine = density_matrix(d, n, alpha, &fine_grid, kind)?;
    let change = (&fine - &coarse).iter().fold(0.0f64, |m, v| m.max(v.norm()));
    Ok((fine, change))
}

/// `M_mn = (alpha/pi) int phi e_n conj(e_m) e^{-alpha|w|^2} dA` by polar
/// quadrature over the support disk. An unresolved grid is noted in the
/// provenance rather than rejected.
pub fn build_from_density(
    d: &Density,
    truncation: usize,
    params: &FockParams,
    res: &Resolution,
) -> Result<TruncatedOperator> {
    let (m, change) = refined_density_matrix(d, truncation, params.alpha, res, Kind::Toeplitz)?;
    let mut op = TruncatedOperator::new(m, *params, format!("density '{}'", d.label))?;
    if change > REFINEMENT_TOLERANCE {
        op.push_provenance(&format!(
            "warning: quadrature under-resolved, refinement changed entries by {change:e}"
        ));
    }
    Ok(op)
}

/// Toeplitz matrix of any symbol, with the default resolution for
/// densities.
pub fn build_toeplitz(mu: &MeasureSymbol, truncation: usize, params: &FockParams) -> Result<TruncatedOperator> {
    match mu {
        MeasureSymbol::PointMasses(pm) => build_from_point_masses(pm, truncation, params),
        MeasureSymbol::RadialDensity(d) => build_from_radial_density(d, truncation, params),
        MeasureSymbol::GaussianDensity(g) => build_gaussian(g, truncation, params),
        MeasureSymbol::Density(d) => build_from_density(d, truncation, params, &Resolution::default()),
    }
}

/// `H_mn = (alpha/pi) int e_m e_n e^{-alpha|w|^2} dmu`.
pub fn build_hankel(mu: &MeasureSymbol, truncation: usize, params: &FockParams) -> Result<HankelMatrix> {
    let alpha = params.alpha;
    let n = truncation;
    let m = match mu {
        MeasureSymbol::PointMasses(pm) => point_mass_matrix(pm, n, alpha, Kind::Hankel),
        MeasureSymbol::RadialDensity(d) => {
            let mut m = DMatrix::zeros(n, n);
            if n > 0 {
                m[(0, 0)] = radial_diagonal(d, 1, alpha)?[0];
            }
            m
        }
        MeasureSymbol::GaussianDensity(g) => {
            let mut m = DMatrix::zeros(n, n);
            if n > 0 {
                m[(0, 0)] = g.amplitude * (alpha / (alpha + g.beta));
            }
            m
        }
        MeasureSymbol::Density(d) => {
            refined_density_matrix(d, n, alpha, &Resolution::default(), Kind::Hankel)?.0
        }
    };
    HankelMatrix::new(m, *params)
}
