//! Measure symbols, their total variation and Berezin transforms.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::Exponent;
use crate::numerics::{integrate_plane, ComplexSum, GaussLegendre, NeumaierSum, PolarGrid};

pub type DensityFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;
pub type ProfileFn = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Distance (in units of `1/sqrt(alpha)`) past the support at which a
/// Berezin transform has decayed below `e^{-36}` of its peak.
pub const BEREZIN_MARGIN: f64 = 6.0;

/// Radius, in units of `1/sqrt(beta)`, beyond which a Gaussian density is
/// treated as zero (`e^{-40}` relative).
const GAUSSIAN_TRUNCATION: f64 = 6.4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointMass {
    pub location: Complex64,
    pub weight: Complex64,
}

/// A density supported on the closed disk `|w - center| <= support_radius`,
/// assumed smooth inside the disk.
#[derive(Clone)]
pub struct Density {
    pub density: DensityFn,
    pub center: Complex64,
    pub support_radius: f64,
    pub label: String,
}

/// A rotation-invariant density `phi(|w|)` on `|w| <= support_radius`;
/// the radius may be infinite.
#[derive(Clone)]
pub struct RadialDensity {
    pub profile: ProfileFn,
    pub support_radius: f64,
    pub label: String,
}

/// `amplitude * e^{-beta |w|^2} dA(w)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianDensity {
    pub amplitude: Complex64,
    pub beta: f64,
}

#[derive(Clone)]
pub enum MeasureSymbol {
    PointMasses(Vec<PointMass>),
    Density(Density),
    RadialDensity(RadialDensity),
    GaussianDensity(GaussianDensity),
}

impl fmt::Debug for MeasureSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MeasureSymbol::PointMasses(pm) => f.debug_tuple("PointMasses").field(pm).finish(),
            MeasureSymbol::Density(d) => f
                .debug_struct("Density")
                .field("label", &d.label)
                .field("center", &d.center)
                .field("support_radius", &d.support_radius)
                .finish(),
            MeasureSymbol::RadialDensity(d) => f
                .debug_struct("RadialDensity")
                .field("label", &d.label)
                .field("support_radius", &d.support_radius)
                .finish(),
            MeasureSymbol::GaussianDensity(g) => f.debug_tuple("GaussianDensity").field(g).finish(),
        }
    }
}

/// Quadrature resolution for density integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Resolution {
    pub radial: usize,
    pub angular: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Resolution {
            radial: 32,
            angular: 64,
        }
    }
}

impl Resolution {
    fn doubled(self) -> Self {
        Resolution {
            radial: 2 * self.radial,
            angular: 2 * self.angular,
        }
    }
}

/// Angular node count resolving `e^{kappa cos(theta)}` to roundoff.
fn angles_for_bandwidth(kappa: f64, floor: usize) -> usize {
    let needed = (kappa + 10.0 * kappa.sqrt() + 32.0).ceil() as usize;
    needed.max(floor)
}

/// Radial node count resolving a Gaussian of width `1/sqrt(alpha)` over `[0, r]`.
fn radial_for_extent(r: f64, alpha: f64, floor: usize) -> usize {
    ((6.0 * r * alpha.sqrt()).ceil() as usize + 16).max(floor)
}

impl MeasureSymbol {
    pub fn zero() -> Self {
        MeasureSymbol::PointMasses(Vec::new())
    }

    pub fn point_mass(location: Complex64, weight: Complex64) -> Self {
        MeasureSymbol::PointMasses(vec![PointMass { location, weight }])
    }

    pub fn dirac(location: Complex64) -> Self {
        Self::point_mass(location, Complex64::new(1.0, 0.0))
    }

    pub fn point_masses(masses: Vec<PointMass>) -> Self {
        MeasureSymbol::PointMasses(masses)
    }

    pub fn gaussian(amplitude: Complex64, beta: f64) -> Result<Self> {
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gaussian density needs beta > 0, got {beta}"
            )));
        }
        Ok(MeasureSymbol::GaussianDensity(GaussianDensity { amplitude, beta }))
    }

    pub fn density<F>(density: F, center: Complex64, support_radius: f64, label: &str) -> Result<Self>
    where
        F: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    {
        if !(support_radius > 0.0) || !support_radius.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "density support radius must be positive and finite, got {support_radius}"
            )));
        }
        Ok(MeasureSymbol::Density(Density {
            density: Arc::new(density),
            center,
            support_radius,
            label: label.to_string(),
        }))
    }

    /// Constant `value` on the disk `|w - center| < radius`.
    pub fn uniform_disk(center: Complex64, radius: f64, value: Complex64) -> Result<Self> {
        Self::density(move |_| value, center, radius, "uniform disk")
    }

    pub fn radial<F>(profile: F, support_radius: f64, label: &str) -> Result<Self>
    where
        F: Fn(f64) -> Complex64 + Send + Sync + 'static,
    {
        if !(support_radius > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "radial support radius must be positive, got {support_radius}"
            )));
        }
        Ok(MeasureSymbol::RadialDensity(RadialDensity {
            profile: Arc::new(profile),
            support_radius,
            label: label.to_string(),
        }))
    }

    /// Lebesgue measure `dA` on the whole plane.
    pub fn lebesgue() -> Self {
        MeasureSymbol::RadialDensity(RadialDensity {
            profile: Arc::new(|_| Complex64::new(1.0, 0.0)),
            support_radius: f64::INFINITY,
            label: "lebesgue".into(),
        })
    }

    /// Largest `|w|` in the support (infinite for unbounded support).
    pub fn support_reach(&self) -> f64 {
        match self {
            MeasureSymbol::PointMasses(pm) => {
                pm.iter().fold(0.0, |m, p| m.max(p.location.norm()))
            }
            MeasureSymbol::Density(d) => d.center.norm() + d.support_radius,
            MeasureSymbol::RadialDensity(d) => d.support_radius,
            MeasureSymbol::GaussianDensity(_) => f64::INFINITY,
        }
    }

    pub fn is_compactly_supported(&self) -> bool {
        self.support_reach().is_finite()
    }

    /// True only if every weight or sampled value is real and nonnegative.
    pub fn is_positive(&self) -> bool {
        let ok = |v: Complex64| v.im == 0.0 && v.re >= 0.0;
        match self {
            MeasureSymbol::PointMasses(pm) => pm.iter().all(|p| ok(p.weight)),
            MeasureSymbol::GaussianDensity(g) => ok(g.amplitude),
            MeasureSymbol::Density(d) => match PolarGrid::new(d.support_radius, 24, 48) {
                Ok(g) => {
                    ok((d.density)(d.center))
                        && g.nodes().all(|(_, _, w, _)| ok((d.density)(w + d.center)))
                }
                Err(_) => false,
            },
            MeasureSymbol::RadialDensity(d) => {
                let top = if d.support_radius.is_finite() {
                    d.support_radius
                } else {
                    32.0
                };
                (0..=512).all(|k| ok((d.profile)(top * k as f64 / 512.0)))
            }
        }
    }

    /// The measure `|mu|`.
    pub fn abs(&self) -> MeasureSymbol {
        let one = |v: Complex64| Complex64::new(v.norm(), 0.0);
        match self {
            MeasureSymbol::PointMasses(pm) => MeasureSymbol::PointMasses(
                pm.iter()
                    .map(|p| PointMass {
                        location: p.location,
                        weight: one(p.weight),
                    })
                    .collect(),
            ),
            MeasureSymbol::GaussianDensity(g) => MeasureSymbol::GaussianDensity(GaussianDensity {
                amplitude: one(g.amplitude),
                beta: g.beta,
            }),
            MeasureSymbol::Density(d) => {
                let f = d.density.clone();
                MeasureSymbol::Density(Density {
                    density: Arc::new(move |w| one(f(w))),
                    center: d.center,
                    support_radius: d.support_radius,
                    label: format!("|{}|", d.label),
                })
            }
            MeasureSymbol::RadialDensity(d) => {
                let f = d.profile.clone();
                MeasureSymbol::RadialDensity(RadialDensity {
                    profile: Arc::new(move |t| one(f(t))),
                    support_radius: d.support_radius,
                    label: format!("|{}|", d.label),
                })
            }
        }
    }

    /// The measure translated by `w0`, i.e. `mu(E - w0)`.
    pub fn shifted(&self, w0: Complex64) -> Result<MeasureSymbol> {
        match self {
            MeasureSymbol::PointMasses(pm) => Ok(MeasureSymbol::PointMasses(
                pm.iter()
                    .map(|p| PointMass {
                        location: p.location + w0,
                        weight: p.weight,
                    })
                    .collect(),
            )),
            MeasureSymbol::Density(d) => {
                let f = d.density.clone();
                Ok(MeasureSymbol::Density(Density {
                    density: Arc::new(move |w| f(w - w0)),
                    center: d.center + w0,
                    support_radius: d.support_radius,
                    label: d.label.clone(),
                }))
            }
            MeasureSymbol::RadialDensity(d) if d.support_radius.is_finite() => {
                let f = d.profile.clone();
                Ok(MeasureSymbol::Density(Density {
                    density: Arc::new(move |w| f((w - w0).norm())),
                    center: w0,
                    support_radius: d.support_radius,
                    label: d.label.clone(),
                }))
            }
            _ => Err(Error::Precondition(
                "translation is only supported for compactly supported symbols".into(),
            )),
        }
    }

    /// Compactly supported version: Gaussians are cut at radius
    /// `6.4 / sqrt(beta)` (relative mass loss `e^{-40}`); other variants are
    /// returned unchanged.
    pub fn compact_support(&self) -> Result<MeasureSymbol> {
        match self {
            MeasureSymbol::GaussianDensity(g) => {
                let (a, b) = (g.amplitude, g.beta);
                Self::density(
                    move |w| a * (-b * w.norm_sqr()).exp(),
                    Complex64::new(0.0, 0.0),
                    GAUSSIAN_TRUNCATION / b.sqrt(),
                    "gaussian (truncated)",
                )
            }
            MeasureSymbol::RadialDensity(d) if !d.support_radius.is_finite() => Err(
                Error::Precondition(format!("radial density '{}' has unbounded support", d.label)),
            ),
            other => Ok(other.clone()),
        }
    }

    /// `int g dmu` for a continuous `g`, by quadrature on densities.
    pub fn integrate<G>(&self, g: G, res: &Resolution) -> Result<Complex64>
    where
        G: Fn(Complex64) -> Complex64 + Sync,
    {
        match self {
            MeasureSymbol::PointMasses(pm) => {
                let mut acc = ComplexSum::default();
                for p in pm {
                    acc.add(p.weight * g(p.location));
                }
                Ok(acc.total())
            }
            MeasureSymbol::Density(d) => {
                let grid = PolarGrid::new(d.support_radius, res.radial, res.angular)?
                    .centered_at(d.center);
                integrate_plane(|w| (d.density)(w) * g(w), &grid)
            }
            MeasureSymbol::RadialDensity(d) => {
                if !d.support_radius.is_finite() {
                    return Err(Error::Precondition(format!(
                        "integration against unbounded radial density '{}' needs a localized integrand",
                        d.label
                    )));
                }
                let grid = PolarGrid::new(d.support_radius, res.radial, res.angular)?;
                integrate_plane(|w| (d.profile)(w.norm()) * g(w), &grid)
            }
            MeasureSymbol::GaussianDensity(_) => self.compact_support()?.integrate(g, res),
        }
    }

    /// `mu(C)`.
    pub fn total_mass(&self, res: &Resolution) -> Result<Complex64> {
        match self {
            MeasureSymbol::GaussianDensity(g) => Ok(g.amplitude * (PI / g.beta)),
            MeasureSymbol::RadialDensity(d) => radial_mass(d, res, false),
            _ => self.integrate(|_| Complex64::new(1.0, 0.0), res),
        }
    }

    /// `|mu|(C)`, checked for stability under refinement of the quadrature.
    pub fn total_variation(&self, res: &Resolution) -> Result<f64> {
        match self {
            MeasureSymbol::PointMasses(pm) => {
                Ok(pm.iter().map(|p| p.weight.norm()).collect::<NeumaierSum>().total())
            }
            MeasureSymbol::GaussianDensity(g) => Ok(g.amplitude.norm() * PI / g.beta),
            MeasureSymbol::RadialDensity(d) => Ok(radial_mass(d, res, true)?.re),
            MeasureSymbol::Density(_) => {
                let abs = self.abs();
                let coarse = abs.total_mass(res)?.re;
                let fine = abs.total_mass(&res.doubled())?.re;
                if !fine.is_finite() || (fine - coarse).abs() > 1e-6 * fine.abs().max(1e-300) {
                    return Err(Error::NonIntegrable(format!(
                        "total variation changed from {coarse} to {fine} under refinement"
                    )));
                }
                Ok(fine)
            }
        }
    }

    /// `tilde mu(z) = (alpha/pi) int e^{-alpha |z - w|^2} dmu(w)` at the
    /// default resolution.
    pub fn berezin(&self, alpha: f64, z: Complex64) -> Result<Complex64> {
        self.berezin_with(alpha, z, &Resolution::default())
    }

    pub fn berezin_with(&self, alpha: f64, z: Complex64, res: &Resolution) -> Result<Complex64> {
        let c = alpha / PI;
        match self {
            MeasureSymbol::PointMasses(pm) => {
                let mut acc = ComplexSum::default();
                for p in pm {
                    acc.add(p.weight * (-alpha * (z - p.location).norm_sqr()).exp());
                }
                Ok(acc.total() * c)
            }
            MeasureSymbol::GaussianDensity(g) => {
                let s = alpha + g.beta;
                Ok(g.amplitude * (alpha / s) * (-alpha * g.beta / s * z.norm_sqr()).exp())
            }
            MeasureSymbol::Density(d) => {
                let grid = disk_grid_for_gaussian(d.center, d.support_radius, z, alpha, res)?;
                Ok(integrate_plane(
                    |w| (d.density)(w) * (-alpha * (z - w).norm_sqr()).exp(),
                    &grid,
                )? * c)
            }
            MeasureSymbol::RadialDensity(d) => {
                let grid = if d.support_radius.is_finite() {
                    disk_grid_for_gaussian(
                        Complex64::new(0.0, 0.0),
                        d.support_radius,
                        z,
                        alpha,
                        res,
                    )?
                } else {
                    // integrand is localized around z
                    let r = 9.0 / alpha.sqrt();
                    PolarGrid::new(r, radial_for_extent(r, alpha, res.radial), res.angular)?
                        .centered_at(z)
                };
                Ok(integrate_plane(
                    |w| (d.profile)(w.norm()) * (-alpha * (z - w).norm_sqr()).exp(),
                    &grid,
                )? * c)
            }
        }
    }

    /// A grid centred at the origin on which `tilde mu` has decayed below
    /// `1e-12` of its peak at the boundary.
    pub fn berezin_grid(&self, alpha: f64, res: &Resolution) -> Result<PolarGrid> {
        let (reach, decay) = match self {
            MeasureSymbol::GaussianDensity(g) => (0.0, alpha * g.beta / (alpha + g.beta)),
            _ => (self.support_reach(), alpha),
        };
        if !reach.is_finite() {
            return Err(Error::Precondition(
                "Berezin L^r norms need a compactly supported or Gaussian symbol".into(),
            ));
        }
        let cutoff = reach + BEREZIN_MARGIN / decay.sqrt();
        let angular = angles_for_bandwidth(2.0 * decay * reach * cutoff, res.angular);
        PolarGrid::new(cutoff, radial_for_extent(cutoff, decay, res.radial), angular)
    }

    /// `||tilde mu||_{L^r(dA)}` by quadrature on `grid`. For `r = inf` the
    /// maximum over the nodes, the grid centre and any point-mass locations.
    pub fn berezin_lr_norm(&self, alpha: f64, r: Exponent, grid: &PolarGrid) -> Result<f64> {
        Ok(self.berezin_lr_norms(alpha, &[r], grid)?[0])
    }

    /// Several `L^r` norms from a single sampling of `tilde mu` on `grid`.
    pub fn berezin_lr_norms(&self, alpha: f64, rs: &[Exponent], grid: &PolarGrid) -> Result<Vec<f64>> {
        if let MeasureSymbol::PointMasses(pm) = self {
            if pm.is_empty() {
                return Ok(vec![0.0; rs.len()]);
            }
        }
        let res = Resolution::default();
        let nodes: Vec<(usize, usize, Complex64, f64)> = grid.nodes().collect();
        let values: Vec<f64> = nodes
            .par_iter()
            .map(|&(_, _, z, _)| self.berezin_with(alpha, z, &res).map(|v| v.norm()))
            .collect::<Result<_>>()?;
        let mut peak = values.iter().copied().fold(0.0, f64::max);
        let mut extra = vec![grid.center()];
        if let MeasureSymbol::PointMasses(pm) = self {
            extra.extend(pm.iter().map(|p| p.location));
        }
        for z in extra {
            peak = peak.max(self.berezin_with(alpha, z, &res)?.norm());
        }
        if peak == 0.0 {
            return Ok(vec![0.0; rs.len()]);
        }
        let mut boundary = 0.0f64;
        for k in 0..grid.angles() {
            let z = grid.center() + Complex64::from_polar(grid.cutoff_radius(), grid.angle(k));
            boundary = boundary.max(self.berezin_with(alpha, z, &res)?.norm());
        }
        if boundary > 1e-12 * peak {
            return Err(Error::GridTooSmall(format!(
                "Berezin transform at the grid boundary is {boundary:e}, peak {peak:e}"
            )));
        }
        Ok(rs
            .iter()
            .map(|r| {
                if r.is_infinite() {
                    return peak;
                }
                let rv = r.value();
                let mut acc = NeumaierSum::default();
                for (&(_, _, _, w), &v) in nodes.iter().zip(&values) {
                    acc.add(w * v.powf(rv));
                }
                acc.total().powf(1.0 / rv)
            })
            .collect())
    }

    /// Values of `int |K(z, w)|^2 e^{-alpha |w|^2} d|mu|(w)` at the samples.
    pub fn admissibility_probe(&self, alpha: f64, z_samples: &[Complex64]) -> Result<AdmissibilityReport> {
        let abs = self.abs();
        let res = Resolution::default();
        let mut samples = Vec::with_capacity(z_samples.len());
        let mut admissible = true;
        for &z in z_samples {
            // |K(z,w)|^2 e^{-alpha|w|^2} = e^{alpha|z|^2} e^{-alpha|z-w|^2}
            let coarse = abs.berezin_with(alpha, z, &res)?.re;
            let fine = abs.berezin_with(alpha, z, &res.doubled())?.re;
            let stable = fine.is_finite() && (fine - coarse).abs() <= 1e-6 * fine.abs();
            admissible &= stable;
            let value = if fine > 0.0 {
                (alpha * z.norm_sqr() + fine.ln() + (PI / alpha).ln()).exp()
            } else {
                0.0
            };
            samples.push(AdmissibilitySample { z, value, stable });
        }
        Ok(AdmissibilityReport {
            samples,
            admissible,
        })
    }

    /// `mu` of the axis-aligned rectangle `[x0, x1) x [y0, y1)`.
    pub fn rectangle_mass(&self, x0: f64, x1: f64, y0: f64, y1: f64, order: usize) -> Result<Complex64> {
        match self {
            MeasureSymbol::PointMasses(pm) => Ok(pm
                .iter()
                .filter(|p| {
                    let (x, y) = (p.location.re, p.location.im);
                    x0 <= x && x < x1 && y0 <= y && y < y1
                })
                .map(|p| p.weight)
                .sum()),
            MeasureSymbol::Density(d) => Ok(integrate_square_disk(
                &*d.density,
                d.center,
                d.support_radius,
                [x0, x1, y0, y1],
                order,
            )),
            MeasureSymbol::RadialDensity(d) if d.support_radius.is_finite() => {
                let f = |w: Complex64| (d.profile)(w.norm());
                Ok(integrate_square_disk(
                    &f,
                    Complex64::new(0.0, 0.0),
                    d.support_radius,
                    [x0, x1, y0, y1],
                    order,
                ))
            }
            _ => self.compact_support()?.rectangle_mass(x0, x1, y0, y1, order),
        }
    }
}

fn radial_mass(d: &RadialDensity, res: &Resolution, absolute: bool) -> Result<Complex64> {
    let f = |t: f64| {
        let v = (d.profile)(t);
        if absolute {
            Complex64::new(v.norm(), 0.0)
        } else {
            v
        }
    };
    let integrate = |r: f64, n: usize| {
        let rule = GaussLegendre::new(n);
        let mut acc = ComplexSum::default();
        for (t, w) in rule.mapped(0.0, r) {
            acc.add(f(t) * (w * t));
        }
        acc.total() * (2.0 * PI)
    };
    if d.support_radius.is_finite() {
        return Ok(integrate(d.support_radius, res.radial.max(64)));
    }
    let mut prev = integrate(16.0, 256);
    for r in [32.0, 64.0] {
        let next = integrate(r, 16 * r as usize);
        if (next - prev).norm() <= 1e-10 * next.norm().max(1e-300) {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonIntegrable(format!(
        "radial density '{}' has no finite mass",
        d.label
    )))
}

/// Polar grid over the disk `(center, radius)` resolving `e^{-alpha|z-w|^2}`.
fn disk_grid_for_gaussian(
    center: Complex64,
    radius: f64,
    z: Complex64,
    alpha: f64,
    res: &Resolution,
) -> Result<PolarGrid> {
    let kappa = 2.0 * alpha * radius * (z - center).norm();
    let angular = angles_for_bandwidth(kappa, res.angular);
    Ok(PolarGrid::new(radius, radial_for_extent(radius, alpha, res.radial), angular)?
        .centered_at(center))
}

/// `int_{R cap D} f dA` where `R = [x0, x1) x [y0, y1)` and `D` is the disk
/// `|w - center| < radius`.
///
/// The x-range is split where the disk boundary meets the rectangle's
/// horizontal edges; on each piece the substitution `x = radius sin(u)`
/// makes the inner limits smooth, so Gauss-Legendre converges
/// exponentially for smooth `f`.
pub fn integrate_square_disk(
    f: &dyn Fn(Complex64) -> Complex64,
    center: Complex64,
    radius: f64,
    rect: [f64; 4],
    order: usize,
) -> Complex64 {
    let [x0, x1, y0, y1] = rect;
    let (x0, x1, y0, y1) = (x0 - center.re, x1 - center.re, y0 - center.im, y1 - center.im);
    let s = radius;
    let a = x0.max(-s);
    let b = x1.min(s);
    if a >= b || y0.max(-s) >= y1.min(s) {
        return Complex64::new(0.0, 0.0);
    }
    let mut breaks = vec![a, b];
    for y in [y0, y1] {
        if y.abs() < s {
            let xb = (s * s - y * y).sqrt();
            for x in [-xb, xb] {
                if x > a && x < b {
                    breaks.push(x);
                }
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    let rule = GaussLegendre::new(order);
    let mut acc = ComplexSum::default();
    for piece in breaks.windows(2) {
        let ua = (piece[0] / s).clamp(-1.0, 1.0).asin();
        let ub = (piece[1] / s).clamp(-1.0, 1.0).asin();
        for (u, wu) in rule.mapped(ua, ub) {
            let x = s * u.sin();
            let h = s * u.cos();
            let lo = y0.max(-h);
            let hi = y1.min(h);
            if hi <= lo {
                continue;
            }
            let mut inner = ComplexSum::default();
            for (y, wy) in rule.mapped(lo, hi) {
                inner.add(f(center + Complex64::new(x, y)) * wy);
            }
            acc.add(inner.total() * (wu * h));
        }
    }
    acc.total()
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilitySample {
    pub z: Complex64,
    pub value: f64,
    pub stable: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdmissibilityReport {
    pub samples: Vec<AdmissibilitySample>,
    pub admissible: bool,
}
