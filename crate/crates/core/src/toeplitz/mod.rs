//! Truncated matrices of Toeplitz and small Hankel operators in the
//! orthonormal basis `e_n`, with Berezin transforms, traces and Schatten
//! norms.
//!
//! Orientation: `M[(m, n)] = <T e_n, e_m>`, so column `n` is the image of
//! `e_n` and composition is the ordinary matrix product.

mod build;
mod io;

pub use build::{
    build_from_density, build_from_point_masses, build_from_radial_density, build_gaussian,
    build_hankel, build_toeplitz,
};
pub use io::{matrix_from_csv, matrix_from_json, matrix_to_csv, matrix_to_json};

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{weighted_basis, weighted_radial_basis, Exponent, FockParams};
use crate::measure::{MeasureSymbol, Resolution};
use crate::numerics::{
    regularized_lower_gamma_int, tail_cutoff_radius, ComplexSum, NeumaierSum, PolarGrid,
};

/// Bound on the `F^2` norm of the part of `k_z` outside the truncation.
pub const KERNEL_TAIL_TOLERANCE: f64 = 1e-12;

/// Default truncation.
pub const DEFAULT_TRUNCATION: usize = 64;

/// `||P_{>=N} k_z||`, the norm of the basis tail of `k_z` beyond `N` terms.
pub fn kernel_tail_norm(z: Complex64, alpha: f64, truncation: usize) -> f64 {
    if truncation == 0 {
        return 1.0;
    }
    regularized_lower_gamma_int(truncation as u64 - 1, alpha * z.norm_sqr())
        .max(0.0)
        .sqrt()
}

/// Largest `|z|` for which the tail of `k_z` beyond `truncation` terms stays
/// below [`KERNEL_TAIL_TOLERANCE`].
pub fn tail_valid_radius(alpha: f64, truncation: usize) -> f64 {
    let (mut lo, mut hi) = (0.0f64, (truncation as f64 / alpha).sqrt());
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if kernel_tail_norm(Complex64::new(mid, 0.0), alpha, truncation) < KERNEL_TAIL_TOLERANCE {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

fn check_tail(z: Complex64, alpha: f64, truncation: usize) -> Result<()> {
    let tail = kernel_tail_norm(z, alpha, truncation);
    if tail >= KERNEL_TAIL_TOLERANCE {
        return Err(Error::Truncation(format!(
            "basis tail of k_z at |z| = {} is {tail:e} for N = {truncation}",
            z.norm()
        )));
    }
    Ok(())
}

/// An `N x N` truncation of an operator on `F^2_alpha`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    entries: DMatrix<Complex64>,
    params: FockParams,
    provenance: String,
}

impl TruncatedOperator {
    pub fn new(entries: DMatrix<Complex64>, params: FockParams, provenance: impl Into<String>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidParameter(format!(
                "operator matrix must be square, got {}x{}",
                entries.nrows(),
                entries.ncols()
            )));
        }
        Ok(TruncatedOperator {
            entries,
            params,
            provenance: provenance.into(),
        })
    }

    pub fn zeros(truncation: usize, params: FockParams) -> Self {
        TruncatedOperator {
            entries: DMatrix::zeros(truncation, truncation),
            params,
            provenance: "zero".into(),
        }
    }

    pub fn identity(truncation: usize, params: FockParams) -> Self {
        TruncatedOperator {
            entries: DMatrix::identity(truncation, truncation),
            params,
            provenance: "identity".into(),
        }
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    pub fn truncation(&self) -> usize {
        self.entries.nrows()
    }

    pub fn params(&self) -> &FockParams {
        &self.params
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub(crate) fn push_provenance(&mut self, note: &str) {
        self.provenance.push_str("; ");
        self.provenance.push_str(note);
    }

    pub fn adjoint(&self) -> Self {
        TruncatedOperator {
            entries: self.entries.adjoint(),
            params: self.params,
            provenance: format!("adjoint of ({})", self.provenance),
        }
    }

    fn check_compatible(&self, other: &TruncatedOperator) -> Result<()> {
        if self.truncation() != other.truncation() || self.params.alpha != other.params.alpha {
            return Err(Error::InvalidParameter(format!(
                "incompatible operators: N = {} vs {}, alpha = {} vs {}",
                self.truncation(),
                other.truncation(),
                self.params.alpha,
                other.params.alpha
            )));
        }
        Ok(())
    }

    pub fn sub(&self, other: &TruncatedOperator) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(TruncatedOperator {
            entries: &self.entries - &other.entries,
            params: self.params,
            provenance: format!("({}) - ({})", self.provenance, other.provenance),
        })
    }

    /// `self * other`, i.e. apply `other` first.
    pub fn compose(&self, other: &TruncatedOperator) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(TruncatedOperator {
            entries: &self.entries * &other.entries,
            params: self.params,
            provenance: format!("({}) * ({})", self.provenance, other.provenance),
        })
    }

    /// Sum of the diagonal entries.
    pub fn trace(&self) -> Complex64 {
        let mut acc = ComplexSum::default();
        for n in 0..self.truncation() {
            acc.add(self.entries[(n, n)]);
        }
        acc.total()
    }

    /// `tilde T(z) = <T k_z, k_z>`; fails if `k_z` is not resolved by the
    /// truncation.
    pub fn berezin(&self, z: Complex64) -> Result<Complex64> {
        check_tail(z, self.params.alpha, self.truncation())?;
        Ok(self.berezin_truncated(z))
    }

    /// Berezin transform of the truncated matrix itself, without the tail
    /// check.
    pub fn berezin_truncated(&self, z: Complex64) -> Complex64 {
        let n = self.truncation();
        let u = weighted_basis(z, self.params.alpha, n);
        let mut acc = ComplexSum::default();
        for m in 0..n {
            let mut row = ComplexSum::default();
            for (k, uk) in u.iter().enumerate() {
                row.add(self.entries[(m, k)] * uk.conj());
            }
            acc.add(u[m] * row.total());
        }
        acc.total()
    }

    /// Values of the truncated Berezin transform at every node of `grid`, in
    /// node order. Origin-centred grids use the angular Fourier structure
    /// `tilde T(t e^{i theta}) = sum_j d_j(t) e^{i j theta}`.
    pub fn berezin_on_grid(&self, grid: &PolarGrid) -> Vec<Complex64> {
        if grid.center() != Complex64::new(0.0, 0.0) {
            return grid.nodes().map(|(_, _, z, _)| self.berezin_truncated(z)).collect();
        }
        let n = self.truncation();
        let alpha = self.params.alpha;
        let mm = grid.angles();
        let roots: Vec<Complex64> = (0..mm).map(|k| Complex64::from_polar(1.0, grid.angle(k))).collect();
        let mut out = Vec::with_capacity(grid.len());
        for &t in grid.radii() {
            let u = weighted_radial_basis(t, alpha, n);
            // d[j + n - 1] collects entries with m - n = j
            let mut diag = vec![ComplexSum::default(); 2 * n.max(1) - 1];
            for m in 0..n {
                for k in 0..n {
                    diag[m + n - 1 - k].add(self.entries[(m, k)] * (u[m] * u[k]));
                }
            }
            let diag: Vec<Complex64> = diag.iter().map(ComplexSum::total).collect();
            for a in 0..mm {
                let mut acc = ComplexSum::default();
                for (idx, d) in diag.iter().enumerate() {
                    let j = idx as i64 - (n as i64 - 1);
                    let r = (j * a as i64).rem_euclid(mm as i64) as usize;
                    acc.add(d * roots[r]);
                }
                out.push(acc.total());
            }
        }
        out
    }

    /// The default grid for [`Self::trace_via_berezin`].
    pub fn trace_grid(&self) -> Result<PolarGrid> {
        PolarGrid::for_degree(self.truncation().saturating_sub(1), self.params.alpha)
    }

    /// `(alpha/pi) int tilde T dA` by quadrature. The grid must capture every
    /// `|e_n|^2 e^{-alpha|z|^2}`, `n < N`, and resolve the angular modes.
    pub fn trace_via_berezin(&self, grid: &PolarGrid) -> Result<Complex64> {
        let n = self.truncation();
        if n == 0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let needed = tail_cutoff_radius(n as u64 - 1, self.params.alpha, 1e-14);
        if grid.center() != Complex64::new(0.0, 0.0)
            || grid.cutoff_radius() < needed * (1.0 - 1e-12)
            || grid.angles() < n
        {
            return Err(Error::GridTooSmall(format!(
                "trace quadrature for N = {n} needs an origin-centred grid of radius {needed} with at least {n} angles"
            )));
        }
        let values = self.berezin_on_grid(grid);
        let mut acc = ComplexSum::default();
        for ((_, _, _, w), v) in grid.nodes().zip(values) {
            acc.add(v * w);
        }
        Ok(acc.total() * (self.params.alpha / PI))
    }

    pub fn singular_values(&self) -> Result<Vec<f64>> {
        singular_values(&self.entries)
    }

    /// `(sum sigma_i^s)^{1/s}`; `s = inf` gives the operator norm.
    pub fn schatten_norm(&self, s: Exponent) -> Result<f64> {
        Ok(schatten_from_singular_values(&self.singular_values()?, s))
    }

    /// Largest entry of `|M - M^*|`.
    pub fn hermitian_defect(&self) -> f64 {
        let d = &self.entries - self.entries.adjoint();
        d.iter().fold(0.0, |m, v| m.max(v.norm()))
    }

    /// Smallest eigenvalue of `(M + M^*) / 2`.
    pub fn min_hermitian_eigenvalue(&self) -> f64 {
        if self.truncation() == 0 {
            return 0.0;
        }
        let h = (&self.entries + self.entries.adjoint()) * Complex64::new(0.5, 0.0);
        h.symmetric_eigenvalues()
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

pub(crate) fn singular_values(m: &DMatrix<Complex64>) -> Result<Vec<f64>> {
    if m.is_empty() {
        return Ok(Vec::new());
    }
    let svd = m
        .clone()
        .try_svd(false, false, 1e-15, 10_000)
        .ok_or_else(|| Error::Numerical("SVD did not converge".into()))?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

pub(crate) fn schatten_from_singular_values(sv: &[f64], s: Exponent) -> f64 {
    if sv.is_empty() {
        return 0.0;
    }
    if s.is_infinite() {
        return sv[0];
    }
    let sv_max = sv[0];
    if sv_max == 0.0 {
        return 0.0;
    }
    let p = s.value();
    let acc: NeumaierSum = sv.iter().map(|x| (x / sv_max).powf(p)).collect();
    sv_max * acc.total().powf(1.0 / p)
}

/// `(||T||_{S_1}, ||T^*||_{S_1})`.
pub fn adjoint_isometry_check(op: &TruncatedOperator) -> Result<(f64, f64)> {
    Ok((
        op.schatten_norm(Exponent::ONE)?,
        op.adjoint().schatten_norm(Exponent::ONE)?,
    ))
}

/// Matrix of the small Hankel operator, `H[(m, n)] = (alpha/pi) int e_m e_n e^{-alpha|w|^2} dmu`.
#[derive(Debug, Clone, PartialEq)]
pub struct HankelMatrix {
    entries: DMatrix<Complex64>,
    params: FockParams,
}

impl HankelMatrix {
    /// Symmetrizes `entries` so that `H[(m, n)] == H[(n, m)]` exactly.
    pub fn new(entries: DMatrix<Complex64>, params: FockParams) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::InvalidParameter("Hankel matrix must be square".into()));
        }
        let half = Complex64::new(0.5, 0.0);
        let sym = (&entries + entries.transpose()) * half;
        Ok(HankelMatrix {
            entries: sym,
            params,
        })
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn truncation(&self) -> usize {
        self.entries.nrows()
    }

    pub fn params(&self) -> &FockParams {
        &self.params
    }

    pub fn schatten_norm(&self, s: Exponent) -> Result<f64> {
        Ok(schatten_from_singular_values(&singular_values(&self.entries)?, s))
    }
}

/// `(tr(T_phi S), (alpha/pi) int phi tilde S dA)` for a compactly supported
/// density `phi`.
pub fn trace_pairing(
    phi: &MeasureSymbol,
    s: &TruncatedOperator,
    res: &Resolution,
) -> Result<(Complex64, Complex64)> {
    let params = *s.params();
    let alpha = params.alpha;
    let n = s.truncation();
    let phi = phi.compact_support()?;
    let (center, radius, density): (Complex64, f64, Box<dyn Fn(Complex64) -> Complex64 + Sync>) =
        match &phi {
            MeasureSymbol::Density(d) => {
                let f = d.density.clone();
                (d.center, d.support_radius, Box::new(move |w| f(w)))
            }
            MeasureSymbol::RadialDensity(d) => {
                let f = d.profile.clone();
                (Complex64::new(0.0, 0.0), d.support_radius, Box::new(move |w: Complex64| f(w.norm())))
            }
            _ => {
                return Err(Error::Precondition(
                    "trace pairing needs a bounded density symbol".into(),
                ))
            }
        };
    let reach = center.norm() + radius;
    check_tail(Complex64::new(reach, 0.0), alpha, n)?;

    let t_phi = build_toeplitz(&phi, n, &params)?;
    let lhs = t_phi.compose(s)?.trace();

    let grid = PolarGrid::new(radius, res.radial.max(2 * n), res.angular.max(2 * n + 64))?
        .centered_at(center);
    let values = s.berezin_on_grid(&grid);
    let mut acc = ComplexSum::default();
    for ((_, _, z, w), v) in grid.nodes().zip(values) {
        acc.add(density(z) * v * w);
    }
    Ok((lhs, acc.total() * (alpha / PI)))
}
