//! Rank-one representations, nuclear-norm upper bounds and the lattice
//! discretization `T_r = sum_k mu(S_r + a_k) k_{a_k} (x) k_{a_k}`.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{norm, norm_grid, weighted_basis, EntireFunction, Exponent, FockParams};
use crate::measure::{MeasureSymbol, PointMass, Resolution};
use crate::numerics::{ComplexSum, NeumaierSum};
use crate::toeplitz::{build_from_point_masses, build_toeplitz, kernel_tail_norm, TruncatedOperator, KERNEL_TAIL_TOLERANCE};

/// Cells lighter than this fraction of `|mu|(C)` are dropped.
pub const CELL_DROP_TOLERANCE: f64 = 1e-15;

/// Gauss-Legendre order for per-cell density integrals.
pub const CELL_QUADRATURE_ORDER: usize = 16;

/// One side of a rank-one term.
#[derive(Debug, Clone, PartialEq)]
pub enum Factor {
    /// `scale * k_z`; every `||k_z||_{alpha,p}` equals 1 exactly.
    NormalizedKernel { z: Complex64, scale: Complex64 },
    Function(EntireFunction),
}

impl Factor {
    pub fn kernel(z: Complex64) -> Self {
        Factor::NormalizedKernel {
            z,
            scale: Complex64::new(1.0, 0.0),
        }
    }

    /// First `len` coordinates `<h, e_n>`.
    pub fn basis_coefficients(&self, alpha: f64, len: usize) -> Vec<Complex64> {
        match self {
            Factor::NormalizedKernel { z, scale } => weighted_basis(*z, alpha, len)
                .into_iter()
                .map(|v| scale * v.conj())
                .collect(),
            Factor::Function(f) => f.basis_coefficients(alpha, len),
        }
    }

    /// `h(z) e^{-alpha |z|^2 / 2}`.
    pub fn eval_weighted(&self, z: Complex64, alpha: f64) -> Result<Complex64> {
        match self {
            Factor::NormalizedKernel { z: w, scale } => {
                // k_w(z) e^{-alpha|z|^2/2} = e^{alpha z conj(w) - alpha(|z|^2+|w|^2)/2}
                let e = alpha * (z * w.conj()) - 0.5 * alpha * (z.norm_sqr() + w.norm_sqr());
                Ok(scale * e.exp())
            }
            Factor::Function(f) => f.eval_weighted(z, alpha),
        }
    }

    /// `||h||_{alpha,p}`.
    pub fn norm(&self, p: Exponent, params: &FockParams) -> Result<f64> {
        match self {
            Factor::NormalizedKernel { scale, .. } => Ok(scale.norm()),
            Factor::Function(f) => norm(f, p, params, &norm_grid(f.degree(), p, params.alpha)?),
        }
    }
}

/// `sum_j f_j (x) g_j`, acting as `x -> sum_j <x, f_j> g_j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RankOneRep {
    pub terms: Vec<(Factor, Factor)>,
}

impl RankOneRep {
    pub fn new(terms: Vec<(Factor, Factor)>) -> Self {
        RankOneRep { terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Matrix `M_mn = sum_j conj(f_j,n) g_j,m`.
    pub fn to_operator(&self, truncation: usize, params: &FockParams) -> Result<TruncatedOperator> {
        let n = truncation;
        let mut acc = vec![ComplexSum::default(); n * n];
        for (f, g) in &self.terms {
            let fc = f.basis_coefficients(params.alpha, n);
            let gc = g.basis_coefficients(params.alpha, n);
            for col in 0..n {
                let a = fc[col].conj();
                for row in 0..n {
                    acc[col * n + row].add(a * gc[row]);
                }
            }
        }
        let m = DMatrix::from_iterator(n, n, acc.iter().map(ComplexSum::total));
        TruncatedOperator::new(m, *params, format!("rank-one representation ({} terms)", self.len()))
    }

    /// `tilde T(z) = sum_j conj(f_j(z)) g_j(z) e^{-alpha |z|^2}`.
    pub fn berezin(&self, z: Complex64, alpha: f64) -> Result<Complex64> {
        let mut acc = ComplexSum::default();
        for (f, g) in &self.terms {
            acc.add(f.eval_weighted(z, alpha)?.conj() * g.eval_weighted(z, alpha)?);
        }
        Ok(acc.total())
    }
}

/// `sum_j ||f_j||_{alpha,p'} ||g_j||_{alpha,q}`, an upper bound for the
/// nuclear norm of the represented operator `F^p -> F^q` when the dual norm
/// is replaced by the equivalent `||.||_{alpha,p'}`.
pub fn nuclear_upper_bound(rep: &RankOneRep, params: &FockParams) -> Result<f64> {
    let pd = params.p.conjugate();
    let norms: Vec<f64> = rep
        .terms
        .par_iter()
        .map(|(f, g)| Ok(f.norm(pd, params)? * g.norm(params.q, params)?))
        .collect::<Result<_>>()?;
    Ok(norms.into_iter().collect::<NeumaierSum>().total())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeCell {
    /// Lattice coordinates `(i, j)`; the centre is `r (i + i j)`.
    pub index: (i64, i64),
    pub center: Complex64,
    pub weight: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticePartition {
    pub r: f64,
    /// Cells in ring-major spiral order.
    pub cells: Vec<LatticeCell>,
    /// Total weight of the dropped light cells.
    pub dropped_mass: Complex64,
    pub dropped_count: usize,
}

impl LatticePartition {
    pub fn total_weight(&self) -> Complex64 {
        let mut acc = ComplexSum::default();
        for c in &self.cells {
            acc.add(c.weight);
        }
        acc.total()
    }

    pub fn total_variation(&self) -> f64 {
        self.cells.iter().map(|c| c.weight.norm()).collect::<NeumaierSum>().total()
    }

    pub fn point_masses(&self) -> Vec<PointMass> {
        self.cells
            .iter()
            .map(|c| PointMass {
                location: c.center,
                weight: c.weight,
            })
            .collect()
    }

    /// `sum_k k_{a_k} (x) (alpha/pi) mu_k k_{a_k}`.
    pub fn rank_one_rep(&self, alpha: f64) -> RankOneRep {
        RankOneRep::new(
            self.cells
                .iter()
                .map(|c| {
                    (
                        Factor::kernel(c.center),
                        Factor::NormalizedKernel {
                            z: c.center,
                            scale: c.weight * (alpha / PI),
                        },
                    )
                })
                .collect(),
        )
    }
}

/// Ring-major spiral key: Chebyshev ring, then the counterclockwise angle
/// from the positive real axis.
fn spiral_key(i: i64, j: i64) -> (i64, f64) {
    let ring = i.abs().max(j.abs());
    let mut angle = (j as f64).atan2(i as f64);
    if angle < 0.0 {
        angle += 2.0 * PI;
    }
    (ring, angle)
}

fn cell_index(x: f64, r: f64) -> i64 {
    (x / r + 0.5).floor() as i64
}

/// Splits `mu` over the squares `S_r + a`, `a` in `r Z^2`, with
/// `S_r = [-r/2, r/2) x [-r/2, r/2)`.
pub fn lattice_partition(mu: &MeasureSymbol, r: f64) -> Result<LatticePartition> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidParameter(format!("lattice spacing must be positive, got {r}")));
    }
    let raw: Vec<((i64, i64), Complex64)> = match mu {
        MeasureSymbol::PointMasses(pm) => {
            let mut acc: BTreeMap<(i64, i64), ComplexSum> = BTreeMap::new();
            for p in pm {
                let idx = (cell_index(p.location.re, r), cell_index(p.location.im, r));
                acc.entry(idx).or_default().add(p.weight);
            }
            acc.into_iter().map(|(k, v)| (k, v.total())).collect()
        }
        _ => {
            let compact = mu.compact_support()?;
            let reach = compact.support_reach();
            let (c, rad) = match &compact {
                MeasureSymbol::Density(d) => (d.center, d.support_radius),
                _ => (Complex64::new(0.0, 0.0), reach),
            };
            let (i0, i1) = (cell_index(c.re - rad, r), cell_index(c.re + rad, r));
            let (j0, j1) = (cell_index(c.im - rad, r), cell_index(c.im + rad, r));
            let indices: Vec<(i64, i64)> = (i0..=i1).flat_map(|i| (j0..=j1).map(move |j| (i, j))).collect();
            indices
                .into_par_iter()
                .map(|(i, j)| {
                    let (x, y) = (i as f64 * r, j as f64 * r);
                    let w = compact.rectangle_mass(
                        x - 0.5 * r,
                        x + 0.5 * r,
                        y - 0.5 * r,
                        y + 0.5 * r,
                        CELL_QUADRATURE_ORDER,
                    )?;
                    Ok(((i, j), w))
                })
                .collect::<Result<_>>()?
        }
    };
    let variation = match mu {
        MeasureSymbol::PointMasses(_) => raw.iter().map(|(_, w)| w.norm()).sum::<f64>(),
        _ => mu.total_variation(&Resolution::default())?,
    };
    let threshold = CELL_DROP_TOLERANCE * variation;
    let mut cells = Vec::with_capacity(raw.len());
    let mut dropped = ComplexSum::default();
    let mut dropped_count = 0;
    for ((i, j), w) in raw {
        if w.norm() < threshold || w.norm() == 0.0 {
            dropped.add(w);
            dropped_count += 1;
        } else {
            cells.push(LatticeCell {
                index: (i, j),
                center: Complex64::new(i as f64 * r, j as f64 * r),
                weight: w,
            });
        }
    }
    cells.sort_by(|a, b| {
        let (ka, kb) = (spiral_key(a.index.0, a.index.1), spiral_key(b.index.0, b.index.1));
        ka.0.cmp(&kb.0).then(ka.1.total_cmp(&kb.1))
    });
    Ok(LatticePartition {
        r,
        cells,
        dropped_mass: dropped.total(),
        dropped_count,
    })
}

/// Matrix of `(alpha/pi) sum_k mu_k k_{a_k} (x) k_{a_k}`.
pub fn lattice_operator(part: &LatticePartition, truncation: usize, params: &FockParams) -> Result<TruncatedOperator> {
    let mut op = build_from_point_masses(&part.point_masses(), truncation, params)?;
    op.push_provenance(&format!("lattice r = {}", part.r));
    Ok(op)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub r: f64,
    pub s1_error: f64,
    pub op_error: f64,
    pub nuclear_bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    /// `(alpha/pi) mu(C)` for the reference operator.
    pub scale: f64,
}

impl ConvergenceTable {
    /// Every row's `s1_error` is at most `slack` times the previous one.
    pub fn is_monotone(&self, slack: f64) -> bool {
        self.rows.windows(2).all(|w| w[1].s1_error <= slack * w[0].s1_error)
    }

    pub fn is_strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].s1_error < w[0].s1_error)
    }

    pub fn final_error(&self) -> Option<f64> {
        self.rows.last().map(|r| r.s1_error)
    }

    /// CSV with header `r,s1_error,op_error,nuclear_bound`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::Io(e.to_string());
        w.write_record(["r", "s1_error", "op_error", "nuclear_bound"]).map_err(io)?;
        for row in &self.rows {
            w.write_record([
                row.r.to_string(),
                row.s1_error.to_string(),
                row.op_error.to_string(),
                row.nuclear_bound.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::Io(e.to_string()))
    }
}

fn check_support_resolved(mu: &MeasureSymbol, truncation: usize, alpha: f64) -> Result<()> {
    let reach = mu.compact_support()?.support_reach();
    let tail = kernel_tail_norm(Complex64::new(reach, 0.0), alpha, truncation);
    if tail >= KERNEL_TAIL_TOLERANCE {
        return Err(Error::Truncation(format!(
            "N = {truncation} does not resolve kernels on the support (reach {reach}, tail {tail:e})"
        )));
    }
    Ok(())
}

/// Distance between the lattice approximant and the truncated `T_mu` for
/// each spacing, in the given order.
pub fn convergence_study(
    mu: &MeasureSymbol,
    r_values: &[f64],
    truncation: usize,
    params: &FockParams,
) -> Result<ConvergenceTable> {
    check_support_resolved(mu, truncation, params.alpha)?;
    let reference = build_toeplitz(mu, truncation, params)?;
    let rows = r_values
        .par_iter()
        .map(|&r| {
            let part = lattice_partition(mu, r)?;
            let diff = lattice_operator(&part, truncation, params)?.sub(&reference)?;
            let sv = diff.singular_values()?;
            Ok(ConvergenceRow {
                r,
                s1_error: sv.iter().copied().collect::<NeumaierSum>().total(),
                op_error: sv.first().copied().unwrap_or(0.0),
                nuclear_bound: nuclear_upper_bound(&part.rank_one_rep(params.alpha), params)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable {
        rows,
        scale: reference.trace().norm(),
    })
}

/// `max_z |(alpha/pi) sum_k mu_k e^{-alpha|z - a_k|^2} - tilde mu(z)|`.
pub fn berezin_lattice_check(
    part: &LatticePartition,
    mu: &MeasureSymbol,
    alpha: f64,
    z_samples: &[Complex64],
) -> Result<f64> {
    let lattice = MeasureSymbol::point_masses(part.point_masses());
    let mut worst = 0.0f64;
    for &z in z_samples {
        let a = lattice.berezin(alpha, z)?;
        let b = mu.berezin(alpha, z)?;
        worst = worst.max((a - b).norm());
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RigidityRow {
    pub p: Exponent,
    pub q: Exponent,
    /// Nuclear bound of the lattice representation plus the `S_1` distance
    /// to the truncated `T_mu`.
    pub upper: f64,
    /// `(alpha/pi) ||tilde mu||_{L^1}`.
    pub lower: f64,
    /// `(upper - lower) / lower`.
    pub relative_width: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RigidityReport {
    pub r: f64,
    pub mass: f64,
    pub rows: Vec<RigidityRow>,
    pub slack: f64,
    pub within_slack: bool,
}

/// Brackets the nuclear norm of `T_mu` for each `(p, q)` between the
/// Berezin lower witness and the lattice upper bound at spacing `r`.
pub fn rigidity_experiment(
    mu: &MeasureSymbol,
    pq_grid: &[(Exponent, Exponent)],
    r: f64,
    truncation: usize,
    alpha: f64,
    slack: f64,
) -> Result<RigidityReport> {
    if !mu.is_positive() {
        return Err(Error::Precondition("rigidity needs a positive measure".into()));
    }
    let hilbert = FockParams::hilbert(alpha)?;
    check_support_resolved(mu, truncation, alpha)?;
    let part = lattice_partition(mu, r)?;
    let reference = build_toeplitz(mu, truncation, &hilbert)?;
    let discretization = lattice_operator(&part, truncation, &hilbert)?
        .sub(&reference)?
        .schatten_norm(Exponent::ONE)?;
    let grid = mu.berezin_grid(alpha, &Resolution::default())?;
    let l1 = mu.berezin_lr_norm(alpha, Exponent::ONE, &grid)?;
    let lower = alpha / PI * l1;
    let rep = part.rank_one_rep(alpha);
    let mut rows = Vec::with_capacity(pq_grid.len());
    for &(p, q) in pq_grid {
        if q.value() > p.value() {
            return Err(Error::InvalidParameter(format!("rigidity needs q <= p, got p = {p}, q = {q}")));
        }
        let params = FockParams::new(alpha, p, q)?;
        let upper = nuclear_upper_bound(&rep, &params)? + discretization;
        let relative_width = if lower > 0.0 { (upper - lower) / lower } else { 0.0 };
        rows.push(RigidityRow {
            p,
            q,
            upper,
            lower,
            relative_width,
        });
    }
    let within_slack = rows.iter().all(|row| row.relative_width.abs() <= slack);
    Ok(RigidityReport {
        r,
        mass: l1,
        rows,
        slack,
        within_slack,
    })
}

/// `(||tilde T||_{L^r}, ||f e^{-alpha|.|^2/2}||_{L^m} ||g e^{-alpha|.|^2/2}||_{L^n})`
/// for `T = f (x) g`, with `1/m + 1/n = 1/r`, all in plain `L^s(dA)`.
pub fn berezin_holder_chain(
    f: &Factor,
    g: &Factor,
    alpha: f64,
    r: f64,
    m: f64,
    grid: &crate::numerics::PolarGrid,
) -> Result<(f64, f64)> {
    if !(r >= 1.0 && m >= r) {
        return Err(Error::InvalidParameter(format!("need 1 <= r <= m, got r = {r}, m = {m}")));
    }
    let n = if m == r { f64::INFINITY } else { 1.0 / (1.0 / r - 1.0 / m) };
    let samples: Vec<(f64, f64, f64)> = grid
        .nodes()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|(_, _, z, w)| {
            let a = f.eval_weighted(z, alpha)?.norm();
            let b = g.eval_weighted(z, alpha)?.norm();
            Ok((w, a, b))
        })
        .collect::<Result<_>>()?;
    let lp = |s: f64, pick: &dyn Fn(&(f64, f64, f64)) -> f64| -> f64 {
        if s.is_infinite() {
            return samples.iter().map(pick).fold(0.0, f64::max);
        }
        let acc: NeumaierSum = samples.iter().map(|x| x.0 * pick(x).powf(s)).collect();
        acc.total().powf(1.0 / s)
    };
    let lhs = lp(r, &|x| x.1 * x.2);
    let rhs = lp(m, &|x| x.1) * lp(n, &|x| x.2);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests;
