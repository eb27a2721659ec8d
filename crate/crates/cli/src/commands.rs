//! One function per subcommand; each calls the library operations and
//! collects tolerance checks.

use std::f64::consts::PI;

use clap::ValueEnum;
use fockkit::counterexample::{
    build_indices, divergence_sum, growth_criterion_check, membership_sums, pairing_term_identity,
};
use fockkit::fock::{default_degree, kernel_continuity_probe, norm_grid};
use fockkit::nuclear::{convergence_study, rigidity_experiment};
use fockkit::toeplitz::{adjoint_isometry_check, build_from_density, build_hankel, build_toeplitz, matrix_to_csv, trace_pairing};
use fockkit::{Exponent, FockParams, MeasureSymbol, PolarGrid, Resolution, TruncatedOperator};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::config::{ConfigError, PairingOperator, RunConfig};
use crate::report::{Check, Report};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Berezin,
    Toeplitz,
    Hankel,
    TraceCheck,
    Schatten,
    LatticeApprox,
    Rigidity,
    TracePairing,
    Counterexample,
    KernelContinuity,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Berezin => "berezin",
            Command::Toeplitz => "toeplitz",
            Command::Hankel => "hankel",
            Command::TraceCheck => "trace-check",
            Command::Schatten => "schatten",
            Command::LatticeApprox => "lattice-approx",
            Command::Rigidity => "rigidity",
            Command::TracePairing => "trace-pairing",
            Command::Counterexample => "counterexample",
            Command::KernelContinuity => "kernel-continuity",
        }
    }
}

#[derive(Debug)]
pub enum RunError {
    Config(ConfigError),
    Numerical(fockkit::Error),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Config(e) => write!(f, "{e}"),
            RunError::Numerical(e) => write!(f, "{e}"),
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e)
    }
}

impl From<fockkit::Error> for RunError {
    fn from(e: fockkit::Error) -> Self {
        RunError::Numerical(e)
    }
}

/// The report plus an optional subcommand-specific CSV table.
pub struct Outcome {
    pub report: Report,
    pub table: Option<String>,
}

type Run = Result<(Vec<Check>, serde_json::Value, Option<String>), RunError>;

pub fn run_subcommand(cmd: Command, cfg: &RunConfig, seed: u64) -> Result<Outcome, RunError> {
    let (checks, data, table) = match cmd {
        Command::Berezin => berezin(cfg)?,
        Command::Toeplitz => toeplitz(cfg)?,
        Command::Hankel => hankel(cfg)?,
        Command::TraceCheck => trace_check(cfg)?,
        Command::Schatten => schatten(cfg)?,
        Command::LatticeApprox => lattice_approx(cfg)?,
        Command::Rigidity => rigidity(cfg)?,
        Command::TracePairing => pairing(cfg, seed)?,
        Command::Counterexample => counterexample(cfg)?,
        Command::KernelContinuity => kernel_continuity(cfg)?,
    };
    Ok(Outcome {
        report: Report::new(cmd.name(), cfg, seed, checks, data),
        table,
    })
}

fn resolution(cfg: &RunConfig) -> Resolution {
    Resolution {
        radial: cfg.grid.radial_nodes,
        angular: cfg.grid.angular_nodes,
    }
}

fn hilbert(cfg: &RunConfig) -> Result<FockParams, RunError> {
    Ok(FockParams::hilbert(cfg.alpha)?)
}

fn operator_for(mu: &MeasureSymbol, cfg: &RunConfig) -> Result<TruncatedOperator, RunError> {
    let params = hilbert(cfg)?;
    Ok(match mu {
        MeasureSymbol::Density(d) => build_from_density(d, cfg.truncation, &params, &resolution(cfg))?,
        other => build_toeplitz(other, cfg.truncation, &params)?,
    })
}

fn complex(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn matrix_json(m: &DMatrix<Complex64>) -> serde_json::Value {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| complex(m[(i, j)])).collect())
        .collect();
    json!(rows)
}

fn matrix_table(m: &DMatrix<Complex64>) -> Result<String, RunError> {
    let mut buf = Vec::new();
    matrix_to_csv(m, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv is utf-8"))
}

/// `(alpha/pi) mu(C)` from the closed form when available.
fn scaled_mass(cfg: &RunConfig, mu: &MeasureSymbol) -> Result<Option<Complex64>, RunError> {
    let spec = cfg.measure.as_ref().expect("measure present");
    let mass = match spec.exact_mass() {
        Some(m) => Some(m),
        None if mu.is_compactly_supported() => Some(mu.total_mass(&resolution(cfg))?),
        None => None,
    };
    Ok(mass.map(|m| m * (cfg.alpha / PI)))
}

fn berezin_l1_grid(mu: &MeasureSymbol, cfg: &RunConfig) -> Result<PolarGrid, RunError> {
    let default = mu.berezin_grid(cfg.alpha, &resolution(cfg))?;
    Ok(match cfg.grid.cutoff_radius {
        Some(r) => PolarGrid::new(r, default.radii().len(), default.angles())?,
        None => default,
    })
}

fn berezin(cfg: &RunConfig) -> Run {
    let (mu, _) = cfg.measure()?;
    let op = operator_for(&mu, cfg)?;
    let mut rows = Vec::new();
    let mut table = String::from("x,y,measure_re,measure_im,operator_re,operator_im\n");
    let mut worst = 0.0f64;
    for &[x, y] in &cfg.z_samples {
        let z = Complex64::new(x, y);
        let m = mu.berezin_with(cfg.alpha, z, &resolution(cfg))?;
        let t = op.berezin(z).ok();
        if let Some(t) = t {
            worst = worst.max((t - m).norm() / (1.0 + m.norm()));
        }
        let (tr, ti) = t.map_or((f64::NAN, f64::NAN), |t| (t.re, t.im));
        table.push_str(&format!("{x},{y},{},{},{tr},{ti}\n", m.re, m.im));
        rows.push(json!({"z": [x, y], "measure": complex(m), "operator": t.map(complex), "tail_valid": t.is_some()}));
    }
    let mut checks = vec![Check::at_most("berezin_consistency", worst, cfg.tolerance("berezin_consistency", 1e-8))];
    let mut data = json!({"samples": rows, "truncation": cfg.truncation});
    if mu.is_compactly_supported() || matches!(mu, MeasureSymbol::GaussianDensity(_)) {
        let grid = berezin_l1_grid(&mu, cfg)?;
        let l1 = mu.berezin_lr_norm(cfg.alpha, Exponent::ONE, &grid)?;
        let tv = mu.total_variation(&resolution(cfg))?;
        data["berezin_l1"] = json!(l1);
        data["total_variation"] = json!(tv);
        if mu.is_positive() {
            checks.push(Check::at_most("mass_identity", (l1 - tv).abs() / tv, cfg.tolerance("mass_identity", 1e-7)));
        }
    }
    Ok((checks, data, Some(table)))
}

fn toeplitz(cfg: &RunConfig) -> Run {
    let (mu, _) = cfg.measure()?;
    let op = operator_for(&mu, cfg)?;
    let scale = op.entries().iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let min_eig = op.min_hermitian_eigenvalue();
    let mut checks = Vec::new();
    if mu.is_positive() && scale > 0.0 {
        let tol = cfg.tolerance("psd", 1e-10);
        checks.push(Check::at_most("hermitian_defect", op.hermitian_defect() / scale, tol));
        checks.push(Check::at_most("negative_eigenvalue", (-min_eig).max(0.0) / scale, tol));
    }
    let data = json!({
        "truncation": op.truncation(),
        "provenance": op.provenance(),
        "trace": complex(op.trace()),
        "hermitian_defect": op.hermitian_defect(),
        "min_hermitian_eigenvalue": min_eig,
        "matrix": matrix_json(op.entries()),
    });
    Ok((checks, data, Some(matrix_table(op.entries())?)))
}

fn hankel(cfg: &RunConfig) -> Run {
    let (mu, _) = cfg.measure()?;
    let h = build_hankel(&mu, cfg.truncation, &hilbert(cfg)?)?;
    let s1 = h.schatten_norm(Exponent::ONE)?;
    let tv = mu.total_variation(&resolution(cfg))?;
    let bound = cfg.alpha / PI * tv;
    let asym = (h.entries() - h.entries().transpose()).iter().fold(0.0f64, |m, v| m.max(v.norm()));
    let checks = vec![
        Check::at_most("hankel_bound", s1 - bound, cfg.tolerance("hankel_bound", 1e-8)),
        Check::at_most("symmetry", asym, 0.0),
    ];
    let data = json!({
        "truncation": h.truncation(),
        "schatten_1": s1,
        "bound": bound,
        "nonzero_entries": h.entries().iter().filter(|v| v.norm() != 0.0).count(),
        "matrix": matrix_json(h.entries()),
    });
    Ok((checks, data, Some(matrix_table(h.entries())?)))
}

fn trace_check(cfg: &RunConfig) -> Run {
    let (mu, _) = cfg.measure()?;
    let op = operator_for(&mu, cfg)?;
    let tr = op.trace();
    let via = op.trace_via_berezin(&op.trace_grid()?)?;
    let mut checks = vec![Check::at_most(
        "trace_berezin",
        (tr - via).norm() / tr.norm().max(f64::MIN_POSITIVE),
        cfg.tolerance("trace_berezin", 1e-7),
    )];
    let target = scaled_mass(cfg, &mu)?;
    if let Some(t) = target {
        checks.push(Check::at_most("trace_mass", (tr - t).norm(), cfg.tolerance("trace_mass", 1e-9)));
    }
    let data = json!({
        "truncation": op.truncation(),
        "trace": complex(tr),
        "trace_via_berezin": complex(via),
        "alpha_over_pi_mass": target.map(complex),
    });
    Ok((checks, data, None))
}

fn schatten(cfg: &RunConfig) -> Run {
    let (mu, _) = cfg.measure()?;
    let op = operator_for(&mu, cfg)?;
    let sv = op.singular_values()?;
    let p = cfg.exponents.p.resolve()?;
    let mut norms = Vec::new();
    for s in [Exponent::ONE, Exponent::TWO, Exponent::INFINITY, p] {
        let v = op.schatten_norm(s)?;
        norms.push(json!({"s": s.to_string(), "norm": v}));
    }
    let (a, b) = adjoint_isometry_check(&op)?;
    let mut checks = vec![Check::at_most(
        "adjoint_isometry",
        (a - b).abs() / a.max(f64::MIN_POSITIVE),
        cfg.tolerance("adjoint_isometry", 1e-10),
    )];
    if mu.is_positive() {
        let tr = op.trace().re;
        checks.push(Check::at_most(
            "psd_trace_norm",
            (a - tr).abs() / tr.max(f64::MIN_POSITIVE),
            cfg.tolerance("psd_trace_norm", 1e-9),
        ));
    }
    let data = json!({
        "truncation": op.truncation(),
        "norms": norms,
        "adjoint_pair": [a, b],
        "singular_values": sv,
    });
    Ok((checks, data, None))
}

fn lattice_approx(cfg: &RunConfig) -> Run {
    let (mu, _) = cfg.measure()?;
    let params = hilbert(cfg)?;
    let table = convergence_study(&mu, &cfg.r_values, cfg.truncation, &params)?;
    let tv = mu.total_variation(&resolution(cfg))?;
    let ceiling = cfg.alpha / PI * tv;
    let worst_ratio = table
        .rows
        .windows(2)
        .map(|w| {
            if w[1].s1_error == 0.0 {
                0.0
            } else {
                w[1].s1_error / w[0].s1_error
            }
        })
        .fold(0.0f64, f64::max);
    let excess = table.rows.iter().map(|r| r.nuclear_bound - ceiling).fold(f64::NEG_INFINITY, f64::max);
    let final_rel = table.final_error().unwrap_or(0.0) / ceiling.max(f64::MIN_POSITIVE);
    let checks = vec![
        Check::at_most("monotone_ratio", worst_ratio, cfg.tolerance("monotone_slack", 1.5)),
        Check::at_most("final_error", final_rel, cfg.tolerance("final_error", 0.02)),
        Check::at_most("nuclear_ceiling", excess, cfg.tolerance("nuclear_ceiling", 1e-9)),
    ];
    let rows: Vec<_> = table
        .rows
        .iter()
        .map(|r| json!({"r": r.r, "s1_error": r.s1_error, "op_error": r.op_error, "nuclear_bound": r.nuclear_bound}))
        .collect();
    let mut buf = Vec::new();
    table.write_csv(&mut buf)?;
    let data = json!({"truncation": cfg.truncation, "rows": rows, "alpha_over_pi_variation": ceiling});
    Ok((checks, data, Some(String::from_utf8(buf).expect("csv is utf-8"))))
}

fn rigidity(cfg: &RunConfig) -> Run {
    let (mu, _) = cfg.measure()?;
    let r = cfg.r_values.iter().copied().fold(f64::INFINITY, f64::min);
    let slack = cfg.tolerance("rigidity_slack", 0.05);
    let pq: Vec<(Exponent, Exponent)> = cfg
        .pq_grid
        .iter()
        .map(|[p, q]| Ok((p.resolve()?, q.resolve()?)))
        .collect::<Result<_, ConfigError>>()?;
    let report = rigidity_experiment(&mu, &pq, r, cfg.truncation, cfg.alpha, slack)?;
    let width = report.rows.iter().map(|row| row.relative_width.abs()).fold(0.0f64, f64::max);
    let uppers: Vec<f64> = report.rows.iter().map(|row| row.upper).collect();
    let spread = uppers.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v))
        - uppers.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    let checks = vec![
        Check::at_most("bracket_width", width, slack),
        Check::at_most("pq_independence", spread.max(0.0), cfg.tolerance("pq_independence", 1e-12)),
    ];
    let rows: Vec<_> = report
        .rows
        .iter()
        .map(|row| {
            json!({
                "p": row.p.to_string(),
                "q": row.q.to_string(),
                "upper": row.upper,
                "lower": row.lower,
                "relative_width": row.relative_width,
            })
        })
        .collect();
    let data = json!({"r": r, "berezin_mass": report.mass, "rows": rows});
    Ok((checks, data, None))
}

/// A seeded PSD operator on the first `min(N, 32)` basis vectors.
fn random_psd(n: usize, params: FockParams, seed: u64) -> Result<TruncatedOperator, RunError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = n.min(32);
    let b = DMatrix::from_fn(k, k, |_, _| {
        Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
    });
    let small = &b * b.adjoint() / Complex64::new(k as f64, 0.0);
    let mut m = DMatrix::zeros(n, n);
    m.view_mut((0, 0), (k, k)).copy_from(&small);
    Ok(TruncatedOperator::new(m, params, format!("random psd (seed {seed})"))?)
}

fn pairing(cfg: &RunConfig, seed: u64) -> Run {
    let (phi, _) = cfg.measure()?;
    let params = hilbert(cfg)?;
    let n = cfg.truncation;
    let s = match cfg.pairing_operator {
        PairingOperator::Identity => TruncatedOperator::identity(n, params),
        PairingOperator::DiracAtOrigin => build_toeplitz(&MeasureSymbol::dirac(Complex64::new(0.0, 0.0)), n, &params)?,
        PairingOperator::RandomPsd => random_psd(n, params, seed)?,
    };
    let (a, b) = trace_pairing(&phi, &s, &resolution(cfg))?;
    let checks = vec![Check::at_most(
        "trace_pairing",
        (a - b).norm() / a.norm().max(f64::MIN_POSITIVE),
        cfg.tolerance("trace_pairing", 1e-6),
    )];
    let data = json!({
        "truncation": n,
        "operator": s.provenance(),
        "matrix_trace": complex(a),
        "berezin_integral": complex(b),
    });
    Ok((checks, data, None))
}

fn counterexample(cfg: &RunConfig) -> Run {
    let params = cfg.counterexample;
    params.validate()?;
    let indices = build_indices(&params)?;
    let membership = membership_sums(&params)?;
    let divergence = divergence_sum(&params)?;
    let growth = growth_criterion_check(&params)?;
    let terms = (1..=indices.len())
        .map(|k| pairing_term_identity(&params, k))
        .collect::<Result<Vec<_>, _>>()?;
    let worst_pairing = terms.iter().map(|t| t.relative_residual).fold(0.0f64, f64::max);
    let worst_growth = growth.residuals.iter().copied().fold(0.0f64, f64::max);
    let envelope_excess = |b: &fockkit::counterexample::MembershipBranch| {
        let le = b.envelope_ratio.ln();
        b.log_terms
            .iter()
            .enumerate()
            .map(|(i, l)| l - (i + 1) as f64 * le)
            .fold(f64::NEG_INFINITY, f64::max)
    };
    let min_div = divergence
        .terms
        .iter()
        .enumerate()
        .map(|(i, t)| t / divergence.lower_bound_ratio.powi(i as i32 + 1))
        .fold(f64::INFINITY, f64::min);
    let mut checks = vec![
        Check::at_most("pairing_identity", worst_pairing, cfg.tolerance("pairing_identity", 1e-10)),
        Check::at_most("growth_ratio", worst_growth, cfg.tolerance("growth_ratio", 1e-12)),
    ];
    if !indices.is_empty() {
        checks.push(Check::at_most("f_membership_envelope", envelope_excess(&membership.f_first), 1e-9));
        checks.push(Check::at_most("g_membership_envelope", envelope_excess(&membership.g_first), 1e-9));
        checks.push(Check::at_least("divergence_lower_envelope", min_div, 1.0 - 1e-12));
    }
    let data = json!({
        "params": params,
        "indices": indices,
        "membership": membership,
        "divergence": divergence,
        "divergence_ratio": divergence.ratios.first(),
        "pairing_terms": terms,
        "growth": growth,
    });
    Ok((checks, data, None))
}

fn kernel_continuity(cfg: &RunConfig) -> Run {
    let spec = &cfg.kernel_continuity;
    let p = spec.p.resolve()?;
    let params = hilbert(cfg)?;
    let z0 = Complex64::new(spec.z0[0], spec.z0[1]);
    let reach = spec.deltas.iter().fold(0.0f64, |m, d| m.max(d.abs())) + z0.norm();
    let degree = default_degree(reach, cfg.alpha);
    let grid = norm_grid(degree, p, cfg.alpha)?.centered_at(Complex64::new(0.0, 0.0));
    let values = kernel_continuity_probe(z0, &spec.deltas, p, &params, &grid)?;
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| spec.deltas[i].abs().total_cmp(&spec.deltas[j].abs()));
    let increases = order
        .windows(2)
        .map(|w| values[w[0]] - values[w[1]])
        .fold(f64::NEG_INFINITY, f64::max);
    let mut checks = Vec::new();
    if values.len() > 1 {
        checks.push(Check::at_most("monotone_in_delta", increases.max(0.0), cfg.tolerance("monotone_in_delta", 1e-12)));
    }
    let mut oracle = Vec::new();
    if p == Exponent::TWO {
        // <k_w, k_z> = exp(-alpha |z-w|^2 / 2 + i alpha Im(conj(z) w)), w = z + delta
        let mut worst = 0.0f64;
        for (d, v) in spec.deltas.iter().zip(&values) {
            let phase = cfg.alpha * (z0.conj() * d).im;
            let exact = (2.0 - 2.0 * (-cfg.alpha * d * d / 2.0).exp() * phase.cos()).sqrt();
            worst = worst.max((v - exact).abs());
            oracle.push(exact);
        }
        checks.push(Check::at_most("hilbert_oracle", worst, cfg.tolerance("hilbert_oracle", 1e-8)));
    }
    let data = json!({
        "z0": spec.z0,
        "p": p.to_string(),
        "deltas": spec.deltas,
        "norms": values,
        "hilbert_oracle": oracle,
    });
    Ok((checks, data, None))
}
