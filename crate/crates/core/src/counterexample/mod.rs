//! The explicit pair `f in F^{p'} \ F^{q'}`, `g in F^q \ F^p` with a
//! divergent pairing integral. Degrees reach `16^8` for the defaults, so
//! coefficients exist only as logarithms on the lacunary index set.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{log_factorial, LogScalar, NeumaierSum};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CounterexampleParams {
    pub p: f64,
    pub q: f64,
    pub b: f64,
    #[serde(rename = "K")]
    pub k: usize,
    pub alpha: f64,
}

impl Default for CounterexampleParams {
    fn default() -> Self {
        CounterexampleParams {
            p: 4.0 / 3.0,
            q: 4.0,
            b: 1.9,
            k: 8,
            alpha: 1.0,
        }
    }
}

impl CounterexampleParams {
    pub fn validate(&self) -> Result<()> {
        if !(1.0 < self.p && self.p < self.q && self.q.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need 1 < p < q < inf, got p = {}, q = {}",
                self.p, self.q
            )));
        }
        if !(3f64.sqrt() < self.b && self.b < 2.0) {
            return Err(Error::InvalidParameter(format!("need sqrt(3) < b < 2, got b = {}", self.b)));
        }
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be positive, got {}", self.alpha)));
        }
        Ok(())
    }

    /// `a = 1/q - 1/p < 0`.
    pub fn a(&self) -> f64 {
        1.0 / self.q - 1.0 / self.p
    }

    pub fn p_conjugate(&self) -> f64 {
        self.p / (self.p - 1.0)
    }

    pub fn q_conjugate(&self) -> f64 {
        self.q / (self.q - 1.0)
    }

    /// Power of `n` in the coefficients of `f` before the `epsilon_n` factor.
    pub fn f_power(&self) -> f64 {
        0.25 - 0.5 / self.p_conjugate()
    }

    /// Power of `n` in the coefficients of `g` before the `epsilon_n` factor.
    pub fn g_power(&self) -> f64 {
        0.25 - 0.5 / self.q
    }
}

/// Minimal strictly increasing `n_k` with `epsilon_{n_k} = n_k^{a/2} <= 2^{-k}`,
/// checked against `epsilon_{n_k} >= 3^{-k}`.
pub fn build_indices(params: &CounterexampleParams) -> Result<Vec<u64>> {
    params.validate()?;
    let half_a = 0.5 * params.a();
    let mut out: Vec<u64> = Vec::with_capacity(params.k);
    for k in 1..=params.k {
        let kf = k as f64;
        // n^{a/2} <= 2^{-k}  <=>  ln n >= k ln 2 / |a/2|
        let threshold = kf * LN_2 / -half_a;
        if threshold >= (u64::MAX as f64).ln() - 1.0 {
            return Err(Error::InvalidParameter(format!("n_{k} exceeds the 64-bit index range")));
        }
        let tol = 1e-12 * kf;
        let mut n = (threshold.exp().floor() as u64).saturating_sub(1).max(1);
        while (n as f64).ln() < threshold - tol {
            n += 1;
        }
        if let Some(&prev) = out.last() {
            n = n.max(prev + 1);
        }
        let ln_eps = half_a * (n as f64).ln();
        if ln_eps < -kf * 3f64.ln() - tol {
            return Err(Error::InvalidParameter(format!(
                "no index with 3^-{k} <= epsilon_n <= 2^-{k}"
            )));
        }
        out.push(n);
    }
    Ok(out)
}

/// Precomputed logarithms shared by every display at one lacunary index.
#[derive(Debug, Clone, Copy)]
struct IndexLogs {
    k: f64,
    ln_n: f64,
    ln_fact: f64,
    n_ln_alpha: f64,
}

impl IndexLogs {
    fn new(k: usize, n: u64, alpha: f64) -> Self {
        IndexLogs {
            k: k as f64,
            ln_n: (n as f64).ln(),
            ln_fact: log_factorial(n),
            n_ln_alpha: n as f64 * alpha.ln(),
        }
    }
}

/// Addends of `ln(b^k sqrt(alpha^n/n!) n^power epsilon_n)`, optionally
/// without the `epsilon_n` factor.
fn coefficient_addends(params: &CounterexampleParams, at: &IndexLogs, power: f64, with_eps: bool) -> Vec<f64> {
    let mut v = vec![
        at.k * params.b.ln(),
        0.5 * at.n_ln_alpha,
        -0.5 * at.ln_fact,
        power * at.ln_n,
    ];
    if with_eps {
        v.push(0.5 * params.a() * at.ln_n);
    }
    v
}

fn log_sum(addends: &[f64]) -> f64 {
    addends.iter().copied().collect::<NeumaierSum>().total()
}

/// A power series with log-scale coefficients on a sparse index set.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LacunarySeries {
    pub indices: Vec<u64>,
    /// `ln` of the (positive) coefficient at each index.
    pub log_coefficients: Vec<f64>,
}

impl LacunarySeries {
    /// Taylor coefficient of `z^n`; zero off the index set.
    pub fn coefficient(&self, n: u64) -> LogScalar {
        match self.indices.binary_search(&n) {
            Ok(i) => LogScalar::from_ln(self.log_coefficients[i]),
            Err(_) => LogScalar::ZERO,
        }
    }
}

/// The Taylor coefficients of `f` and `g`.
pub fn coeffs(params: &CounterexampleParams) -> Result<(LacunarySeries, LacunarySeries)> {
    let indices = build_indices(params)?;
    let mut fl = Vec::with_capacity(indices.len());
    let mut gl = Vec::with_capacity(indices.len());
    for (i, &n) in indices.iter().enumerate() {
        let at = IndexLogs::new(i + 1, n, params.alpha);
        fl.push(log_sum(&coefficient_addends(params, &at, params.f_power(), true)));
        gl.push(log_sum(&coefficient_addends(params, &at, params.g_power(), true)));
    }
    Ok((
        LacunarySeries {
            indices: indices.clone(),
            log_coefficients: fl,
        },
        LacunarySeries {
            indices,
            log_coefficients: gl,
        },
    ))
}

/// `|ln a_{n_k} - ln(b^k sqrt(alpha^n/n!) n^{1/4 - 1/(2q')})|` for each `k`:
/// the two forms of the coefficients of `f` agree.
pub fn coefficient_form_residuals(params: &CounterexampleParams) -> Result<Vec<f64>> {
    let indices = build_indices(params)?;
    let qc_power = 0.25 - 0.5 / params.q_conjugate();
    Ok(indices
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let at = IndexLogs::new(i + 1, n, params.alpha);
            let mut v = coefficient_addends(params, &at, params.f_power(), true);
            v.extend(coefficient_addends(params, &at, qc_power, false).iter().map(|x| -x));
            log_sum(&v).abs()
        })
        .collect())
}

/// One membership display evaluated term by term.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipBranch {
    /// Which function and display, e.g. `"f, 1 < s <= 2"`.
    pub label: String,
    /// The exponent `s` used in the display.
    pub exponent: f64,
    /// Power of `n_k` left in each term after the displayed cancellation;
    /// zero when the display reduces to `b^{sk} epsilon_{n_k}^s`.
    pub residual_exponent: f64,
    pub log_terms: Vec<f64>,
    pub partial_sums: Vec<f64>,
    /// `term_{k+1} / term_k`.
    pub ratios: Vec<f64>,
    /// `(b/2)^s`, the geometric envelope ratio.
    pub envelope_ratio: f64,
}

impl MembershipBranch {
    /// Every term is dominated by the geometric envelope,
    /// `term_k <= ((b/2)^s)^k`, and the envelope ratio is below 1.
    pub fn converges(&self) -> bool {
        let le = self.envelope_ratio.ln();
        self.envelope_ratio < 1.0
            && self
                .log_terms
                .iter()
                .enumerate()
                .all(|(i, l)| *l <= (i + 1) as f64 * le + 1e-9)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipSums {
    /// `f` with exponent `p'`: first display (`n^{-s/4 + 1/2}` weight).
    pub f_first: MembershipBranch,
    /// `f` with exponent `p'`: second display (`n^{s/4 - 1/2}` weight).
    pub f_second: MembershipBranch,
    /// The second display exactly as printed, with exponent `p`.
    pub f_second_as_printed: MembershipBranch,
    /// `g` with exponent `q`, both displays.
    pub g_first: MembershipBranch,
    pub g_second: MembershipBranch,
}

fn membership_branch(
    params: &CounterexampleParams,
    indices: &[u64],
    label: &str,
    coeff_power: f64,
    s: f64,
    first: bool,
) -> MembershipBranch {
    let weight_power = if first { 0.5 - 0.25 * s } else { 0.25 * s - 0.5 };
    let log_terms: Vec<f64> = indices
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let at = IndexLogs::new(i + 1, n, params.alpha);
            // s ln a_n + (s/2)(ln n! - n ln alpha) + weight ln n
            let mut v: Vec<f64> = coefficient_addends(params, &at, coeff_power, true)
                .iter()
                .map(|x| s * x)
                .collect();
            v.push(0.5 * s * at.ln_fact);
            v.push(-0.5 * s * at.n_ln_alpha);
            v.push(weight_power * at.ln_n);
            log_sum(&v)
        })
        .collect();
    let mut acc = NeumaierSum::default();
    let partial_sums = log_terms
        .iter()
        .map(|l| {
            acc.add(l.exp());
            acc.total()
        })
        .collect();
    let ratios = log_terms.windows(2).map(|w| (w[1] - w[0]).exp()).collect();
    MembershipBranch {
        label: label.to_string(),
        exponent: s,
        residual_exponent: s * coeff_power + weight_power,
        log_terms,
        partial_sums,
        ratios,
        envelope_ratio: (0.5 * params.b).powf(s),
    }
}

/// Both membership displays for `f` (exponent `p'`) and `g` (exponent `q`).
pub fn membership_sums(params: &CounterexampleParams) -> Result<MembershipSums> {
    let idx = build_indices(params)?;
    let (pc, q, p) = (params.p_conjugate(), params.q, params.p);
    let (fp, gp) = (params.f_power(), params.g_power());
    Ok(MembershipSums {
        f_first: membership_branch(params, &idx, "f, 1 < s <= 2", fp, pc, true),
        f_second: membership_branch(params, &idx, "f, 2 <= s < inf", fp, pc, false),
        f_second_as_printed: membership_branch(params, &idx, "f, 2 <= s < inf, printed exponent p", fp, p, false),
        g_first: membership_branch(params, &idx, "g, 1 < s <= 2", gp, q, true),
        g_second: membership_branch(params, &idx, "g, 2 <= s < inf", gp, q, false),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivergenceSums {
    /// `b^{2k} epsilon_{n_k}`.
    pub terms: Vec<f64>,
    /// `(pi/alpha) sum_{j <= k} b^{2j} epsilon_{n_j}`.
    pub partial_sums: Vec<f64>,
    pub ratios: Vec<f64>,
    /// `b^2 / 3`; every term is at least `(b^2/3)^k`.
    pub lower_bound_ratio: f64,
}

impl DivergenceSums {
    /// Every term dominates `(b^2/3)^k`, which grows since `b > sqrt(3)`.
    pub fn diverges(&self) -> bool {
        self.lower_bound_ratio > 1.0
            && self
                .terms
                .iter()
                .enumerate()
                .all(|(i, t)| *t >= self.lower_bound_ratio.powi(i as i32 + 1) * (1.0 - 1e-12))
    }
}

/// Partial sums of the divergent pairing series.
pub fn divergence_sum(params: &CounterexampleParams) -> Result<DivergenceSums> {
    let idx = build_indices(params)?;
    let logs: Vec<f64> = idx
        .iter()
        .enumerate()
        .map(|(i, &n)| 2.0 * (i + 1) as f64 * params.b.ln() + 0.5 * params.a() * (n as f64).ln())
        .collect();
    let mut acc = NeumaierSum::default();
    let scale = PI / params.alpha;
    let partial_sums = logs
        .iter()
        .map(|l| {
            acc.add(l.exp());
            scale * acc.total()
        })
        .collect();
    Ok(DivergenceSums {
        terms: logs.iter().map(|l| l.exp()).collect(),
        partial_sums,
        ratios: logs.windows(2).map(|w| (w[1] - w[0]).exp()).collect(),
        lower_bound_ratio: params.b * params.b / 3.0,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairingTerm {
    pub k: usize,
    /// `a_{n_k} b_{n_k} int |z|^{2 n_k} e^{-alpha|z|^2} dA`.
    pub lhs: f64,
    /// `(pi/alpha) b^{2k} epsilon_{n_k}`.
    pub rhs: f64,
    /// `|lhs / rhs - 1|`, from the difference of logarithms.
    pub relative_residual: f64,
}

/// The `k`-th term of the pairing series both ways; the moment is the exact
/// `pi n!/alpha^{n+1}`.
pub fn pairing_term_identity(params: &CounterexampleParams, k: usize) -> Result<PairingTerm> {
    let idx = build_indices(params)?;
    if k == 0 || k > idx.len() {
        return Err(Error::InvalidParameter(format!("k must be in 1..={}, got {k}", idx.len())));
    }
    let at = IndexLogs::new(k, idx[k - 1], params.alpha);
    let mut lhs = coefficient_addends(params, &at, params.f_power(), true);
    lhs.extend(coefficient_addends(params, &at, params.g_power(), true));
    lhs.extend([PI.ln(), at.ln_fact, -at.n_ln_alpha, -params.alpha.ln()]);
    let rhs = [
        PI.ln(),
        -params.alpha.ln(),
        2.0 * at.k * params.b.ln(),
        0.5 * params.a() * at.ln_n,
    ];
    let mut diff = lhs.clone();
    diff.extend(rhs.iter().map(|x| -x));
    Ok(PairingTerm {
        k,
        lhs: log_sum(&lhs).exp(),
        rhs: log_sum(&rhs).exp(),
        relative_residual: log_sum(&diff).exp_m1().abs(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthReport {
    pub indices: Vec<u64>,
    /// `ln(a_{n_k} / (sqrt(alpha^n/n!) n^{1/4 - 1/(2q')}))`.
    pub log_ratios: Vec<f64>,
    pub ratios: Vec<f64>,
    /// `|log_ratio - k ln b|`.
    pub residuals: Vec<f64>,
    /// Ratios grow without bound, so `a_n` is not `o(...)`.
    pub diverges: bool,
}

/// The growth ratio witnessing `f not in F^{q'}`; it equals `b^k`.
pub fn growth_criterion_check(params: &CounterexampleParams) -> Result<GrowthReport> {
    let indices = build_indices(params)?;
    let qc_power = 0.25 - 0.5 / params.q_conjugate();
    let mut log_ratios = Vec::new();
    let mut residuals = Vec::new();
    for (i, &n) in indices.iter().enumerate() {
        let at = IndexLogs::new(i + 1, n, params.alpha);
        let mut v = coefficient_addends(params, &at, params.f_power(), true);
        v.extend([-0.5 * at.n_ln_alpha, 0.5 * at.ln_fact, -qc_power * at.ln_n]);
        let l = log_sum(&v);
        residuals.push((l - at.k * params.b.ln()).abs());
        log_ratios.push(l);
    }
    let ratios: Vec<f64> = log_ratios.iter().map(|l| l.exp()).collect();
    let diverges = params.b > 1.0 && ratios.windows(2).all(|w| w[1] > w[0]);
    Ok(GrowthReport {
        indices,
        log_ratios,
        ratios,
        residuals,
        diverges,
    })
}
