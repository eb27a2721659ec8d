//! Run configuration: JSON with unknown keys rejected.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use fockkit::counterexample::CounterexampleParams;
use fockkit::{Exponent, MeasureSymbol, PointMass};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

/// An exponent in `[1, inf]`, written as a number or the string `"inf"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ExponentSpec {
    Finite(f64),
    Named(String),
}

impl ExponentSpec {
    pub fn resolve(&self) -> Result<Exponent, ConfigError> {
        match self {
            ExponentSpec::Finite(v) => Exponent::new(*v).map_err(|e| ConfigError(e.to_string())),
            ExponentSpec::Named(s) if s == "inf" => Ok(Exponent::INFINITY),
            ExponentSpec::Named(s) => Err(ConfigError(format!("exponent must be a number or \"inf\", got \"{s}\""))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointSpec {
    pub x: f64,
    pub y: f64,
    pub w_re: f64,
    #[serde(default)]
    pub w_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureSpec {
    PointMasses {
        points: Vec<PointSpec>,
    },
    Gaussian {
        beta: f64,
        #[serde(default = "one")]
        amplitude_re: f64,
        #[serde(default)]
        amplitude_im: f64,
    },
    UniformDisk {
        radius: f64,
        #[serde(default)]
        center_x: f64,
        #[serde(default)]
        center_y: f64,
        #[serde(default = "one")]
        value_re: f64,
        #[serde(default)]
        value_im: f64,
    },
    /// `sum_k c_k t^{2k}` on `|w| <= support_radius`.
    RadialPolynomial {
        coefficients: Vec<f64>,
        support_radius: f64,
    },
    /// Lebesgue measure (the symbol 1).
    Lebesgue,
}

fn one() -> f64 {
    1.0
}

impl MeasureSpec {
    pub fn build(&self) -> Result<MeasureSymbol, ConfigError> {
        let err = |e: fockkit::Error| ConfigError(format!("measure: {e}"));
        match self {
            MeasureSpec::PointMasses { points } => Ok(MeasureSymbol::point_masses(
                points
                    .iter()
                    .map(|p| PointMass {
                        location: Complex64::new(p.x, p.y),
                        weight: Complex64::new(p.w_re, p.w_im),
                    })
                    .collect(),
            )),
            MeasureSpec::Gaussian {
                beta,
                amplitude_re,
                amplitude_im,
            } => MeasureSymbol::gaussian(Complex64::new(*amplitude_re, *amplitude_im), *beta).map_err(err),
            MeasureSpec::UniformDisk {
                radius,
                center_x,
                center_y,
                value_re,
                value_im,
            } => MeasureSymbol::uniform_disk(
                Complex64::new(*center_x, *center_y),
                *radius,
                Complex64::new(*value_re, *value_im),
            )
            .map_err(err),
            MeasureSpec::RadialPolynomial {
                coefficients,
                support_radius,
            } => {
                let c = coefficients.clone();
                MeasureSymbol::radial(
                    move |t| {
                        let s = t * t;
                        Complex64::new(c.iter().rev().fold(0.0, |acc, a| acc * s + a), 0.0)
                    },
                    *support_radius,
                    "radial polynomial",
                )
                .map_err(err)
            }
            MeasureSpec::Lebesgue => Ok(MeasureSymbol::lebesgue()),
        }
    }

    /// `mu(C)` where it has a closed form.
    pub fn exact_mass(&self) -> Option<Complex64> {
        match self {
            MeasureSpec::PointMasses { points } => Some(points.iter().map(|p| Complex64::new(p.w_re, p.w_im)).sum()),
            MeasureSpec::Gaussian {
                beta,
                amplitude_re,
                amplitude_im,
            } => Some(Complex64::new(*amplitude_re, *amplitude_im) * (PI / beta)),
            MeasureSpec::UniformDisk {
                radius,
                value_re,
                value_im,
                ..
            } => Some(Complex64::new(*value_re, *value_im) * (PI * radius * radius)),
            MeasureSpec::RadialPolynomial {
                coefficients,
                support_radius,
            } => {
                // 2 pi int_0^R c_k t^{2k+1} dt
                let r2 = support_radius * support_radius;
                let m: f64 = coefficients
                    .iter()
                    .enumerate()
                    .map(|(k, c)| c * r2.powi(k as i32 + 1) / (2 * k + 2) as f64)
                    .sum();
                Some(Complex64::new(2.0 * PI * m, 0.0))
            }
            MeasureSpec::Lebesgue => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub cutoff_radius: Option<f64>,
    pub radial_nodes: usize,
    pub angular_nodes: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            cutoff_radius: None,
            radial_nodes: 32,
            angular_nodes: 64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Exponents {
    pub p: ExponentSpec,
    pub q: ExponentSpec,
}

impl Default for Exponents {
    fn default() -> Self {
        Exponents {
            p: ExponentSpec::Finite(2.0),
            q: ExponentSpec::Finite(2.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default = "json")]
    pub format: Format,
    pub path: Option<String>,
}

fn json() -> Format {
    Format::Json
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PairingOperator {
    Identity,
    DiracAtOrigin,
    RandomPsd,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelContinuitySpec {
    #[serde(default)]
    pub z0: [f64; 2],
    #[serde(default = "default_deltas")]
    pub deltas: Vec<f64>,
    #[serde(default = "two")]
    pub p: ExponentSpec,
}

fn default_deltas() -> Vec<f64> {
    vec![0.5, 0.25, 0.125, 0.0625, 0.03125]
}

fn two() -> ExponentSpec {
    ExponentSpec::Finite(2.0)
}

impl Default for KernelContinuitySpec {
    fn default() -> Self {
        KernelContinuitySpec {
            z0: [0.0, 0.0],
            deltas: default_deltas(),
            p: two(),
        }
    }
}

/// Parsed and validated configuration. See the README for the schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha: f64,
    #[serde(default = "default_truncation")]
    pub truncation: usize,
    #[serde(default)]
    pub grid: GridSpec,
    pub measure: Option<MeasureSpec>,
    #[serde(default)]
    pub exponents: Exponents,
    #[serde(default = "default_r_values")]
    pub r_values: Vec<f64>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub output: Option<OutputSpec>,
    /// Evaluation points `[x, y]` for `berezin`.
    #[serde(default = "default_samples")]
    pub z_samples: Vec<[f64; 2]>,
    /// `(p, q)` pairs for `rigidity`.
    #[serde(default = "default_pq_grid")]
    pub pq_grid: Vec<[ExponentSpec; 2]>,
    #[serde(default = "default_pairing")]
    pub pairing_operator: PairingOperator,
    #[serde(default)]
    pub counterexample: CounterexampleParams,
    #[serde(default)]
    pub kernel_continuity: KernelContinuitySpec,
}

fn default_truncation() -> usize {
    64
}

/// `r_n = 2^{-n}`, `n = 0..6`.
pub fn default_r_values() -> Vec<f64> {
    (0..=6).map(|n| 0.5f64.powi(n)).collect()
}

fn default_samples() -> Vec<[f64; 2]> {
    vec![[0.0, 0.0], [0.5, 0.0], [1.0, 1.0], [-1.5, 0.5], [0.0, 2.0]]
}

fn default_pq_grid() -> Vec<[ExponentSpec; 2]> {
    vec![
        [ExponentSpec::Finite(2.0), ExponentSpec::Finite(2.0)],
        [ExponentSpec::Finite(3.0), ExponentSpec::Finite(1.5)],
        [ExponentSpec::Named("inf".into()), ExponentSpec::Finite(1.0)],
    ]
}

fn default_pairing() -> PairingOperator {
    PairingOperator::Identity
}

/// Parses JSON text; unknown keys and type errors name the offending path.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        ConfigError(format!("config error at '{path}' (line {}, column {}): {inner}", inner.line(), inner.column()))
    })?;
    cfg.validate()?;
    Ok(cfg)
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(ConfigError(format!("alpha must be positive and finite, got {}", self.alpha)));
        }
        if self.truncation < 8 {
            return Err(ConfigError(format!("truncation must be at least 8, got {}", self.truncation)));
        }
        for (name, v) in &self.tolerances {
            if !(*v > 0.0 && v.is_finite()) {
                return Err(ConfigError(format!("tolerance '{name}' must be positive, got {v}")));
            }
        }
        if let Some(r) = self.grid.cutoff_radius {
            if !(r > 0.0 && r.is_finite()) {
                return Err(ConfigError(format!("grid.cutoff_radius must be positive, got {r}")));
            }
        }
        if self.grid.radial_nodes == 0 || self.grid.angular_nodes == 0 {
            return Err(ConfigError("grid node counts must be positive".into()));
        }
        if self.r_values.is_empty() || self.r_values.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
            return Err(ConfigError("r_values must be a non-empty list of positive numbers".into()));
        }
        self.exponents.p.resolve()?;
        self.exponents.q.resolve()?;
        for [p, q] in &self.pq_grid {
            p.resolve()?;
            q.resolve()?;
        }
        self.kernel_continuity.p.resolve()?;
        if let Some(m) = &self.measure {
            m.build()?;
        }
        Ok(())
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    pub fn measure(&self) -> Result<(MeasureSymbol, &MeasureSpec), ConfigError> {
        let spec = self
            .measure
            .as_ref()
            .ok_or_else(|| ConfigError("this subcommand needs a 'measure'".into()))?;
        Ok((spec.build()?, spec))
    }
}
