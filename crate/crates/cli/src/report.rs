//! Report envelope shared by every subcommand.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub comparison: Comparison,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            value,
            comparison: Comparison::AtMost,
            tolerance,
            passed: value <= tolerance,
        }
    }

    pub fn at_least(name: &str, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.to_string(),
            value,
            comparison: Comparison::AtLeast,
            tolerance,
            passed: value >= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub config_sha256: String,
    pub seed: u64,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub data: serde_json::Value,
}

impl Report {
    pub fn new(subcommand: &str, cfg: &RunConfig, seed: u64, checks: Vec<Check>, data: serde_json::Value) -> Self {
        Report {
            tool: "fockkit",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            config_sha256: config_hash(cfg),
            seed,
            passed: checks.iter().all(|c| c.passed),
            checks,
            data,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// `name,value,comparison,tolerance,passed` rows.
    pub fn checks_csv(&self) -> String {
        let mut s = String::from("name,value,comparison,tolerance,passed\n");
        for c in &self.checks {
            let cmp = match c.comparison {
                Comparison::AtMost => "<=",
                Comparison::AtLeast => ">=",
            };
            s.push_str(&format!("{},{},{},{},{}\n", c.name, c.value, cmp, c.tolerance, c.passed));
        }
        s
    }
}

/// SHA-256 of the canonical JSON form of the effective configuration.
pub fn config_hash(cfg: &RunConfig) -> String {
    let canonical = serde_json::to_string(cfg).expect("config serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}
