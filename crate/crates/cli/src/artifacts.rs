//! On-disk files written by the commands. Every top-level object carries
//! `"schema": 1`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use skewlab::fourier::CoboundaryChain;
use skewlab::rpk::{RPCertificate, TorusOutcome};
use skewlab::systems::{SkewSpec, TorusPoint};
use skewlab::verify::ErgodicityReport;

use crate::config::SCHEMA;

pub const CHAIN_FILE: &str = "chain.json";
pub const SPEC_FILE: &str = "spec.json";
pub const REPORT_FILE: &str = "report.json";
pub const CERT_FILE: &str = "certificates.json";
pub const BIRKHOFF_CSV: &str = "birkhoff.csv";
pub const SUP_GROWTH_CSV: &str = "sup_growth.csv";
pub const CESARO_CSV: &str = "cesaro.csv";
pub const SUMMARY_FILE: &str = "summary.txt";

/// The chain over `alpha`, followed by the one over `beta` for combined systems.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainFile {
    pub schema: u32,
    pub chains: Vec<CoboundaryChain>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecFile {
    pub schema: u32,
    pub kind: String,
    pub spec: SkewSpec,
    /// All members for a zd-family; `spec` is the first.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub family: Vec<SkewSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

impl Check {
    pub fn below(name: impl Into<String>, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            threshold,
            pass: value < threshold,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub system: String,
    pub checks: Vec<Check>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ergodicity: Option<ErgodicityReport>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sup_growth: Vec<(usize, f64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cesaro: Vec<(u64, f64)>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TorusEntry {
    pub x: TorusPoint,
    pub y: TorusPoint,
    pub k: usize,
    pub outcome: TorusOutcome,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub projection: Option<(RPCertificate, RPCertificate)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FiniteEntry {
    pub system: String,
    pub k: usize,
    pub delta: f64,
    pub n_bound: i64,
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub schema: u32,
    pub system: String,
    pub torus: Vec<TorusEntry>,
    pub finite: Vec<FiniteEntry>,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub(crate) fn check_schema(found: u32, path: &Path) -> Result<()> {
    if found != SCHEMA {
        bail!("{}: schema {found} is not supported", path.display());
    }
    Ok(())
}
