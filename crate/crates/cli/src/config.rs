use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use skewlab::arithmetic::{recommended_eps, Frac128};
use skewlab::systems::TorusPoint;

pub const SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema: u32,
    /// Decimal string, `p/q`, or one of the names `golden`, `sqrt2`.
    #[serde(default)]
    pub alpha: Option<String>,
    #[serde(default)]
    pub beta: Option<String>,
    /// Defaults to `1/(8(L−1))`.
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(rename = "L", default = "default_len")]
    pub chain_length: usize,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default = "default_n_max")]
    pub n_max: u64,
    pub system: SystemConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
    #[serde(default)]
    pub rpk: RpkConfig,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

fn default_len() -> usize {
    2
}

fn default_count() -> usize {
    50
}

fn default_n_max() -> u64 {
    10_000_000
}

/// Dimension conventions: `R` and `two-cob` live on 𝕋^{k+1}, `combined` on
/// 𝕋^{2k}, everything else on 𝕋^k.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", deny_unknown_fields)]
pub enum SystemConfig {
    #[serde(rename = "S")]
    S { k: usize },
    #[serde(rename = "lemma31-T")]
    Lemma31T { k: usize, j: usize },
    #[serde(rename = "R")]
    R { k: usize },
    #[serde(rename = "two-cob")]
    TwoCob { k: usize, l: usize },
    #[serde(rename = "combined")]
    Combined { k: usize, j: usize, l: usize },
    #[serde(rename = "zd-family")]
    ZdFamily {
        k: usize,
        j: usize,
        constants: Vec<Frac128>,
    },
}

impl SystemConfig {
    pub fn kind(&self) -> &'static str {
        match self {
            SystemConfig::S { .. } => "S",
            SystemConfig::Lemma31T { .. } => "lemma31-T",
            SystemConfig::R { .. } => "R",
            SystemConfig::TwoCob { .. } => "two-cob",
            SystemConfig::Combined { .. } => "combined",
            SystemConfig::ZdFamily { .. } => "zd-family",
        }
    }

    pub fn needs_beta(&self) -> bool {
        matches!(
            self,
            SystemConfig::R { .. } | SystemConfig::TwoCob { .. } | SystemConfig::Combined { .. }
        )
    }

    pub fn dim(&self) -> usize {
        match *self {
            SystemConfig::S { k } | SystemConfig::Lemma31T { k, .. } | SystemConfig::ZdFamily { k, .. } => k,
            SystemConfig::R { k } | SystemConfig::TwoCob { k, .. } => k + 1,
            SystemConfig::Combined { k, .. } => 2 * k,
        }
    }

    /// Chain functions the conjugacy needs.
    fn chain_functions(&self) -> usize {
        match *self {
            SystemConfig::S { .. } => 0,
            SystemConfig::Lemma31T { k, j } | SystemConfig::ZdFamily { k, j, .. } => k.saturating_sub(j),
            SystemConfig::R { k } => k,
            SystemConfig::TwoCob { k, l } => k.saturating_sub(l).max(1),
            SystemConfig::Combined { k, j, .. } => k.saturating_sub(j),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default = "default_samples")]
    pub samples: usize,
    #[serde(default)]
    pub coboundary: bool,
    #[serde(default)]
    pub conjugacy: bool,
    /// `(n, m)` pairs; R systems only.
    #[serde(default)]
    pub eigenfunction: Vec<[i64; 2]>,
    /// Pairwise commutation of the family members; zd-family only.
    #[serde(default)]
    pub commutation: bool,
    #[serde(default)]
    pub birkhoff: Option<BirkhoffConfig>,
    /// Truncation lengths `M`.
    #[serde(default)]
    pub sup_growth: Vec<usize>,
    /// Fejér orders `N`.
    #[serde(default)]
    pub cesaro: Vec<u64>,
}

fn default_samples() -> usize {
    10_000
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            samples: default_samples(),
            coboundary: false,
            conjugacy: false,
            eigenfunction: Vec::new(),
            commutation: false,
            birkhoff: None,
            sup_growth: Vec::new(),
            cesaro: Vec::new(),
        }
    }
}

impl VerifyConfig {
    pub fn is_empty(&self) -> bool {
        !self.coboundary
            && !self.conjugacy
            && self.eigenfunction.is_empty()
            && !self.commutation
            && self.birkhoff.is_none()
            && self.sup_growth.is_empty()
            && self.cesaro.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BirkhoffConfig {
    pub chars: Vec<Vec<i64>>,
    /// Empty means five Halton points.
    #[serde(default)]
    pub starts: Vec<TorusPoint>,
    pub checkpoints: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RpkConfig {
    #[serde(default = "default_order")]
    pub k: usize,
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_n_bound")]
    pub n_bound: i64,
    #[serde(default = "default_grid")]
    pub grid: u64,
    #[serde(default)]
    pub pairs: Vec<PairConfig>,
    /// Split product certificates onto the two factors.
    #[serde(default)]
    pub project: bool,
    #[serde(default)]
    pub finite: Vec<FiniteRun>,
}

fn default_order() -> usize {
    1
}

fn default_delta() -> f64 {
    0.05
}

fn default_n_bound() -> i64 {
    30
}

fn default_grid() -> u64 {
    100
}

impl Default for RpkConfig {
    fn default() -> Self {
        RpkConfig {
            k: default_order(),
            delta: default_delta(),
            n_bound: default_n_bound(),
            grid: default_grid(),
            pairs: Vec::new(),
            project: false,
            finite: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairConfig {
    pub x: TorusPoint,
    pub y: TorusPoint,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FiniteRun {
    pub system: FiniteSource,
    pub k: usize,
    pub delta: f64,
    pub n_bound: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum FiniteSource {
    /// `x ↦ x + shift mod n` with the arc metric.
    Cyclic { n: usize, shift: usize },
    /// A `{size, map, metric}` file, relative to the config file.
    Path(PathBuf),
}

impl FiniteSource {
    pub fn label(&self) -> String {
        match self {
            FiniteSource::Cyclic { n, shift } => format!("cyclic:{n}:{shift}"),
            FiniteSource::Path(p) => p.display().to_string(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let mut cfg: ExperimentConfig =
            serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if let Some(dir) = path.parent() {
            for run in &mut cfg.rpk.finite {
                if let FiniteSource::Path(p) = &mut run.system {
                    if p.is_relative() {
                        *p = dir.join(&*p);
                    }
                }
            }
        }
        Ok(cfg)
    }

    pub fn alpha(&self) -> Result<Frac128> {
        match &self.alpha {
            Some(s) => Frac128::parse(s).context("alpha"),
            None => bail!("config validation: missing alpha"),
        }
    }

    pub fn beta(&self) -> Result<Frac128> {
        match &self.beta {
            Some(s) => Frac128::parse(s).context("beta"),
            None => bail!("config validation: system {} needs beta", self.system.kind()),
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps.unwrap_or_else(|| recommended_eps(self.chain_length))
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out"))
    }

    /// Checks everything that does not need the chain.
    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA {
            bail!(
                "config validation: schema {} is not supported (expected {SCHEMA})",
                self.schema
            );
        }
        self.alpha()?;
        if self.system.needs_beta() {
            self.beta()?;
        }
        if self.chain_length == 0 {
            bail!("config validation: L must be at least 1");
        }
        if self.count == 0 {
            bail!("config validation: count must be at least 1");
        }
        let need = self.system.chain_functions();
        if need > self.chain_length {
            bail!(
                "config validation: system {} needs a chain of length {need}, L = {}",
                self.system.kind(),
                self.chain_length
            );
        }
        let index = |ok: bool, what: &str| -> Result<()> {
            if ok {
                Ok(())
            } else {
                bail!("config validation: {} needs {what}", self.system.kind())
            }
        };
        match self.system {
            SystemConfig::S { k } => index(k >= 1, "k >= 1")?,
            SystemConfig::Lemma31T { k, j } => index(1 <= j && j < k, "1 <= j < k")?,
            SystemConfig::R { k } => index(k >= 1, "k >= 1")?,
            SystemConfig::TwoCob { k, l } => index(1 <= l && l <= k, "1 <= l <= k")?,
            SystemConfig::Combined { k, j, l } => index(0 < j && j < l && l <= k, "0 < j < l <= k")?,
            SystemConfig::ZdFamily { k, j, ref constants } => {
                index(1 <= j && j < k, "1 <= j < k")?;
                index(!constants.is_empty(), "at least one constant")?;
            }
        }
        let v = &self.verify;
        if !v.eigenfunction.is_empty() && !matches!(self.system, SystemConfig::R { .. }) {
            bail!("config validation: eigenfunction checks need an R system");
        }
        if v.commutation && !matches!(self.system, SystemConfig::ZdFamily { .. }) {
            bail!("config validation: commutation checks need a zd-family system");
        }
        if let Some(&m) = v.sup_growth.iter().max() {
            if m > self.count {
                bail!(
                    "config validation: sup_growth truncation {m} exceeds count {}",
                    self.count
                );
            }
        }
        if v.samples == 0 {
            bail!("config validation: samples must be positive");
        }
        let dim = self.system.dim();
        if let Some(b) = &v.birkhoff {
            if let Some(c) = b.chars.iter().find(|c| c.len() != dim) {
                bail!("config validation: character {c:?} does not have length {dim}");
            }
            if let Some(p) = b.starts.iter().find(|p| p.dim() != dim) {
                bail!("config validation: start of dimension {} in dimension {dim}", p.dim());
            }
        }
        for p in &self.rpk.pairs {
            if p.x.dim() != dim || p.y.dim() != dim {
                bail!("config validation: rpk pair is not in dimension {dim}");
            }
        }
        Ok(())
    }
}
