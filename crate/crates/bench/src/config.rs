//! TOML run configuration.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use profitcast_core::metrics::ProfitParams;
use profitcast_core::models::{GridConfig, ModelId};
use profitcast_core::series::Category;
use serde::Deserialize;

use crate::error::{BenchError, Result};
use crate::harness::{RunPlan, DEFAULT_CADENCE, DEFAULT_TEST_LEN, DEFAULT_VAL_LEN};
use crate::io::{ingest_csv, DatasetSchema, ExogSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GridChoice {
    Full,
    #[default]
    Reduced,
}

impl GridChoice {
    pub fn config(self) -> GridConfig {
        match self {
            GridChoice::Full => GridConfig::full(),
            GridChoice::Reduced => GridConfig::reduced(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfitConfig {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_gamma")]
    pub gamma: f64,
    #[serde(default = "default_delta")]
    pub delta: f64,
}

fn default_alpha() -> f64 {
    0.015
}
fn default_gamma() -> f64 {
    1.0
}
fn default_delta() -> f64 {
    -1.0
}

impl Default for ProfitConfig {
    fn default() -> Self {
        Self { alpha: default_alpha(), gamma: default_gamma(), delta: default_delta() }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExogConfig {
    pub category: String,
    #[serde(default)]
    pub unit: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    pub id: String,
    pub path: PathBuf,
    pub beta: f64,
    #[serde(default)]
    pub location: String,
    #[serde(default = "default_date")]
    pub date_column: String,
    #[serde(default = "default_value")]
    pub value_column: String,
    /// Exogenous columns by name; ordered alphabetically.
    #[serde(default)]
    pub exog: BTreeMap<String, ExogConfig>,
}

fn default_date() -> String {
    "date".into()
}
fn default_value() -> String {
    "value".into()
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_out")]
    pub out: PathBuf,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_jobs")]
    pub jobs: usize,
    #[serde(default)]
    pub grid: GridChoice,
    pub roster: Vec<String>,
    #[serde(default = "default_test_len")]
    pub test_len: usize,
    #[serde(default = "default_val_len")]
    pub val_len: usize,
    #[serde(default = "default_cadence")]
    pub cadence: usize,
    #[serde(default)]
    pub profit: ProfitConfig,
    #[serde(rename = "dataset")]
    pub datasets: Vec<DatasetConfig>,
    /// Directory that relative paths resolve against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

fn default_out() -> PathBuf {
    "out".into()
}
fn default_jobs() -> usize {
    1
}
fn default_test_len() -> usize {
    DEFAULT_TEST_LEN
}
fn default_val_len() -> usize {
    DEFAULT_VAL_LEN
}
fn default_cadence() -> usize {
    DEFAULT_CADENCE
}

impl RunConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| BenchError::Config(e.message().to_string()))?;
        cfg.base_dir = base_dir.to_path_buf();
        cfg.check()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| BenchError::io(path, e))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn roster(&self) -> Result<Vec<ModelId>> {
        self.roster.iter().map(|m| ModelId::from_str(m).map_err(|e| BenchError::Config(e.to_string()))).collect()
    }

    pub fn profit_params(&self) -> Result<ProfitParams> {
        ProfitParams::new(self.profit.alpha, self.profit.gamma, self.profit.delta).map_err(|e| BenchError::Config(e.to_string()))
    }

    /// Every check that needs no file access.
    pub fn check(&self) -> Result<()> {
        let bad = |m: String| Err(BenchError::Config(m));
        self.roster()?;
        self.profit_params()?;
        if self.datasets.is_empty() {
            return bad("no [[dataset]] entries".into());
        }
        if self.jobs == 0 {
            return bad("jobs must be at least 1".into());
        }
        for d in &self.datasets {
            if !(d.beta > 0.0 && d.beta.is_finite()) {
                return bad(format!("dataset {}: beta must be positive", d.id));
            }
            for (name, e) in &d.exog {
                Category::from_str(&e.category).map_err(|err| BenchError::Config(format!("dataset {} column {name}: {err}", d.id)))?;
            }
        }
        Ok(())
    }

    pub fn schema(&self, d: &DatasetConfig) -> Result<DatasetSchema> {
        let exog = d
            .exog
            .iter()
            .map(|(name, e)| {
                Ok(ExogSpec {
                    name: name.clone(),
                    category: Category::from_str(&e.category).map_err(|err| BenchError::Config(err.to_string()))?,
                    unit: e.unit.clone(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(DatasetSchema {
            id: d.id.clone(),
            date_column: d.date_column.clone(),
            value_column: d.value_column.clone(),
            exog,
            beta: d.beta,
            location: d.location.clone(),
        })
    }

    /// Loads every dataset and assembles a validated plan.
    pub fn plan(&self) -> Result<RunPlan> {
        let datasets = self
            .datasets
            .iter()
            .map(|d| ingest_csv(&self.resolve(&d.path), &self.schema(d)?))
            .collect::<Result<Vec<_>>>()?;
        let mut plan = RunPlan::new(datasets, self.roster()?);
        plan.params = self.profit_params()?;
        plan.grid = self.grid.config();
        plan.test_len = self.test_len;
        plan.val_len = self.val_len;
        plan.cadence = self.cadence;
        plan.seed = self.seed;
        plan.jobs = self.jobs;
        plan.validate()?;
        Ok(plan)
    }
}

/// Renders a config for datasets written by the corpus generator.
pub fn corpus_config(entries: &[(String, String, f64, String, Vec<(String, Category, String)>)], roster: &[ModelId]) -> String {
    let mut s = String::new();
    s.push_str("out = \"runs/corpus\"\nseed = 2018\njobs = 1\ngrid = \"reduced\"\n");
    let names: Vec<String> = roster.iter().map(|m| format!("\"{m}\"")).collect();
    s.push_str(&format!("roster = [{}]\n\n[profit]\nalpha = 0.015\ngamma = 1.0\ndelta = -1.0\n", names.join(", ")));
    for (id, path, beta, location, exog) in entries {
        s.push_str(&format!("\n[[dataset]]\nid = \"{id}\"\npath = \"{path}\"\nbeta = {beta:?}\nlocation = \"{location}\"\n"));
        for (name, cat, unit) in exog {
            s.push_str(&format!("exog.{name} = {{ category = \"{cat}\", unit = \"{unit}\" }}\n"));
        }
    }
    s
}
