//! Command-line interface.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use profitcast_core::models::ModelId;
use profitcast_core::preprocess::unitroot::{lower_quantile, simulate_adf_null, simulate_ocsb_null, CRIT_LENGTHS};
use profitcast_core::series::make_split_plan;
use profitcast_core::stats::tukey::{simulate_range_quantiles, TABLE_ALPHAS, TABLE_MAX_K, TABLE_MIN_K};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::chart::write_charts;
use crate::config::{corpus_config, GridChoice, RunConfig};
use crate::error::{BenchError, Result};
use crate::harness::run_backtest;
use crate::io::{join_timings, read_records, schema_of, write_dataset_csv, write_run};
use crate::report::{analyze, write_summary};
use crate::synth::{public_corpus, synthetic_corpus};

#[derive(Debug, Parser)]
#[command(name = "profitcast", version, about = "Profit-driven forecasting benchmark")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Overrides {
    /// Output directory (overrides the config).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads for (dataset, model) cells.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum)]
    pub grid: Option<GridChoice>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a config and its datasets without computing anything.
    Validate {
        #[arg(long)]
        config: PathBuf,
    },
    /// Backtest every (dataset, model) cell and write the full report.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Recompute rank statistics from a saved records file.
    Rank {
        #[arg(long)]
        records: PathBuf,
        /// Timings file; without it every computation time is zero.
        #[arg(long)]
        timings: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Rebuild statistics and charts for a finished run directory.
    Report {
        #[arg(long)]
        run: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Regenerate the embedded studentized-range and unit-root tables.
    Tables {
        #[arg(long, default_value_t = 10_000_000)]
        draws: usize,
        #[arg(long, default_value_t = 1959)]
        seed: u64,
        /// Replications per length for the unit-root critical values.
        #[arg(long, default_value_t = 200_000)]
        unit_root_reps: usize,
    },
    /// Write the synthetic corpus and a matching config.
    Synth {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 2018)]
        seed: u64,
    },
}

pub const DEFAULT_ROSTER: [ModelId; 10] = [
    ModelId::Rw,
    ModelId::Srw,
    ModelId::Hw,
    ModelId::Dm,
    ModelId::Sarima,
    ModelId::Sarimax,
    ModelId::LrUni,
    ModelId::LrMulti,
    ModelId::KnnUni,
    ModelId::MlpUni,
];

pub fn execute(cli: Cli) -> Result<String> {
    match cli.command {
        Command::Validate { config } => validate(&config),
        Command::Run { config, overrides } => {
            let mut cfg = RunConfig::load(&config)?;
            if let Some(o) = overrides.out {
                cfg.out = o;
            }
            if let Some(s) = overrides.seed {
                cfg.seed = s;
            }
            if let Some(j) = overrides.jobs {
                cfg.jobs = j.max(1);
            }
            if let Some(g) = overrides.grid {
                cfg.grid = g;
            }
            run(&cfg)
        }
        Command::Rank { records, timings, out } => {
            let mut recs = read_records(&records)?;
            if let Some(t) = timings {
                join_timings(&mut recs, &t)?;
            }
            let files = write_summary(&analyze(&recs)?, &out)?;
            Ok(list(&files))
        }
        Command::Report { run, out } => {
            let mut recs = read_records(&run.join("records.csv"))?;
            join_timings(&mut recs, &run.join("timings.csv"))?;
            let out = out.unwrap_or(run);
            let summary = analyze(&recs)?;
            let mut files = write_summary(&summary, &out)?;
            files.extend(write_charts(&summary, &out)?);
            Ok(list(&files))
        }
        Command::Tables { draws, seed, unit_root_reps } => Ok(tables(draws, seed, unit_root_reps)),
        Command::Synth { out, seed } => synth(&out, seed),
    }
}

fn list(files: &[PathBuf]) -> String {
    files.iter().map(|f| format!("{}\n", f.display())).collect()
}

fn validate(path: &Path) -> Result<String> {
    let cfg = RunConfig::load(path)?;
    let plan = cfg.plan()?;
    let mut s = String::new();
    for ds in &plan.datasets {
        make_split_plan(ds.series(), plan.test_len, plan.val_len).map_err(|e| BenchError::core(format!("dataset {}", ds.id()), e))?;
        let cols = ds.exog().map_or(0, |t| t.columns().len());
        let _ = writeln!(s, "{}: {} months from {}, {cols} drivers, beta {}", ds.id(), ds.len(), ds.series().start(), ds.beta());
    }
    let _ = writeln!(s, "ok: {} datasets, {} models", plan.datasets.len(), plan.roster.len());
    Ok(s)
}

/// Executes a validated config and writes every artefact under its output directory.
pub fn run(cfg: &RunConfig) -> Result<String> {
    let plan = cfg.plan()?;
    let out = cfg.resolve(&cfg.out);
    let result = run_backtest(&plan)?;
    let mut files = write_run(&result, &out)?;
    match analyze(&result.records) {
        Ok(summary) => {
            files.extend(write_summary(&summary, &out)?);
            files.extend(write_charts(&summary, &out)?);
        }
        Err(e) => log::warn!("no statistics: {e}"),
    }
    let manifest = out.join("manifest.txt");
    let mut m = format!("# generated {}\n", chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true));
    let _ = writeln!(m, "seed = {}\ngrid = {:?}\ndatasets = {}", plan.seed, cfg.grid, plan.datasets.len());
    let _ = writeln!(m, "roster = {}", plan.roster.iter().map(|r| r.as_str()).collect::<Vec<_>>().join(","));
    let _ = writeln!(m, "records = {}\nfailures = {}", result.records.len(), result.failures.len());
    for f in &files {
        let _ = writeln!(m, "file = {}", f.file_name().map_or_else(String::new, |n| n.to_string_lossy().into_owned()));
    }
    fs::write(&manifest, m).map_err(|e| BenchError::io(&manifest, e))?;
    files.push(manifest);
    Ok(format!("{} records, {} failures\n{}", result.records.len(), result.failures.len(), list(&files)))
}

/// Studentized-range quantiles and unit-root critical values, as Rust rows.
pub fn tables(draws: usize, seed: u64, unit_root_reps: usize) -> String {
    let mut s = String::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let _ = writeln!(s, "// studentized range, k = {TABLE_MIN_K}..={TABLE_MAX_K}, alpha = {TABLE_ALPHAS:?}, {draws} draws, seed {seed}");
    for row in simulate_range_quantiles(TABLE_MAX_K, &TABLE_ALPHAS, draws, &mut rng) {
        let _ = writeln!(s, "    [{:?}, {:?}, {:?}],", row[0], row[1], row[2]);
    }
    if unit_root_reps > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(20180101);
        let adf: Vec<f64> = CRIT_LENGTHS.iter().map(|&n| lower_quantile(simulate_adf_null(n, unit_root_reps, &mut rng), 0.05)).collect();
        let ocsb: Vec<f64> = CRIT_LENGTHS.iter().map(|&n| lower_quantile(simulate_ocsb_null(n, unit_root_reps, &mut rng), 0.05)).collect();
        let _ = writeln!(s, "// 5% critical values at n = {CRIT_LENGTHS:?}, {unit_root_reps} replications, seed 20180101");
        let _ = writeln!(s, "ADF_CRIT_5PCT = {adf:?}");
        let _ = writeln!(s, "OCSB_CRIT_5PCT = {ocsb:?}");
    }
    s
}

fn synth(out: &Path, seed: u64) -> Result<String> {
    let mut entries = Vec::new();
    for ds in synthetic_corpus(seed).into_iter().chain(public_corpus(seed)) {
        let file = format!("{}.csv", ds.id());
        write_dataset_csv(&ds, &out.join(&file))?;
        let schema = schema_of(&ds);
        let exog = schema.exog.into_iter().map(|e| (e.name, e.category, e.unit)).collect();
        entries.push((schema.id, file, schema.beta, schema.location, exog));
    }
    let config = out.join("corpus.toml");
    fs::write(&config, corpus_config(&entries, &DEFAULT_ROSTER)).map_err(|e| BenchError::io(&config, e))?;
    Ok(format!("{} datasets and {}\n", entries.len(), config.display()))
}
