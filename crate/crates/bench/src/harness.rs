//! Tuning, periodic feature selection and the expanding-window backtest.

use std::fmt;
use std::time::Instant;

use log::{debug, info, warn};
use profitcast_core::featsel::{default_k, mrmr_rank_columns, validation_profits, wrapper_select, FeatureRanking};
use profitcast_core::metrics::{seasonal_naive_scale, summarize, MetricSummary, ProfitParams};
use profitcast_core::models::{fit, grid, ForecasterSpec, GridConfig, Hyper, ModelId, TrainWindow};
use profitcast_core::preprocess::choose_differencing;
use profitcast_core::series::{make_split_plan, Dataset, ForecastRecord, SplitPlan, FREQ};
use rayon::prelude::*;

use crate::error::{BenchError, Result};

pub const DEFAULT_TEST_LEN: usize = 24;
pub const DEFAULT_VAL_LEN: usize = 12;
pub const DEFAULT_CADENCE: usize = 3;

#[derive(Debug, Clone)]
pub struct RunPlan {
    pub datasets: Vec<Dataset>,
    pub roster: Vec<ModelId>,
    pub params: ProfitParams,
    pub grid: GridConfig,
    pub test_len: usize,
    pub val_len: usize,
    /// Feature selection is refreshed every `cadence` test steps.
    pub cadence: usize,
    pub seed: u64,
    pub jobs: usize,
}

impl RunPlan {
    pub fn new(datasets: Vec<Dataset>, roster: Vec<ModelId>) -> Self {
        Self {
            datasets,
            roster,
            params: ProfitParams::default(),
            grid: GridConfig::reduced(),
            test_len: DEFAULT_TEST_LEN,
            val_len: DEFAULT_VAL_LEN,
            cadence: DEFAULT_CADENCE,
            seed: 0,
            jobs: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(BenchError::Config(m));
        if self.cadence == 0 {
            return bad("cadence must be at least 1".into());
        }
        if self.test_len == 0 || self.val_len == 0 {
            return bad("test and validation lengths must be positive".into());
        }
        if self.roster.is_empty() {
            return bad("roster is empty".into());
        }
        if self.datasets.is_empty() {
            return bad("no datasets".into());
        }
        for (i, m) in self.roster.iter().enumerate() {
            if self.roster[..i].contains(m) {
                return bad(format!("model {m} listed twice"));
            }
            if grid(*m, &self.grid).is_empty() {
                return bad(format!("grid for {m} is empty"));
            }
        }
        for (i, d) in self.datasets.iter().enumerate() {
            if self.datasets[..i].iter().any(|o| o.id() == d.id()) {
                return bad(format!("dataset {} listed twice", d.id()));
            }
        }
        Ok(())
    }

    /// Seed handed to the forecaster of one (dataset, model) cell.
    pub fn cell_seed(&self, dataset: &str, model: ModelId) -> u64 {
        // FNV-1a over the cell identity, mixed with the run seed
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for b in dataset.bytes().chain([0u8]).chain(model.as_str().bytes()) {
            h ^= b as u64;
            h = h.wrapping_mul(0x0100_0000_01b3);
        }
        h ^ self.seed
    }
}

/// Hyperparameters picked on the first validation window.
#[derive(Debug, Clone, PartialEq)]
pub struct TuningChoice {
    pub dataset: String,
    pub model: ModelId,
    pub hyper: Hyper,
    pub profit: f64,
    pub evaluated: usize,
    pub failed: usize,
    pub features: Vec<String>,
}

/// One run of mRMR plus the wrapper.
#[derive(Debug, Clone, PartialEq)]
pub struct SelectionEvent {
    pub dataset: String,
    pub model: ModelId,
    pub step: usize,
    pub origin: usize,
    pub train_end: usize,
    pub ranking: Vec<String>,
    /// Validation profit per prefix size; −∞ marks a failed prefix.
    pub profits: Vec<f64>,
    pub features: Vec<String>,
    /// Set when selection failed and the previous features were kept.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Dataset,
    Tuning,
    Fit,
}

impl Stage {
    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Dataset => "dataset",
            Stage::Tuning => "tuning",
            Stage::Fit => "fit",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A test step that produced no record.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub dataset: String,
    pub model: ModelId,
    pub step: usize,
    pub origin: Option<usize>,
    pub stage: Stage,
    pub message: String,
}

#[derive(Debug, Clone, Default)]
pub struct RunResult {
    /// Sorted by (dataset, model, origin).
    pub records: Vec<ForecastRecord>,
    pub failures: Vec<Failure>,
    pub tuning: Vec<TuningChoice>,
    pub selections: Vec<SelectionEvent>,
    pub summaries: Vec<(String, ModelId, MetricSummary)>,
}

/// Runs `f` and returns its value with the elapsed wall-clock seconds.
pub fn time_forecast<T>(f: impl FnOnce() -> T) -> (T, f64) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed().as_secs_f64())
}

#[derive(Debug, Clone, PartialEq)]
pub struct TuneOutcome {
    pub spec: ForecasterSpec,
    /// Total validation profit of the winner; NaN for grid-free models.
    pub profit: f64,
    pub evaluated: usize,
    pub failed: usize,
}

/// Exhaustive grid search on `val_len` sequential validation forecasts after
/// `train_end`. The first grid point with the strictly highest profit wins.
pub fn tune(
    spec: &ForecasterSpec,
    dataset: &Dataset,
    train_end: usize,
    val_len: usize,
    features: &[String],
    params: &ProfitParams,
    cfg: &GridConfig,
) -> Result<TuneOutcome> {
    let points = grid(spec.id(), cfg);
    if points == [Hyper::None] {
        return Ok(TuneOutcome { spec: *spec, profit: f64::NAN, evaluated: 0, failed: 0 });
    }
    let mut best: Option<(ForecasterSpec, f64)> = None;
    let mut failed = 0;
    for hyper in &points {
        let candidate = spec.with_hyper(*hyper).map_err(|e| BenchError::core(spec.id().as_str(), e))?;
        match validation_profits(&candidate, dataset, train_end, val_len, features, params) {
            Ok(steps) => {
                let total: f64 = steps.iter().sum();
                if total.is_finite() && best.is_none_or(|(_, b)| total > b) {
                    best = Some((candidate, total));
                }
            }
            Err(e) => {
                debug!("{} {} {hyper}: {e}", dataset.id(), spec.id());
                failed += 1;
            }
        }
    }
    let (spec, profit) = best.ok_or_else(|| BenchError::AllGridPointsFailed { model: spec.id().to_string() })?;
    Ok(TuneOutcome { spec, profit, evaluated: points.len(), failed })
}

/// mRMR ranking of every exogenous column against the target over `[0, end)`.
pub fn rank_features(dataset: &Dataset, end: usize) -> profitcast_core::error::Result<FeatureRanking> {
    let Some(table) = dataset.exog() else {
        return Ok(FeatureRanking { names: Vec::new(), scores: Vec::new() });
    };
    let names: Vec<String> = table.names().map(String::from).collect();
    let cols: Vec<&[f64]> = table.columns().iter().map(|c| &c.values[..end]).collect();
    mrmr_rank_columns(&names, &cols, &dataset.series().values()[..end], default_k(names.len()))
}

#[derive(Default)]
struct CellOutput {
    records: Vec<ForecastRecord>,
    failures: Vec<Failure>,
    tuning: Option<TuningChoice>,
    selections: Vec<SelectionEvent>,
}

fn fail_all(out: &mut CellOutput, dataset: &str, model: ModelId, test_len: usize, stage: Stage, origins: Option<&[usize]>, msg: &str) {
    for step in 0..test_len {
        out.failures.push(Failure {
            dataset: dataset.to_string(),
            model,
            step,
            origin: origins.map(|o| o[step]),
            stage,
            message: msg.to_string(),
        });
    }
}

fn run_cell(plan: &RunPlan, dataset: &Dataset, split: &SplitPlan, model: ModelId) -> CellOutput {
    let mut out = CellOutput::default();
    let id = dataset.id();
    let origins = split.origins();
    let seed = plan.cell_seed(id, model);
    let uses_exog = model.variables() && dataset.exog().is_some_and(|t| !t.columns().is_empty());

    let tune_end = split.tuning_train_end();
    let mut features = Vec::new();
    if uses_exog {
        match rank_features(dataset, tune_end) {
            Ok(r) => features = r.names,
            Err(e) => {
                fail_all(&mut out, id, model, origins.len(), Stage::Tuning, Some(origins), &format!("feature ranking: {e}"));
                return out;
            }
        }
    }
    let differencing = choose_differencing(&dataset.series().values()[..tune_end]);
    let base = ForecasterSpec::default_for(model, seed).with_differencing(Some(differencing));
    let spec = match tune(&base, dataset, tune_end, plan.val_len, &features, &plan.params, &plan.grid) {
        Ok(t) => {
            info!("{id} {model}: tuned {} (profit {:.3}, {} of {} points failed)", t.spec.hyper(), t.profit, t.failed, t.evaluated);
            out.tuning = Some(TuningChoice {
                dataset: id.to_string(),
                model,
                hyper: t.spec.hyper(),
                profit: t.profit,
                evaluated: t.evaluated,
                failed: t.failed,
                features: features.clone(),
            });
            t.spec
        }
        Err(e) => {
            warn!("{id} {model}: {e}");
            fail_all(&mut out, id, model, origins.len(), Stage::Tuning, Some(origins), &e.to_string());
            return out;
        }
    };

    let scale = seasonal_naive_scale(&dataset.series().values()[..split.first_origin()], FREQ).ok();
    for (step, &origin) in origins.iter().enumerate() {
        if uses_exog && step % plan.cadence == 0 {
            let (train_end, _) = split.windows(step);
            let mut event = SelectionEvent {
                dataset: id.to_string(),
                model,
                step,
                origin,
                train_end,
                ranking: Vec::new(),
                profits: Vec::new(),
                features: features.clone(),
                error: None,
            };
            let selected = rank_features(dataset, train_end).and_then(|ranking| {
                event.ranking = ranking.names.clone();
                wrapper_select(&ranking, &spec, dataset, train_end, plan.val_len, &plan.params)
            });
            match selected {
                Ok(w) => {
                    event.profits = w.profits;
                    features = w.features;
                    event.features = features.clone();
                }
                Err(e) => {
                    warn!("{id} {model} step {step}: feature selection failed, keeping previous features: {e}");
                    event.error = Some(e.to_string());
                }
            }
            out.selections.push(event);
        }
        let window = match TrainWindow::new(dataset, origin) {
            Ok(w) => w,
            Err(e) => {
                out.failures.push(Failure { dataset: id.into(), model, step, origin: Some(origin), stage: Stage::Fit, message: e.to_string() });
                continue;
            }
        };
        let (fitted, secs) = time_forecast(|| fit(&spec, window, &features));
        let record = fitted.and_then(|m| {
            ForecastRecord::new(dataset, model.as_str(), origin, m.forecast_one(), secs, m.features().to_vec(), scale, &plan.params)
        });
        match record {
            Ok(r) => out.records.push(r),
            Err(e) => {
                debug!("{id} {model} origin {origin}: {e}");
                out.failures.push(Failure { dataset: id.into(), model, step, origin: Some(origin), stage: Stage::Fit, message: e.to_string() });
            }
        }
    }
    out
}

/// Tunes, selects features and backtests every (dataset, model) cell.
pub fn run_backtest(plan: &RunPlan) -> Result<RunResult> {
    plan.validate()?;
    let mut result = RunResult::default();
    let mut cells = Vec::new();
    let mut splits = Vec::with_capacity(plan.datasets.len());
    for (di, ds) in plan.datasets.iter().enumerate() {
        match make_split_plan(ds.series(), plan.test_len, plan.val_len) {
            Ok(split) => {
                splits.push(Some(split));
                cells.extend(plan.roster.iter().map(|&m| (di, m)));
            }
            Err(e) => {
                warn!("{}: dataset skipped: {e}", ds.id());
                let mut out = CellOutput::default();
                for &m in &plan.roster {
                    fail_all(&mut out, ds.id(), m, plan.test_len, Stage::Dataset, None, &e.to_string());
                }
                result.failures.extend(out.failures);
                splits.push(None);
            }
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(plan.jobs.max(1))
        .build()
        .map_err(|e| BenchError::Config(format!("thread pool: {e}")))?;
    let outputs: Vec<CellOutput> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(di, m)| {
                let ds = &plan.datasets[di];
                let split = splits[di].as_ref().expect("cells exist only for valid splits");
                let (out, secs) = time_forecast(|| run_cell(plan, ds, split, m));
                info!("{} {m}: {} records, {} failures in {secs:.1}s", ds.id(), out.records.len(), out.failures.len());
                out
            })
            .collect()
    });

    for out in outputs {
        result.records.extend(out.records);
        result.failures.extend(out.failures);
        result.tuning.extend(out.tuning);
        result.selections.extend(out.selections);
    }
    result.records.sort_by(|a, b| (&a.dataset, &a.model, a.origin).cmp(&(&b.dataset, &b.model, b.origin)));
    result.failures.sort_by(|a, b| (&a.dataset, a.model.as_str(), a.step).cmp(&(&b.dataset, b.model.as_str(), b.step)));
    result.tuning.sort_by(|a, b| (&a.dataset, a.model.as_str()).cmp(&(&b.dataset, b.model.as_str())));
    result.selections.sort_by(|a, b| (&a.dataset, a.model.as_str(), a.step).cmp(&(&b.dataset, b.model.as_str(), b.step)));

    for ds in &plan.datasets {
        for &m in &plan.roster {
            let recs: Vec<ForecastRecord> = result.records.iter().filter(|r| r.dataset == ds.id() && r.model == m.as_str()).cloned().collect();
            if recs.is_empty() {
                continue;
            }
            match summarize(&recs, ds, &plan.params) {
                Ok(s) => result.summaries.push((ds.id().to_string(), m, s)),
                Err(e) => warn!("{} {m}: no summary: {e}", ds.id()),
            }
        }
    }
    result.summaries.sort_by(|a, b| (&a.0, a.1.as_str()).cmp(&(&b.0, b.1.as_str())));
    Ok(result)
}
