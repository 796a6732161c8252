//! Forecasters behind one fit/forecast contract.

mod decomposition;
mod grid;
mod holt_winters;
mod knn;
mod mlp;
mod naive;
mod pipeline;
mod regression;
mod sarima;
mod tree;

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

pub use decomposition::{decompose, decomposition_forecast, Decomposition};
pub use grid::{grid, GridConfig};
pub use holt_winters::{holt_winters_fit, HoltWintersFit};
pub use knn::{knn_forecast, Weighting};
pub use mlp::{mlp_fit, Mlp, MlpConfig};
pub use naive::{rw_forecast, srw_forecast};
pub use pipeline::LagPipeline;
pub use regression::{ols_fit, OlsModel};
pub use sarima::{fit_css, is_stationary, sarima_fit, sarimax_fit, ArmaOrders, CssFit, SarimaFit, SarimaOrders, SarimaxFit};
pub use tree::{best_split, tree_fit, RegressionTree, DEFAULT_MAX_DEPTH, DEFAULT_MIN_LEAF};

use crate::error::{Error, Result};
use crate::preprocess::{choose_differencing, DifferencingChoice, LagMatrix, MAX_LAGS};
use crate::series::{Dataset, YearMonth};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ModelId {
    Rw,
    Srw,
    Hw,
    Dm,
    Sarima,
    Sarimax,
    LrUni,
    LrMulti,
    KnnUni,
    KnnMulti,
    RpartUni,
    RpartMulti,
    MlpUni,
    MlpMulti,
}

impl ModelId {
    pub const ALL: [ModelId; 14] = [
        ModelId::Rw,
        ModelId::Srw,
        ModelId::Hw,
        ModelId::Dm,
        ModelId::Sarima,
        ModelId::Sarimax,
        ModelId::LrUni,
        ModelId::LrMulti,
        ModelId::KnnUni,
        ModelId::KnnMulti,
        ModelId::RpartUni,
        ModelId::RpartMulti,
        ModelId::MlpUni,
        ModelId::MlpMulti,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ModelId::Rw => "RW",
            ModelId::Srw => "SRW",
            ModelId::Hw => "HW",
            ModelId::Dm => "DM",
            ModelId::Sarima => "SARIMA",
            ModelId::Sarimax => "SARIMAX",
            ModelId::LrUni => "LRUni",
            ModelId::LrMulti => "LRMulti",
            ModelId::KnnUni => "KNNUni",
            ModelId::KnnMulti => "KNNMulti",
            ModelId::RpartUni => "RpartUni",
            ModelId::RpartMulti => "RpartMulti",
            ModelId::MlpUni => "MLPUni",
            ModelId::MlpMulti => "MLPMulti",
        }
    }

    /// Models the seasonal pattern itself.
    pub fn seasonal(self) -> bool {
        matches!(self, ModelId::Hw | ModelId::Sarima | ModelId::Dm | ModelId::Srw | ModelId::Sarimax)
    }

    /// Uses exogenous variables.
    pub fn variables(self) -> bool {
        matches!(self, ModelId::Sarimax | ModelId::LrMulti | ModelId::KnnMulti | ModelId::RpartMulti | ModelId::MlpMulti)
    }

    pub fn ml(self) -> bool {
        matches!(
            self,
            ModelId::KnnUni | ModelId::KnnMulti | ModelId::RpartUni | ModelId::RpartMulti | ModelId::MlpUni | ModelId::MlpMulti
        )
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ModelId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ModelId::ALL.into_iter().find(|m| m.as_str().eq_ignore_ascii_case(s)).ok_or_else(|| Error::UnknownModel(s.into()))
    }
}

/// Hyperparameters; variant order and field order define the tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Hyper {
    None,
    Arma(ArmaOrders),
    Lr { lags: u8 },
    Knn { k: u8, weighting: Weighting, lags: u8 },
    Tree { lags: u8 },
    Mlp { hidden: u8, lags: u8 },
}

impl fmt::Display for Hyper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hyper::None => f.write_str("-"),
            Hyper::Arma(o) => write!(f, "p={} q={} P={} Q={}", o.p, o.q, o.sp, o.sq),
            Hyper::Lr { lags } | Hyper::Tree { lags } => write!(f, "lags={lags}"),
            Hyper::Knn { k, weighting, lags } => write!(f, "k={k} weights={weighting} lags={lags}"),
            Hyper::Mlp { hidden, lags } => write!(f, "hidden={hidden} lags={lags}"),
        }
    }
}

/// A model with fixed hyperparameters and seed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ForecasterSpec {
    id: ModelId,
    hyper: Hyper,
    seed: u64,
    differencing: Option<DifferencingChoice>,
}

impl ForecasterSpec {
    pub fn new(id: ModelId, hyper: Hyper, seed: u64) -> Result<Self> {
        use ModelId::*;
        let lag_ok = |l: u8| (1..=MAX_LAGS as u8).contains(&l);
        let ok = match (id, hyper) {
            (Rw | Srw | Hw | Dm, Hyper::None) => true,
            (Sarima | Sarimax, Hyper::Arma(o)) => o.p <= 5 && o.q <= 5 && o.sp <= 5 && o.sq <= 5,
            (LrUni | LrMulti, Hyper::Lr { lags }) | (RpartUni | RpartMulti, Hyper::Tree { lags }) => lag_ok(lags),
            (KnnUni | KnnMulti, Hyper::Knn { k, lags, .. }) => (2..=5).contains(&k) && lag_ok(lags),
            (MlpUni | MlpMulti, Hyper::Mlp { hidden, lags }) => (1..=10).contains(&hidden) && lag_ok(lags),
            _ => false,
        };
        if !ok {
            return Err(Error::InvalidParameter(alloc::format!("{hyper} is not a valid setting for {id}")));
        }
        Ok(Self { id, hyper, seed, differencing: None })
    }

    /// The first point of the model's full grid.
    pub fn default_for(id: ModelId, seed: u64) -> Self {
        let hyper = grid(id, &GridConfig::full())[0];
        Self { id, hyper, seed, differencing: None }
    }

    pub fn id(&self) -> ModelId {
        self.id
    }

    pub fn hyper(&self) -> Hyper {
        self.hyper
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Differencing fixed by the caller; `None` chooses it from each training span.
    pub fn differencing(&self) -> Option<DifferencingChoice> {
        self.differencing
    }

    pub fn with_hyper(self, hyper: Hyper) -> Result<Self> {
        Ok(Self { differencing: self.differencing, ..Self::new(self.id, hyper, self.seed)? })
    }

    pub fn with_differencing(self, differencing: Option<DifferencingChoice>) -> Self {
        Self { differencing, ..self }
    }
}

/// The training span `[0, end)` of a dataset; month `end` is the one forecast.
#[derive(Debug, Clone, Copy)]
pub struct TrainWindow<'a> {
    dataset: &'a Dataset,
    end: usize,
}

impl<'a> TrainWindow<'a> {
    pub fn new(dataset: &'a Dataset, end: usize) -> Result<Self> {
        if end == 0 || end > dataset.len() {
            return Err(Error::InvalidParameter(alloc::format!("training end {end} outside 1..={}", dataset.len())));
        }
        Ok(Self { dataset, end })
    }

    pub fn dataset(&self) -> &'a Dataset {
        self.dataset
    }

    pub fn end(&self) -> usize {
        self.end
    }

    pub fn y(&self) -> &'a [f64] {
        &self.dataset.series().values()[..self.end]
    }

    pub fn start(&self) -> YearMonth {
        self.dataset.series().start()
    }

    /// Requested exogenous columns over the training span plus the forecast month.
    pub fn exog(&self, features: &[String]) -> Result<Vec<Vec<f64>>> {
        if features.is_empty() {
            return Ok(Vec::new());
        }
        let table = self.dataset.exog().ok_or_else(|| Error::UnknownFeature(features[0].clone()))?;
        if table.rows() <= self.end {
            return Err(Error::MissingExogForecastRow);
        }
        features
            .iter()
            .map(|name| {
                table.column(name).map(|c| c.values[..=self.end].to_vec()).ok_or_else(|| Error::UnknownFeature(name.clone()))
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Learner {
    Ols(OlsModel),
    Knn { matrix: LagMatrix, k: usize, weighting: Weighting },
    Tree(RegressionTree),
    Mlp(Mlp),
}

impl Learner {
    fn predict(&self, row: &[f64]) -> Result<f64> {
        match self {
            Learner::Ols(m) => Ok(m.predict(row)),
            Learner::Knn { matrix, k, weighting } => knn_forecast(matrix, row, *k, *weighting),
            Learner::Tree(t) => Ok(t.predict(row)),
            Learner::Mlp(m) => Ok(m.predict(row)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum FittedDetail {
    Naive,
    HoltWinters(HoltWintersFit),
    Decomposition,
    Sarima(SarimaFit),
    Sarimax(SarimaxFit),
    Lagged { pipeline: LagPipeline, learner: Learner },
}

/// A model fit on one training window, holding its one-step forecast.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    spec: ForecasterSpec,
    features: Vec<String>,
    detail: FittedDetail,
    forecast: f64,
}

impl FittedModel {
    pub fn spec(&self) -> ForecasterSpec {
        self.spec
    }

    /// Exogenous columns actually used (empty for univariate models).
    pub fn features(&self) -> &[String] {
        &self.features
    }

    pub fn detail(&self) -> &FittedDetail {
        &self.detail
    }

    /// Forecast for the month after the training window, on the sales scale.
    pub fn forecast_one(&self) -> f64 {
        self.forecast
    }
}

/// Fits `spec` on `window`. Univariate models ignore `features`.
pub fn fit(spec: &ForecasterSpec, window: TrainWindow<'_>, features: &[String]) -> Result<FittedModel> {
    let y = window.y();
    let features: Vec<String> = if spec.id.variables() { features.to_vec() } else { Vec::new() };
    let differencing = || spec.differencing.unwrap_or_else(|| choose_differencing(y));
    let (detail, raw) = match (spec.id, spec.hyper) {
        (ModelId::Rw, _) => (FittedDetail::Naive, rw_forecast(y)?),
        (ModelId::Srw, _) => (FittedDetail::Naive, srw_forecast(y)?),
        (ModelId::Hw, _) => {
            let f = holt_winters_fit(y)?;
            let v = f.forecast();
            (FittedDetail::HoltWinters(f), v)
        }
        (ModelId::Dm, _) => (FittedDetail::Decomposition, decomposition_forecast(y)?),
        (ModelId::Sarima, Hyper::Arma(arma)) => {
            let f = sarima_fit(y, SarimaOrders { arma, diff: differencing().spec })?;
            let v = f.forecast();
            (FittedDetail::Sarima(f), v)
        }
        (ModelId::Sarimax, Hyper::Arma(arma)) => {
            let exog = window.exog(&features)?;
            let f = sarimax_fit(y, &exog, SarimaOrders { arma, diff: differencing().spec })?;
            let v = f.forecast();
            (FittedDetail::Sarimax(f), v)
        }
        (id, hyper) => {
            let lags = match hyper {
                Hyper::Lr { lags } | Hyper::Tree { lags } | Hyper::Knn { lags, .. } | Hyper::Mlp { lags, .. } => lags as usize,
                _ => return Err(Error::InvalidParameter(alloc::format!("{hyper} is not a valid setting for {id}"))),
            };
            let exog = window.exog(&features)?;
            let (pipeline, matrix, query) = LagPipeline::build(y, &features, &exog, window.start(), lags, differencing())?;
            let learner = match hyper {
                Hyper::Lr { .. } => Learner::Ols(ols_fit(&matrix)?),
                Hyper::Tree { .. } => Learner::Tree(tree_fit(&matrix, DEFAULT_MAX_DEPTH, DEFAULT_MIN_LEAF)?),
                Hyper::Knn { k, weighting, .. } => {
                    if matrix.rows() < k as usize {
                        return Err(Error::TooFewRows { required: k as usize, actual: matrix.rows() });
                    }
                    Learner::Knn { matrix, k: k as usize, weighting }
                }
                Hyper::Mlp { hidden, .. } => Learner::Mlp(mlp_fit(&matrix, hidden as usize, spec.seed, &MlpConfig::default())?),
                _ => unreachable!("lag order extracted above"),
            };
            let raw = pipeline.finish(learner.predict(&query)?);
            (FittedDetail::Lagged { pipeline, learner }, raw)
        }
    };
    if !raw.is_finite() {
        return Err(Error::NumericalFailure(alloc::format!("{} produced a non-finite forecast", spec.id)));
    }
    Ok(FittedModel { spec: *spec, features, detail, forecast: raw.max(0.0) })
}
