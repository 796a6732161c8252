//! Monthly series, exogenous drivers, datasets and backtest split plans.
//!
//! Everything here is immutable once constructed. Calendar positions are
//! `(year, month)` pairs without a day component and every join between a
//! series and its drivers happens on the absolute month index.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::metrics::{self, ProfitParams};

/// Periods per year. Only monthly data is supported.
pub const FREQ: usize = 12;

/// A calendar month.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct YearMonth {
    year: i32,
    month: u8,
}

impl YearMonth {
    pub fn new(year: i32, month: u8) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::InvalidParameter(format!("month {month} outside 1..=12")));
        }
        Ok(Self { year, month })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    /// Month of year, 1 = January.
    pub fn month(self) -> u8 {
        self.month
    }

    /// Absolute month count since year 0.
    pub fn ordinal(self) -> i64 {
        i64::from(self.year) * 12 + i64::from(self.month) - 1
    }

    pub fn from_ordinal(ordinal: i64) -> Self {
        let year = ordinal.div_euclid(12);
        let month = ordinal.rem_euclid(12) + 1;
        Self { year: year as i32, month: month as u8 }
    }

    pub fn add_months(self, k: i64) -> Self {
        Self::from_ordinal(self.ordinal() + k)
    }

    /// Signed number of months from `self` to `later`.
    pub fn months_until(self, later: YearMonth) -> i64 {
        later.ordinal() - self.ordinal()
    }
}

impl fmt::Display for YearMonth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

impl FromStr for YearMonth {
    type Err = Error;

    /// Accepts `YYYY-MM` and `YYYY-MM-DD` (the day is ignored).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unparseable month {s:?}"));
        let mut parts = s.trim().split('-');
        let year = parts.next().ok_or_else(bad)?.parse::<i32>().map_err(|_| bad())?;
        let month = parts.next().ok_or_else(bad)?.parse::<u8>().map_err(|_| bad())?;
        if let Some(day) = parts.next() {
            day.parse::<u8>().map_err(|_| bad())?;
        }
        if parts.next().is_some() {
            return Err(bad());
        }
        YearMonth::new(year, month)
    }
}

fn check_finite(values: &[f64], context: &str) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFiniteValue { context: context.to_string(), index }),
        None => Ok(()),
    }
}

/// A monthly sales series.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    id: String,
    start: YearMonth,
    values: Vec<f64>,
}

impl TimeSeries {
    pub fn new(id: impl Into<String>, start: YearMonth, values: Vec<f64>) -> Result<Self> {
        let id = id.into();
        if values.is_empty() {
            return Err(Error::SeriesTooShort { required: 1, actual: 0 });
        }
        check_finite(&values, &id)?;
        Ok(Self { id, start, values })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn start(&self) -> YearMonth {
        self.start
    }

    pub fn freq(&self) -> usize {
        FREQ
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Calendar month of position `index`.
    pub fn month_at(&self, index: usize) -> YearMonth {
        self.start.add_months(index as i64)
    }

    /// Position of `month` in this series' index, if it falls inside it.
    pub fn index_of(&self, month: YearMonth) -> Option<usize> {
        let k = self.start.months_until(month);
        (k >= 0 && (k as usize) < self.values.len()).then_some(k as usize)
    }

    pub fn end(&self) -> YearMonth {
        self.month_at(self.values.len() - 1)
    }
}

/// Driver families for external variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Category {
    Weather,
    Macro,
    Holiday,
    Pricing,
}

impl Category {
    pub const ALL: [Category; 4] = [Category::Weather, Category::Macro, Category::Holiday, Category::Pricing];

    pub fn as_str(self) -> &'static str {
        match self {
            Category::Weather => "weather",
            Category::Macro => "macro",
            Category::Holiday => "holiday",
            Category::Pricing => "pricing",
        }
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Category {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "weather" => Ok(Category::Weather),
            "macro" => Ok(Category::Macro),
            "holiday" | "holidays" => Ok(Category::Holiday),
            "pricing" => Ok(Category::Pricing),
            other => Err(Error::InvalidParameter(format!("unknown driver category {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExogColumn {
    pub name: String,
    pub category: Category,
    pub unit: String,
    pub values: Vec<f64>,
}

/// Time-aligned external drivers, stored column-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ExogenousTable {
    start: YearMonth,
    rows: usize,
    columns: Vec<ExogColumn>,
}

impl ExogenousTable {
    pub fn new(start: YearMonth, columns: Vec<ExogColumn>) -> Result<Self> {
        let rows = columns.first().map_or(0, |c| c.values.len());
        for col in &columns {
            if col.values.len() != rows {
                return Err(Error::LengthMismatch(rows, col.values.len()));
            }
            check_finite(&col.values, &col.name)?;
        }
        for (i, col) in columns.iter().enumerate() {
            if columns[..i].iter().any(|c| c.name == col.name) {
                return Err(Error::InvalidParameter(format!("duplicate column {:?}", col.name)));
            }
        }
        Ok(Self { start, rows, columns })
    }

    pub fn start(&self) -> YearMonth {
        self.start
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn columns(&self) -> &[ExogColumn] {
        &self.columns
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.columns.iter().map(|c| c.name.as_str())
    }

    pub fn column(&self, name: &str) -> Option<&ExogColumn> {
        self.columns.iter().find(|c| c.name == name)
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }
}

/// A series with its drivers and profit margin weight.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    series: TimeSeries,
    exog: Option<ExogenousTable>,
    beta: f64,
    location: String,
}

impl Dataset {
    /// Builds a dataset from a series and an already aligned table (or none).
    pub fn new(series: TimeSeries, exog: Option<ExogenousTable>, beta: f64, location: impl Into<String>) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
        }
        if let Some(table) = &exog {
            if table.start != series.start || table.rows != series.len() {
                return Err(Error::MisalignedExogenous {
                    series: series.id.clone(),
                    missing: format!("{} ({} rows from {})", series.start, table.rows, table.start),
                });
            }
        }
        Ok(Self { series, exog, beta, location: location.into() })
    }

    pub fn id(&self) -> &str {
        self.series.id()
    }

    pub fn series(&self) -> &TimeSeries {
        &self.series
    }

    pub fn exog(&self) -> Option<&ExogenousTable> {
        self.exog.as_ref()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn location(&self) -> &str {
        &self.location
    }

    pub fn len(&self) -> usize {
        self.series.len()
    }

    pub fn is_empty(&self) -> bool {
        self.series.is_empty()
    }

    pub fn with_beta(mut self, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
        }
        self.beta = beta;
        Ok(self)
    }
}

/// Trims `exog` to the index of `series` and checks full coverage.
pub fn align(series: TimeSeries, exog: ExogenousTable) -> Result<(TimeSeries, ExogenousTable)> {
    let offset = exog.start.months_until(series.start);
    let last_needed = offset + series.len() as i64 - 1;
    if offset < 0 || last_needed >= exog.rows as i64 {
        let missing = if offset < 0 { series.start } else { exog.start.add_months(exog.rows as i64) };
        return Err(Error::MisalignedExogenous { series: series.id.clone(), missing: missing.to_string() });
    }
    let lo = offset as usize;
    let hi = lo + series.len();
    let columns = exog
        .columns
        .into_iter()
        .map(|c| ExogColumn { values: c.values[lo..hi].to_vec(), ..c })
        .collect();
    let table = ExogenousTable::new(series.start, columns)?;
    Ok((series, table))
}

/// Convenience wrapper around [`align`] that also attaches `beta`.
pub fn align_dataset(series: TimeSeries, exog: ExogenousTable, beta: f64, location: impl Into<String>) -> Result<Dataset> {
    let (series, table) = align(series, exog)?;
    Dataset::new(series, Some(table), beta, location)
}

/// Forecast origins of an expanding-window backtest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPlan {
    test_len: usize,
    val_len: usize,
    origins: Vec<usize>,
}

impl SplitPlan {
    pub fn test_len(&self) -> usize {
        self.test_len
    }

    pub fn val_len(&self) -> usize {
        self.val_len
    }

    /// Index of the month forecast at each step; training covers `0..origin`.
    pub fn origins(&self) -> &[usize] {
        &self.origins
    }

    pub fn first_origin(&self) -> usize {
        self.origins[0]
    }

    /// Training range used for tuning: everything before the first validation window.
    pub fn tuning_train_end(&self) -> usize {
        self.first_origin() - self.val_len
    }

    /// `(train_end, origin)` for step `k`: validation spans `train_end..origin`.
    pub fn windows(&self, k: usize) -> (usize, usize) {
        let origin = self.origins[k];
        (origin - self.val_len, origin)
    }
}

/// Minimum length accepted by [`make_split_plan`].
pub fn min_split_length(test_len: usize, val_len: usize) -> usize {
    test_len + val_len + 2 * FREQ + 1
}

pub fn make_split_plan(series: &TimeSeries, test_len: usize, val_len: usize) -> Result<SplitPlan> {
    if test_len == 0 {
        return Err(Error::InvalidParameter("test length must be positive".into()));
    }
    let required = min_split_length(test_len, val_len);
    if series.len() < required {
        return Err(Error::SeriesTooShort { required, actual: series.len() });
    }
    let first = series.len() - test_len;
    Ok(SplitPlan { test_len, val_len, origins: (first..series.len()).collect() })
}

/// One model's one-step forecast at one origin.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastRecord {
    pub dataset: String,
    pub model: String,
    pub origin: usize,
    pub period: YearMonth,
    pub horizon: u32,
    pub forecast: f64,
    pub actual: f64,
    pub compute_seconds: f64,
    pub selected_features: Vec<String>,
    /// |percentage error|
    pub abs_pe: f64,
    pub squared_error: f64,
    /// Absolute error over the in-sample seasonal naive scale.
    pub scaled_error: f64,
    pub profit: f64,
}

impl ForecastRecord {
    /// Builds a record and derives its per-forecast metric values.
    ///
    /// `scale` is the seasonal-naive denominator of the training series; pass
    /// `None` when it is unavailable, in which case `scaled_error` equals the
    /// absolute error.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        dataset: &Dataset,
        model: impl Into<String>,
        origin: usize,
        forecast: f64,
        compute_seconds: f64,
        selected_features: Vec<String>,
        scale: Option<f64>,
        params: &ProfitParams,
    ) -> Result<Self> {
        if !forecast.is_finite() {
            return Err(Error::NonFiniteValue { context: "forecast".into(), index: origin });
        }
        if !(compute_seconds >= 0.0) {
            return Err(Error::InvalidParameter(format!("negative compute time {compute_seconds}")));
        }
        let actual = *dataset
            .series()
            .values()
            .get(origin)
            .ok_or(Error::SeriesTooShort { required: origin + 1, actual: dataset.len() })?;
        let pe = metrics::percentage_error(actual, forecast)?;
        let profit = metrics::expected_profit(actual, forecast, dataset.beta(), params)?;
        let err = actual - forecast;
        Ok(Self {
            dataset: dataset.id().to_string(),
            model: model.into(),
            origin,
            period: dataset.series().month_at(origin),
            horizon: 1,
            forecast,
            actual,
            compute_seconds,
            selected_features,
            abs_pe: pe.abs(),
            squared_error: err * err,
            scaled_error: err.abs() / scale.unwrap_or(1.0),
            profit,
        })
    }
}
