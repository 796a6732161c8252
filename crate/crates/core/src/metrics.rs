//! Accuracy metrics and the expected-profit function.

use alloc::format;
use alloc::string::ToString;

use crate::error::{Error, Result};
use crate::series::{Dataset, ForecastRecord, FREQ};

/// Penalty slope and no-penalty band of the profit function.
///
/// `alpha` is the profit fraction lost per percentage point of |PE| outside
/// the band `[delta, gamma]` (both in percent).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfitParams {
    alpha: f64,
    gamma: f64,
    delta: f64,
}

impl Default for ProfitParams {
    fn default() -> Self {
        Self { alpha: 0.015, gamma: 1.0, delta: -1.0 }
    }
}

impl ProfitParams {
    pub fn new(alpha: f64, gamma: f64, delta: f64) -> Result<Self> {
        if !(alpha >= 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParameter(format!("alpha must be >= 0, got {alpha}")));
        }
        if !(gamma > delta) || !gamma.is_finite() || !delta.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma ({gamma}) must exceed delta ({delta})")));
        }
        Ok(Self { alpha, gamma, delta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// `(actual - forecast) / actual * 100`; negative means over-forecast.
pub fn percentage_error(actual: f64, forecast: f64) -> Result<f64> {
    if !(actual > 0.0) {
        return Err(Error::ZeroActual(actual));
    }
    Ok((actual - forecast) / actual * 100.0)
}

/// Expected profit of one forecast. Volume is the forecast volume; the band
/// is inclusive and the result is not floored at zero.
pub fn expected_profit(actual: f64, forecast: f64, beta: f64, params: &ProfitParams) -> Result<f64> {
    let pe = percentage_error(actual, forecast)?;
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
    }
    if !(forecast >= 0.0) {
        return Err(Error::InvalidParameter(format!("forecast volume must be >= 0, got {forecast}")));
    }
    let base = beta * forecast;
    if pe > params.gamma || pe < params.delta {
        Ok((1.0 - params.alpha * pe.abs()) * base)
    } else {
        Ok(base)
    }
}

pub fn mape(records: &[ForecastRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptySet);
    }
    let mut total = 0.0;
    for r in records {
        total += percentage_error(r.actual, r.forecast)?.abs();
    }
    Ok(total / records.len() as f64)
}

pub fn rmse(records: &[ForecastRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::EmptySet);
    }
    let sse: f64 = records.iter().map(|r| (r.actual - r.forecast) * (r.actual - r.forecast)).sum();
    Ok(libm::sqrt(sse / records.len() as f64))
}

/// Mean absolute seasonal-naive error of `insample`, the MASE denominator.
pub fn seasonal_naive_scale(insample: &[f64], m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::InvalidParameter("seasonal period must be positive".into()));
    }
    if insample.len() <= m {
        return Err(Error::SeriesTooShort { required: m + 1, actual: insample.len() });
    }
    let total: f64 = insample.windows(m + 1).map(|w| (w[m] - w[0]).abs()).sum();
    let scale = total / (insample.len() - m) as f64;
    if scale == 0.0 {
        return Err(Error::ConstantSeasonalSeries);
    }
    Ok(scale)
}

/// Sum of absolute test errors over the in-sample seasonal-naive scale.
pub fn mase(records: &[ForecastRecord], insample: &[f64], m: usize) -> Result<f64> {
    let scale = seasonal_naive_scale(insample, m)?;
    let num: f64 = records.iter().map(|r| (r.actual - r.forecast).abs()).sum();
    Ok(num / scale)
}

/// Aggregates over one (dataset, model) record set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSummary {
    pub mape: f64,
    pub rmse: f64,
    pub mase: f64,
    pub total_profit: f64,
    pub total_seconds: f64,
}

/// Computes all five aggregates; MASE is scaled by the series before the
/// earliest origin in `records`.
pub fn summarize(records: &[ForecastRecord], dataset: &Dataset, params: &ProfitParams) -> Result<MetricSummary> {
    let first = records.first().ok_or(Error::EmptySet)?;
    for r in records {
        if r.dataset != first.dataset {
            return Err(Error::MixedDatasets(first.dataset.clone(), r.dataset.clone()));
        }
    }
    if first.dataset != dataset.id() {
        return Err(Error::MixedDatasets(first.dataset.clone(), dataset.id().to_string()));
    }
    let train_end = records.iter().map(|r| r.origin).min().unwrap_or(0);
    let insample = &dataset.series().values()[..train_end.min(dataset.len())];
    let mut total_profit = 0.0;
    for r in records {
        total_profit += expected_profit(r.actual, r.forecast, dataset.beta(), params)?;
    }
    Ok(MetricSummary {
        mape: mape(records)?,
        rmse: rmse(records)?,
        mase: mase(records, insample, FREQ)?,
        total_profit,
        total_seconds: records.iter().map(|r| r.compute_seconds).sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::{TimeSeries, YearMonth};
    use alloc::vec;
    use alloc::vec::Vec;
    use proptest::prelude::*;

    fn dataset(values: Vec<f64>, beta: f64) -> Dataset {
        let s = TimeSeries::new("d", YearMonth::new(2000, 1).unwrap(), values).unwrap();
        Dataset::new(s, None, beta, "x").unwrap()
    }

    fn record(ds: &Dataset, origin: usize, forecast: f64) -> ForecastRecord {
        ForecastRecord::new(ds, "m", origin, forecast, 0.0, vec![], None, &ProfitParams::default()).unwrap()
    }

    #[test]
    fn percentage_error_examples() {
        assert_eq!(percentage_error(100.0, 90.0).unwrap(), 10.0);
        assert_eq!(percentage_error(100.0, 110.0).unwrap(), -10.0);
        assert_eq!(percentage_error(0.0, 5.0), Err(Error::ZeroActual(0.0)));
    }

    #[test]
    fn profit_examples() {
        let p = ProfitParams::default();
        assert_eq!(expected_profit(100.0, 101.0, 1.0, &p).unwrap(), 101.0);
        assert_eq!(expected_profit(100.0, 99.0, 1.0, &p).unwrap(), 99.0);
        assert!((expected_profit(100.0, 110.0, 1.0, &p).unwrap() - 93.5).abs() < 1e-12);
        assert_eq!(expected_profit(0.0, 1.0, 1.0, &p), Err(Error::ZeroActual(0.0)));
    }

    #[test]
    fn profit_can_go_negative() {
        let p = ProfitParams::default();
        assert!(expected_profit(100.0, 200.0, 1.0, &p).unwrap() < 0.0);
    }

    #[test]
    fn params_validation() {
        assert!(ProfitParams::new(0.015, -1.0, 1.0).is_err());
        assert!(ProfitParams::new(-0.1, 1.0, -1.0).is_err());
        assert!(ProfitParams::new(0.0, 2.0, 0.0).is_ok());
    }

    #[test]
    fn mape_and_rmse() {
        let ds = dataset(vec![100.0, 100.0, 100.0], 1.0);
        let recs = [record(&ds, 1, 90.0), record(&ds, 2, 110.0)];
        assert_eq!(mape(&recs).unwrap(), 10.0);
        assert_eq!(mape(&[]), Err(Error::EmptySet));
        assert_eq!(rmse(&[]), Err(Error::EmptySet));
        let recs = [record(&ds, 1, 97.0), record(&ds, 2, 104.0)];
        assert!((rmse(&recs).unwrap() - libm::sqrt(12.5)).abs() < 1e-12);
        assert_eq!(rmse(&[record(&ds, 1, 95.0)]).unwrap(), 5.0);
        assert_eq!(rmse(&[record(&ds, 1, 100.0)]).unwrap(), 0.0);
    }

    #[test]
    fn mase_errors() {
        let periodic: Vec<f64> = (0..36).map(|i| 10.0 + (i % 12) as f64).collect();
        assert_eq!(seasonal_naive_scale(&periodic, 12), Err(Error::ConstantSeasonalSeries));
        assert!(matches!(seasonal_naive_scale(&periodic[..12], 12), Err(Error::SeriesTooShort { .. })));
    }

    #[test]
    fn mase_zero_for_perfect_forecasts() {
        let values: Vec<f64> = (0..40).map(|i| 50.0 + i as f64 + (i % 12) as f64).collect();
        let ds = dataset(values.clone(), 1.0);
        let recs: Vec<_> = (36..40).map(|o| record(&ds, o, values[o])).collect();
        assert_eq!(mase(&recs, &values[..36], 12).unwrap(), 0.0);
    }

    #[test]
    fn summarize_single_perfect() {
        let ds = dataset(vec![80.0, 100.0, 90.0, 95.0, 100.0, 70.0, 80.0, 100.0, 90.0, 95.0, 100.0, 70.0, 81.0, 100.0], 1.0);
        let recs = [record(&ds, 13, 100.0)];
        let s = summarize(&recs, &ds, &ProfitParams::default()).unwrap();
        assert_eq!(s.mape, 0.0);
        assert_eq!(s.total_profit, 100.0);
    }

    #[test]
    fn summarize_rejects_mixed() {
        let a = dataset(vec![100.0; 30], 1.0);
        let b = Dataset::new(TimeSeries::new("other", YearMonth::new(2000, 1).unwrap(), vec![100.0; 30]).unwrap(), None, 1.0, "y").unwrap();
        let recs = [record(&a, 20, 99.0), record(&b, 20, 99.0)];
        assert!(matches!(summarize(&recs, &a, &ProfitParams::default()), Err(Error::MixedDatasets(..))));
    }

    proptest! {
        #[test]
        fn in_band_profit_is_beta_times_forecast(pe in -1.0f64..=1.0, beta in 0.01f64..5.0) {
            let actual = 200.0;
            let forecast = actual * (1.0 - pe / 100.0);
            let p = ProfitParams::default();
            let got = expected_profit(actual, forecast, beta, &p).unwrap();
            prop_assert_eq!(got, beta * forecast);
        }

        #[test]
        fn beta_scaling(actual in 1.0f64..1e4, ratio in 0.0f64..3.0, beta in 0.01f64..5.0, c in 0.01f64..10.0) {
            let p = ProfitParams::default();
            let f = actual * ratio;
            let a = expected_profit(actual, f, beta, &p).unwrap();
            let b = expected_profit(actual, f, beta * c, &p).unwrap();
            prop_assert!((b - c * a).abs() <= 1e-9 * (1.0 + b.abs()));
        }

        #[test]
        fn metrics_order_invariant(errs in proptest::collection::vec(-50.0f64..50.0, 1..20), seed in 0u64..1000) {
            let n = errs.len();
            let values: Vec<f64> = (0..n + 13).map(|i| 100.0 + (i * 7 % 13) as f64).collect();
            let ds = dataset(values.clone(), 1.0);
            let recs: Vec<_> = errs.iter().enumerate().map(|(i, e)| record(&ds, 13 + i, values[13 + i] + e)).collect();
            let mut shuffled = recs.clone();
            let k = (seed as usize) % n;
            shuffled.rotate_left(k);
            shuffled.reverse();
            prop_assert!((mape(&recs).unwrap() - mape(&shuffled).unwrap()).abs() < 1e-9);
            prop_assert!((rmse(&recs).unwrap() - rmse(&shuffled).unwrap()).abs() < 1e-9);
            prop_assert!((mase(&recs, &values[..13], 12).unwrap() - mase(&shuffled, &values[..13], 12).unwrap()).abs() < 1e-9);
            prop_assert!(rmse(&recs).unwrap() >= 0.0);
        }
    }
}
