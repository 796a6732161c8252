//! Preprocessing shared by the lag-embedded learners: differencing chosen by
//! unit-root tests, min-max scaling fit on the training window, optional
//! month dummies.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Result;
use crate::preprocess::{design_row, lag_embed, ColumnScaler, DifferencingChoice, ExogInput, LagMatrix};
use crate::series::YearMonth;

#[derive(Debug, Clone, PartialEq)]
pub struct LagPipeline {
    pub choice: DifferencingChoice,
    pub lags: usize,
    pub target_scaler: ColumnScaler,
    pub exog_scalers: Vec<ColumnScaler>,
    /// Tail of the training series needed to undo differencing.
    history: Vec<f64>,
}

impl LagPipeline {
    /// `exog` columns hold the training span plus the forecast month. Returns
    /// the pipeline, the scaled training matrix and the scaled query row.
    pub fn build(y: &[f64], names: &[String], exog: &[Vec<f64>], start: YearMonth, lags: usize, choice: DifferencingChoice) -> Result<(Self, LagMatrix, Vec<f64>)> {
        let spec = choice.spec;
        let w = spec.apply(y)?.values;
        let target_scaler = ColumnScaler::fit(&w)?;
        let ws: Vec<f64> = w.iter().map(|&v| target_scaler.apply(v)).collect();

        let mut exog_scalers = Vec::with_capacity(exog.len());
        let mut xs = Vec::with_capacity(exog.len());
        for col in exog {
            let xd = spec.apply(col)?.values;
            let sc = ColumnScaler::fit(&xd[..w.len()])?;
            xs.push(xd.iter().map(|&v| sc.apply(v)).collect::<Vec<f64>>());
            exog_scalers.push(sc);
        }
        let input = (!exog.is_empty()).then_some(ExogInput { names, columns: &xs });
        let dummies = choice.seasonal.then(|| start.add_months(spec.lost() as i64));
        let matrix = lag_embed(&ws, input, lags, dummies)?;
        let query = design_row(&ws, ws.len(), input, lags, dummies);
        let keep = y.len().min(spec.lost() + 2);
        let history = y[y.len() - keep..].to_vec();
        Ok((Self { choice, lags, target_scaler, exog_scalers, history }, matrix, query))
    }

    /// Maps a scaled prediction of the differenced target back to sales.
    pub fn finish(&self, scaled: f64) -> f64 {
        let w = self.target_scaler.invert(scaled);
        self.choice.spec.undo_next(&self.history, w).max(0.0)
    }
}
