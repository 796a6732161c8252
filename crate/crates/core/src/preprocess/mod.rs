//! Scaling, differencing, unit-root tests and lag embedding.

mod design;
mod diff;
mod scale;
pub mod unitroot;

pub use design::{design_row, dummy_row, lag_embed, seasonal_dummies, ExogInput, LagMatrix, DUMMY_COLUMNS, MAX_LAGS};
pub use diff::{difference, integrate, Differenced, DifferencingSpec};
pub use scale::{minmax_apply, minmax_fit, minmax_invert, ColumnScaler, ScalerState};
pub use unitroot::{adf_default_max_lag, adf_test, ocsb_test, AdfResult, OcsbResult};

use crate::series::FREQ;

/// Differencing chosen by the unit-root tests on a training window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DifferencingChoice {
    pub spec: DifferencingSpec,
    /// Whether month-of-year dummies should accompany non-seasonal models.
    pub seasonal: bool,
}

/// OCSB decides the seasonal order, then ADF on the (seasonally differenced)
/// series decides the regular order. A test that cannot be computed leaves
/// the corresponding order at its conservative value (difference for ADF,
/// no seasonal difference for OCSB).
pub fn choose_differencing(y: &[f64]) -> DifferencingChoice {
    let seasonal_d = match ocsb_test(y) {
        Ok(r) => r.seasonal_d(),
        Err(_) => 0,
    };
    let z: alloc::vec::Vec<f64> = if seasonal_d == 1 {
        (FREQ..y.len()).map(|t| y[t] - y[t - FREQ]).collect()
    } else {
        y.to_vec()
    };
    let d = match adf_test(&z, adf_default_max_lag(z.len())) {
        Ok(r) => u8::from(!r.stationary),
        Err(_) => 1,
    };
    let spec = DifferencingSpec::new(d, seasonal_d).expect("orders are 0 or 1");
    DifferencingChoice { spec, seasonal: seasonal_d == 1 || has_seasonal_autocorrelation(y) }
}

/// One-sided 5% check of the lag-12 autocorrelation of the first differences.
pub fn has_seasonal_autocorrelation(y: &[f64]) -> bool {
    if y.len() < 2 * FREQ + 2 {
        return false;
    }
    let dy: alloc::vec::Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let n = dy.len() as f64;
    let mean = dy.iter().sum::<f64>() / n;
    let var: f64 = dy.iter().map(|v| (v - mean) * (v - mean)).sum();
    if var == 0.0 {
        return false;
    }
    let cov: f64 = (FREQ..dy.len()).map(|t| (dy[t] - mean) * (dy[t - FREQ] - mean)).sum();
    cov / var > 1.645 / libm::sqrt(n)
}
