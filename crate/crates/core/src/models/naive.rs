use crate::error::{Error, Result};
use crate::series::FREQ;

/// Last observed value.
pub fn rw_forecast(y: &[f64]) -> Result<f64> {
    y.last().copied().ok_or(Error::SeriesTooShort { required: 1, actual: 0 })
}

/// Value observed one season before the forecast month.
pub fn srw_forecast(y: &[f64]) -> Result<f64> {
    if y.len() < FREQ {
        return Err(Error::SeriesTooShort { required: FREQ, actual: y.len() });
    }
    Ok(y[y.len() - FREQ])
}
