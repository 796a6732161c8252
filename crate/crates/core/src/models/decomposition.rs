//! Classical additive decomposition forecaster.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::series::FREQ;

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// Centred 2×12 moving average; `None` at the six positions on each end.
    pub trend: Vec<Option<f64>>,
    /// Zero-sum seasonal index by position mod 12.
    pub seasonal: [f64; FREQ],
}

pub fn decompose(y: &[f64]) -> Result<Decomposition> {
    let n = y.len();
    if n < 3 * FREQ {
        return Err(Error::SeriesTooShort { required: 3 * FREQ, actual: n });
    }
    let half = FREQ / 2;
    let mut trend = alloc::vec![None; n];
    for t in half..n - half {
        let inner: f64 = y[t - half + 1..t + half].iter().sum();
        let ends = (y[t - half] + y[t + half]) / 2.0;
        trend[t] = Some((inner + ends) / FREQ as f64);
    }
    let mut sums = [0.0; FREQ];
    let mut counts = [0usize; FREQ];
    for t in 0..n {
        if let Some(tr) = trend[t] {
            sums[t % FREQ] += y[t] - tr;
            counts[t % FREQ] += 1;
        }
    }
    let mut seasonal = [0.0; FREQ];
    for i in 0..FREQ {
        seasonal[i] = sums[i] / counts[i] as f64;
    }
    let mean = seasonal.iter().sum::<f64>() / FREQ as f64;
    seasonal.iter_mut().for_each(|s| *s -= mean);
    Ok(Decomposition { trend, seasonal })
}

/// Last trend value pushed forward with the drift over the final year of
/// trend estimates, plus the forecast month's seasonal index.
pub fn decomposition_forecast(y: &[f64]) -> Result<f64> {
    let dec = decompose(y)?;
    let n = y.len();
    let last = n - 1 - FREQ / 2;
    let tr_last = dec.trend[last].expect("interior trend");
    let tr_prev = dec.trend[last - FREQ].expect("interior trend");
    let drift = (tr_last - tr_prev) / FREQ as f64;
    Ok(tr_last + drift * (n - last) as f64 + dec.seasonal[n % FREQ])
}
