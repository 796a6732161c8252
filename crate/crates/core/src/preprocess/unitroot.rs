//! Augmented Dickey–Fuller and OCSB seasonal unit-root tests.
//!
//! The 5% critical values are empirical quantiles of the test statistic
//! under each test's null, simulated with [`simulate_adf_null`] and
//! [`simulate_ocsb_null`] (200 000 replications per length) and frozen in
//! the tables below. `profitcast tables` regenerates them.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{ols_with_stats, OlsStats};
use crate::series::FREQ;

/// Series lengths at which critical values were simulated.
pub const CRIT_LENGTHS: [usize; 3] = [50, 100, 200];

/// 5% critical values of the ADF t-statistic (constant, no trend).
pub const ADF_CRIT_5PCT: [f64; 3] = [-2.919786462703055, -2.889374884413826, -2.878705130349078];

/// 5% critical values of the OCSB t-statistic on the seasonal regressor.
pub const OCSB_CRIT_5PCT: [f64; 3] = [-1.780000042793198, -1.7957459260188517, -1.7907080706767198];

pub const OCSB_MAX_LAG: usize = 3;

/// Piecewise-linear interpolation in `1/n` through the simulated points;
/// clamped below the shortest length and extrapolated towards `n = ∞`.
pub fn interpolate_crit(table: &[f64; 3], n: usize) -> f64 {
    let x = |len: usize| 1.0 / len as f64;
    let n = n.max(CRIT_LENGTHS[0]);
    let seg = if n <= CRIT_LENGTHS[1] { 0 } else { 1 };
    let (x0, x1) = (x(CRIT_LENGTHS[seg]), x(CRIT_LENGTHS[seg + 1]));
    let (y0, y1) = (table[seg], table[seg + 1]);
    y0 + (y1 - y0) * (x(n) - x0) / (x1 - x0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdfResult {
    pub stationary: bool,
    pub stat: f64,
    pub crit_5pct: f64,
    pub lags: usize,
    pub nobs: usize,
}

/// Schwert's rule `⌊12 (n/100)^{1/4}⌋`.
pub fn adf_default_max_lag(n: usize) -> usize {
    libm::floor(12.0 * libm::pow(n as f64 / 100.0, 0.25)) as usize
}

fn is_constant(y: &[f64]) -> bool {
    y.iter().all(|v| *v == y[0])
}

/// `Δy_t = c + φ y_{t-1} + Σ_{i=1..p} γ_i Δy_{t-i}` over `t in first..n`.
fn adf_regression(y: &[f64], p: usize, first: usize) -> Result<OlsStats> {
    let n = y.len();
    let rows = n - first;
    let x = DMatrix::from_fn(rows, 2 + p, |r, j| {
        let t = first + r;
        match j {
            0 => 1.0,
            1 => y[t - 1],
            _ => y[t - j + 1] - y[t - j],
        }
    });
    let dy = DVector::from_fn(rows, |r, _| y[first + r] - y[first + r - 1]);
    ols_with_stats(&x, &dy)
}

/// ADF test with intercept; the lag order is picked by AIC on a common
/// sample and the chosen model is refit on its full sample.
pub fn adf_test(y: &[f64], max_lag: usize) -> Result<AdfResult> {
    let n = y.len();
    if n < 20 {
        return Err(Error::SeriesTooShort { required: 20, actual: n });
    }
    if is_constant(y) {
        return Err(Error::ConstantSeries);
    }
    let max_lag = max_lag.min((n - 6) / 2);
    let mut best: Option<(f64, usize)> = None;
    for p in 0..=max_lag {
        if let Ok(fit) = adf_regression(y, p, max_lag + 1) {
            let aic = fit.aic();
            if aic.is_finite() && best.is_none_or(|(b, _)| aic < b) {
                best = Some((aic, p));
            }
        }
    }
    let (_, lags) = best.ok_or_else(|| Error::NumericalFailure("no feasible ADF regression".into()))?;
    let fit = adf_regression(y, lags, lags + 1)?;
    let stat = fit.t_stat(1);
    if !stat.is_finite() {
        return Err(Error::NumericalFailure("degenerate ADF statistic".into()));
    }
    let crit = interpolate_crit(&ADF_CRIT_5PCT, n);
    Ok(AdfResult { stationary: stat < crit, stat, crit_5pct: crit, lags, nobs: fit.nobs })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OcsbResult {
    pub seasonal_unit_root: bool,
    pub stat: f64,
    pub crit_5pct: f64,
    pub lags: usize,
}

impl OcsbResult {
    /// Seasonal differencing order implied by the test.
    pub fn seasonal_d(&self) -> u8 {
        u8::from(self.seasonal_unit_root)
    }
}

/// `Δ₁Δ₁₂y_t = Σ a_i Δ₁Δ₁₂y_{t-i} + β₁ Δ₁₂y_{t-1} + β₂ Δ₁y_{t-12} + ε` over `t in first..n`.
/// Regressor order: lags, then β₁, then β₂.
fn ocsb_regression(y: &[f64], p: usize, first: usize) -> Result<OlsStats> {
    let m = FREQ;
    let w = |t: usize| (y[t] - y[t - m]) - (y[t - 1] - y[t - m - 1]);
    let rows = y.len() - first;
    let x = DMatrix::from_fn(rows, p + 2, |r, j| {
        let t = first + r;
        if j < p {
            w(t - j - 1)
        } else if j == p {
            y[t - 1] - y[t - 1 - m]
        } else {
            y[t - m] - y[t - m - 1]
        }
    });
    let lhs = DVector::from_fn(rows, |r, _| w(first + r));
    ols_with_stats(&x, &lhs)
}

/// OCSB test for a seasonal unit root at period 12 (no deterministic terms,
/// AR augmentation chosen by AIC up to [`OCSB_MAX_LAG`]).
pub fn ocsb_test(y: &[f64]) -> Result<OcsbResult> {
    let n = y.len();
    if n < 3 * FREQ {
        return Err(Error::SeriesTooShort { required: 3 * FREQ, actual: n });
    }
    if is_constant(y) {
        return Err(Error::ConstantSeries);
    }
    let base = FREQ + 1;
    let mut best: Option<(f64, usize)> = None;
    for p in 0..=OCSB_MAX_LAG {
        if let Ok(fit) = ocsb_regression(y, p, base + OCSB_MAX_LAG) {
            let aic = fit.aic();
            if aic.is_finite() && best.is_none_or(|(b, _)| aic < b) {
                best = Some((aic, p));
            }
        }
    }
    let (_, lags) = best.ok_or_else(|| Error::NumericalFailure("no feasible OCSB regression".into()))?;
    let fit = ocsb_regression(y, lags, base + lags)?;
    let stat = fit.t_stat(lags + 1);
    if !stat.is_finite() {
        return Err(Error::NumericalFailure("degenerate OCSB statistic".into()));
    }
    let crit = interpolate_crit(&OCSB_CRIT_5PCT, n);
    Ok(OcsbResult { seasonal_unit_root: stat >= crit, stat, crit_5pct: crit, lags })
}

/// Dickey–Fuller t-statistics (constant, no augmentation) for `reps`
/// Gaussian random walks of length `n`.
pub fn simulate_adf_null<R: Rng + ?Sized>(n: usize, reps: usize, rng: &mut R) -> Vec<f64> {
    let mut y = alloc::vec![0.0; n];
    (0..reps)
        .map(|_| {
            for t in 1..n {
                y[t] = y[t - 1] + rng.sample::<f64, _>(StandardNormal);
            }
            df_statistic(&y)
        })
        .collect()
}

/// Closed-form two-regressor DF t-statistic.
fn df_statistic(y: &[f64]) -> f64 {
    let m = (y.len() - 1) as f64;
    let (mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0);
    for t in 1..y.len() {
        let (x, d) = (y[t - 1], y[t] - y[t - 1]);
        sx += x;
        sy += d;
        sxx += x * x;
        sxy += x * d;
    }
    let sxx_c = sxx - sx * sx / m;
    let phi = (sxy - sx * sy / m) / sxx_c;
    let c = (sy - phi * sx) / m;
    let mut ssr = 0.0;
    for t in 1..y.len() {
        let e = (y[t] - y[t - 1]) - c - phi * y[t - 1];
        ssr += e * e;
    }
    let sigma2 = ssr / (m - 2.0);
    phi / libm::sqrt(sigma2 / sxx_c)
}

/// OCSB t-statistics (no augmentation) for `reps` series of length `n`
/// generated under the null `(1-B)(1-B¹²) y = ε`.
pub fn simulate_ocsb_null<R: Rng + ?Sized>(n: usize, reps: usize, rng: &mut R) -> Vec<f64> {
    let m = FREQ;
    let mut y = alloc::vec![0.0; n];
    (0..reps)
        .map(|_| {
            for t in 0..n {
                let e: f64 = rng.sample(StandardNormal);
                let prev = if t >= 1 { y[t - 1] } else { 0.0 };
                let seas = if t >= m { y[t - m] } else { 0.0 };
                let both = if t > m { y[t - m - 1] } else { 0.0 };
                y[t] = prev + seas - both + e;
            }
            ocsb_statistic_no_lags(&y)
        })
        .collect()
}

fn ocsb_statistic_no_lags(y: &[f64]) -> f64 {
    let m = FREQ;
    // 2x2 normal equations for the two OCSB regressors
    let (mut s11, mut s12, mut s22, mut s1y, mut s2y, mut syy) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    let rows = y.len() - m - 1;
    for t in m + 1..y.len() {
        let w = (y[t] - y[t - m]) - (y[t - 1] - y[t - m - 1]);
        let a = y[t - 1] - y[t - 1 - m];
        let b = y[t - m] - y[t - m - 1];
        s11 += a * a;
        s12 += a * b;
        s22 += b * b;
        s1y += a * w;
        s2y += b * w;
        syy += w * w;
    }
    let det = s11 * s22 - s12 * s12;
    let b1 = (s22 * s1y - s12 * s2y) / det;
    let b2 = (s11 * s2y - s12 * s1y) / det;
    let ssr = syy - b1 * s1y - b2 * s2y;
    let sigma2 = ssr / (rows as f64 - 2.0);
    b2 / libm::sqrt(sigma2 * s11 / det)
}

/// Empirical lower-tail quantile.
pub fn lower_quantile(mut stats: Vec<f64>, level: f64) -> f64 {
    stats.retain(|s| s.is_finite());
    let k = ((stats.len() as f64) * level) as usize;
    let k = k.min(stats.len() - 1);
    let (_, v, _) = stats.select_nth_unstable_by(k, f64::total_cmp);
    *v
}
