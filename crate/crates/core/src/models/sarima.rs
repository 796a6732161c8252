//! Seasonal ARIMA by conditional sum of squares, plus regression with
//! SARIMA errors.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::lstsq_min_norm;
use crate::optim::{minimize, NelderMeadOptions};
use crate::preprocess::DifferencingSpec;
use crate::series::FREQ;

/// ARMA part of a seasonal model: AR, MA, seasonal AR and seasonal MA terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ArmaOrders {
    pub p: u8,
    pub q: u8,
    pub sp: u8,
    pub sq: u8,
}

impl ArmaOrders {
    pub const fn new(p: u8, q: u8, sp: u8, sq: u8) -> Self {
        Self { p, q, sp, sq }
    }

    pub fn param_count(&self) -> usize {
        (self.p + self.q + self.sp + self.sq) as usize
    }

    /// Shortest differenced series the estimator accepts.
    pub fn min_length(&self) -> usize {
        let span = self.p as usize + self.q as usize + FREQ * (self.sp as usize + self.sq as usize);
        3 * span + 20
    }

    fn ar_span(&self) -> usize {
        self.p as usize + FREQ * self.sp as usize
    }
}

/// Full (p,d,q)(P,D,Q)_12 specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SarimaOrders {
    pub arma: ArmaOrders,
    pub diff: DifferencingSpec,
}

/// Estimated ARMA with an optional mean on an already stationary series.
#[derive(Debug, Clone, PartialEq)]
pub struct CssFit {
    pub orders: ArmaOrders,
    pub ar: Vec<f64>,
    pub sar: Vec<f64>,
    pub ma: Vec<f64>,
    pub sma: Vec<f64>,
    pub mean: f64,
    /// Conditional sum of squares at the estimate.
    pub css: f64,
    /// Best objective value (CSS per observation) after each optimizer iteration.
    pub trace: Vec<f64>,
    next: f64,
}

impl CssFit {
    /// One-step prediction for the position right after the fitted series.
    pub fn next_value(&self) -> f64 {
        self.next
    }
}

/// Coefficients of the multiplied-out AR and MA lag polynomials, written as
/// x_t = Σ a_k x_{t-k} + e_t + Σ b_k e_{t-k}.
fn expand(ar: &[f64], sar: &[f64], ma: &[f64], sma: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let mut a = vec![0.0; ar.len() + FREQ * sar.len() + 1];
    for (i, &phi) in ar.iter().enumerate() {
        a[i + 1] += phi;
    }
    for (j, &big) in sar.iter().enumerate() {
        a[FREQ * (j + 1)] += big;
        for (i, &phi) in ar.iter().enumerate() {
            a[i + 1 + FREQ * (j + 1)] -= phi * big;
        }
    }
    let mut b = vec![0.0; ma.len() + FREQ * sma.len() + 1];
    for (i, &th) in ma.iter().enumerate() {
        b[i + 1] += th;
    }
    for (j, &big) in sma.iter().enumerate() {
        b[FREQ * (j + 1)] += big;
        for (i, &th) in ma.iter().enumerate() {
            b[i + 1 + FREQ * (j + 1)] += th * big;
        }
    }
    (a, b)
}

/// Whether 1 − Σ c_k z^k has all roots outside the unit circle, by
/// stepping the Durbin–Levinson recursion backwards.
pub fn is_stationary(coefs: &[f64]) -> bool {
    let mut c = coefs.to_vec();
    while let Some(&last) = c.last() {
        if last == 0.0 {
            c.pop();
        } else {
            break;
        }
    }
    for k in (1..=c.len()).rev() {
        let kappa = c[k - 1];
        if !(kappa.abs() < 1.0 - 1e-7) {
            return false;
        }
        let denom = 1.0 - kappa * kappa;
        let prev: Vec<f64> = (0..k - 1).map(|j| (c[j] + kappa * c[k - 2 - j]) / denom).collect();
        c = prev;
    }
    true
}

/// Innovations given polynomial coefficients; returns (sum of squares over
/// the conditioning-free part, one-step prediction of the next value).
fn innovations(x: &[f64], a: &[f64], b: &[f64], start: usize) -> (f64, f64) {
    let n = x.len();
    let mut e = vec![0.0; n];
    let mut ss = 0.0;
    let predict = |t: usize, e: &[f64]| {
        let mut v = 0.0;
        for k in 1..a.len().min(t + 1) {
            v += a[k] * x[t - k];
        }
        for k in 1..b.len().min(t + 1) {
            v += b[k] * e[t - k];
        }
        v
    };
    for t in start..n {
        e[t] = x[t] - predict(t, &e);
        ss += e[t] * e[t];
    }
    (ss, predict(n, &e))
}

struct Layout {
    orders: ArmaOrders,
}

impl Layout {
    fn split<'a>(&self, v: &'a [f64]) -> (&'a [f64], &'a [f64], &'a [f64], &'a [f64], Option<f64>) {
        let o = self.orders;
        let (ar, rest) = v.split_at(o.p as usize);
        let (sar, rest) = rest.split_at(o.sp as usize);
        let (ma, rest) = rest.split_at(o.q as usize);
        let (sma, rest) = rest.split_at(o.sq as usize);
        (ar, sar, ma, sma, rest.first().copied())
    }
}

/// CSS estimation of an ARMA with optional mean on `w`.
pub fn fit_css(w: &[f64], orders: ArmaOrders, with_mean: bool) -> Result<CssFit> {
    if w.len() < orders.min_length() {
        return Err(Error::SeriesTooShort { required: orders.min_length(), actual: w.len() });
    }
    let n = w.len() as f64;
    let center = w.iter().sum::<f64>() / n;
    let spread = libm::sqrt(w.iter().map(|v| (v - center) * (v - center)).sum::<f64>() / n).max(1e-12);

    if orders.param_count() == 0 {
        let mean = if with_mean { center } else { 0.0 };
        let css: f64 = w.iter().map(|v| (v - mean) * (v - mean)).sum();
        return Ok(CssFit {
            orders,
            ar: Vec::new(),
            sar: Vec::new(),
            ma: Vec::new(),
            sma: Vec::new(),
            mean,
            css,
            trace: vec![css / n],
            next: mean,
        });
    }

    let layout = Layout { orders };
    let start = orders.ar_span();
    let eff = (w.len() - start) as f64;
    let mut centred = vec![0.0; w.len()];
    // mean is parameterized as center + spread·u so every coordinate is O(1)
    let objective = |v: &[f64], centred: &mut Vec<f64>| -> f64 {
        let (ar, sar, ma, sma, u) = layout.split(v);
        if !is_stationary(ar) || !is_stationary(sar) {
            return f64::INFINITY;
        }
        let neg = |c: &[f64]| c.iter().map(|x| -x).collect::<Vec<f64>>();
        if !is_stationary(&neg(ma)) || !is_stationary(&neg(sma)) {
            return f64::INFINITY;
        }
        let mean = u.map_or(0.0, |u| center + spread * u);
        for (c, x) in centred.iter_mut().zip(w) {
            *c = x - mean;
        }
        let (a, b) = expand(ar, sar, ma, sma);
        innovations(centred, &a, &b, start).0 / eff
    };
    let dim = orders.param_count() + usize::from(with_mean);
    let x0 = vec![0.0; dim];
    let opts = NelderMeadOptions { initial_step: 0.1, max_evals: 150 * (dim + 1), f_tol: 1e-9, x_tol: 1e-6 };
    let found = minimize(|v| objective(v, &mut centred), &x0, opts);
    if !found.value.is_finite() {
        return Err(Error::NumericalFailure("CSS objective is not finite at any simplex vertex".into()));
    }
    let (ar, sar, ma, sma, u) = layout.split(&found.x);
    let mean = u.map_or(0.0, |u| center + spread * u);
    let centred: Vec<f64> = w.iter().map(|x| x - mean).collect();
    let (a, b) = expand(ar, sar, ma, sma);
    let (css, next) = innovations(&centred, &a, &b, start);
    let next = next + mean;
    if !next.is_finite() {
        return Err(Error::NumericalFailure("non-finite SARIMA forecast".into()));
    }
    Ok(CssFit {
        orders,
        ar: ar.to_vec(),
        sar: sar.to_vec(),
        ma: ma.to_vec(),
        sma: sma.to_vec(),
        mean,
        css,
        trace: found.trace,
        next,
    })
}

/// Constant term is estimated when at most one difference is taken.
fn wants_mean(diff: DifferencingSpec) -> bool {
    diff.d() + diff.seasonal() <= 1
}

#[derive(Debug, Clone, PartialEq)]
pub struct SarimaFit {
    pub orders: SarimaOrders,
    pub arma: CssFit,
    forecast: f64,
}

impl SarimaFit {
    /// Integrated forecast floored at 0.
    pub fn forecast(&self) -> f64 {
        self.forecast
    }
}

pub fn sarima_fit(y: &[f64], orders: SarimaOrders) -> Result<SarimaFit> {
    let w = orders.diff.apply(y)?.values;
    let arma = fit_css(&w, orders.arma, wants_mean(orders.diff))?;
    let forecast = orders.diff.undo_next(y, arma.next_value()).max(0.0);
    Ok(SarimaFit { orders, arma, forecast })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SarimaxFit {
    pub orders: SarimaOrders,
    /// Regression weights on the differenced exogenous columns.
    pub coef: Vec<f64>,
    pub arma: CssFit,
    forecast: f64,
}

impl SarimaxFit {
    pub fn forecast(&self) -> f64 {
        self.forecast
    }
}

/// `exog` columns must cover the training span and the forecast month,
/// i.e. have at least `y.len() + 1` values.
pub fn sarimax_fit(y: &[f64], exog: &[Vec<f64>], orders: SarimaOrders) -> Result<SarimaxFit> {
    let n = y.len();
    if exog.iter().any(|c| c.len() <= n) {
        return Err(Error::MissingExogForecastRow);
    }
    let w = orders.diff.apply(y)?.values;
    let lost = orders.diff.lost();
    let xd: Vec<Vec<f64>> = exog.iter().map(|c| orders.diff.apply(&c[..=n]).map(|d| d.values)).collect::<Result<_>>()?;
    let rows = w.len();
    let with_mean = wants_mean(orders.diff);
    // with a mean term the weights come from demeaned data, leaving the level to the ARMA mean
    let centre = |v: &[f64]| if with_mean { v.iter().sum::<f64>() / v.len() as f64 } else { 0.0 };
    let coef: Vec<f64> = if xd.is_empty() {
        Vec::new()
    } else {
        let means: Vec<f64> = xd.iter().map(|c| centre(&c[..rows])).collect();
        let x = DMatrix::from_fn(rows, xd.len(), |i, j| xd[j][i] - means[j]);
        let wm = centre(&w);
        let (beta, _) = lstsq_min_norm(&x, &DVector::from_iterator(rows, w.iter().map(|v| v - wm)))?;
        beta.iter().copied().collect()
    };
    let regress = |i: usize| coef.iter().zip(&xd).map(|(b, c)| b * c[i]).sum::<f64>();
    let resid: Vec<f64> = (0..rows).map(|i| w[i] - regress(i)).collect();
    let arma = fit_css(&resid, orders.arma, with_mean)?;
    debug_assert_eq!(rows + lost, n);
    let w_next = regress(rows) + arma.next_value();
    let forecast = orders.diff.undo_next(y, w_next).max(0.0);
    if !forecast.is_finite() {
        return Err(Error::NumericalFailure("non-finite SARIMAX forecast".into()));
    }
    Ok(SarimaxFit { orders, coef, arma, forecast })
}
