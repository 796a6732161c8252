//! Mutual-information feature ranking (mRMR) and the profit-driven prefix wrapper.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::metrics::{expected_profit, ProfitParams};
use crate::models::{fit, ForecasterSpec, TrainWindow};
use crate::series::{Dataset, ExogenousTable, TimeSeries};

pub const MIN_MI_LENGTH: usize = 20;
pub const MAX_BINS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MiEstimate {
    /// Nats, bias-corrected and clamped at zero.
    pub value: f64,
    pub bins: usize,
}

pub fn bin_count(n: usize) -> usize {
    (libm::sqrt(n as f64) as usize).clamp(1, MAX_BINS)
}

/// Equal-frequency bin of each value: ⌊B · #(values < x) / n⌋, so tied values share a bin.
pub fn discretize(x: &[f64], bins: usize) -> Vec<usize> {
    let n = x.len();
    let mut sorted = x.to_vec();
    sorted.sort_by(f64::total_cmp);
    x.iter()
        .map(|v| {
            let below = sorted.partition_point(|s| s < v);
            (bins * below / n).min(bins - 1)
        })
        .collect()
}

fn entropy_terms(counts: &[usize], n: f64) -> (f64, usize) {
    counts.iter().filter(|&&c| c > 0).fold((0.0, 0), |(h, k), &c| {
        let p = c as f64 / n;
        (h - p * libm::log(p), k + 1)
    })
}

/// MI between two discretized columns with the Miller–Madow bias correction.
pub fn mi_from_bins(a: &[usize], b: &[usize], bins: usize) -> f64 {
    let n = a.len() as f64;
    let mut joint = vec![0usize; bins * bins];
    let mut ca = vec![0usize; bins];
    let mut cb = vec![0usize; bins];
    for (&i, &j) in a.iter().zip(b) {
        joint[i * bins + j] += 1;
        ca[i] += 1;
        cb[j] += 1;
    }
    let (ha, ka) = entropy_terms(&ca, n);
    let (hb, kb) = entropy_terms(&cb, n);
    let (hab, kab) = entropy_terms(&joint, n);
    let plug_in = ha + hb - hab;
    let correction = (kab as f64 - ka as f64 - kb as f64 + 1.0) / (2.0 * n);
    (plug_in - correction).max(0.0)
}

pub fn mutual_information(x: &[f64], y: &[f64]) -> Result<MiEstimate> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < MIN_MI_LENGTH {
        return Err(Error::TooShort { required: MIN_MI_LENGTH, actual: x.len() });
    }
    let bins = bin_count(x.len());
    let value = mi_from_bins(&discretize(x, bins), &discretize(y, bins), bins);
    Ok(MiEstimate { value, bins })
}

/// Bias-corrected entropy of a discretized column; equals its MI with itself.
pub fn binned_entropy(x: &[f64]) -> f64 {
    let bins = bin_count(x.len());
    let d = discretize(x, bins);
    let mut counts = vec![0usize; bins];
    d.iter().for_each(|&b| counts[b] += 1);
    let (h, k) = entropy_terms(&counts, x.len() as f64);
    h + (k as f64 - 1.0) / (2.0 * x.len() as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRanking {
    /// Selected names in greedy order.
    pub names: Vec<String>,
    /// Relevance minus mean redundancy at the step each name was picked.
    pub scores: Vec<f64>,
}

impl FeatureRanking {
    pub fn k(&self) -> usize {
        self.names.len()
    }

    pub fn prefix(&self, i: usize) -> &[String] {
        &self.names[..i]
    }
}

/// Ranking prefix size: 10 for pools of at most 12 candidates, otherwise 15,
/// never more than the pool.
pub fn default_k(pool: usize) -> usize {
    let k = if pool <= 12 { 10 } else { 15 };
    k.min(pool)
}

/// Greedy mRMR over named columns. Ties go to the lowest column index.
pub fn mrmr_rank_columns(names: &[String], columns: &[&[f64]], target: &[f64], k: usize) -> Result<FeatureRanking> {
    if names.len() != columns.len() {
        return Err(Error::LengthMismatch(names.len(), columns.len()));
    }
    if k > columns.len() {
        return Err(Error::TooFewFeatures { requested: k, available: columns.len() });
    }
    if let Some(c) = columns.iter().find(|c| c.len() != target.len()) {
        return Err(Error::LengthMismatch(c.len(), target.len()));
    }
    if target.len() < MIN_MI_LENGTH {
        return Err(Error::TooShort { required: MIN_MI_LENGTH, actual: target.len() });
    }
    let bins = bin_count(target.len());
    let disc: Vec<Vec<usize>> = columns.iter().map(|c| discretize(c, bins)).collect();
    let tdisc = discretize(target, bins);
    let relevance: Vec<f64> = disc.iter().map(|d| mi_from_bins(d, &tdisc, bins)).collect();
    let mut redundancy_sum = vec![0.0; columns.len()];
    let mut chosen = vec![false; columns.len()];
    let mut out = FeatureRanking { names: Vec::with_capacity(k), scores: Vec::with_capacity(k) };
    for step in 0..k {
        let mut best: Option<(f64, usize)> = None;
        for i in (0..columns.len()).filter(|&i| !chosen[i]) {
            let score = if step == 0 { relevance[i] } else { relevance[i] - redundancy_sum[i] / step as f64 };
            if best.is_none_or(|(b, _)| score > b) {
                best = Some((score, i));
            }
        }
        let (score, pick) = best.expect("k ≤ number of columns");
        chosen[pick] = true;
        out.names.push(names[pick].clone());
        out.scores.push(score);
        for i in (0..columns.len()).filter(|&i| !chosen[i]) {
            redundancy_sum[i] += mi_from_bins(&disc[i], &disc[pick], bins);
        }
    }
    Ok(out)
}

/// Ranks every column of `exog` against `target` over their common length.
pub fn mrmr_rank(exog: &ExogenousTable, target: &TimeSeries, k: usize) -> Result<FeatureRanking> {
    let n = target.len().min(exog.rows());
    let names: Vec<String> = exog.names().map(String::from).collect();
    let cols: Vec<&[f64]> = exog.columns().iter().map(|c| &c.values[..n]).collect();
    mrmr_rank_columns(&names, &cols, &target.values()[..n], k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WrapperResult {
    /// Chosen prefix size i*.
    pub best: usize,
    pub features: Vec<String>,
    /// Total validation profit per prefix size 1..=k; −∞ marks a failed prefix.
    pub profits: Vec<f64>,
    /// Per-step validation profits for each prefix (empty when it failed).
    pub step_profits: Vec<Vec<f64>>,
}

/// Evaluates every ranking prefix with `evaluate` (which returns per-step
/// profits) and keeps the most profitable; ties go to the smaller prefix.
pub fn wrapper_select_with<F>(ranking: &FeatureRanking, mut evaluate: F) -> Result<WrapperResult>
where
    F: FnMut(&[String]) -> Result<Vec<f64>>,
{
    if ranking.k() == 0 {
        return Err(Error::EmptySet);
    }
    let mut profits = Vec::with_capacity(ranking.k());
    let mut step_profits = Vec::with_capacity(ranking.k());
    for i in 1..=ranking.k() {
        match evaluate(ranking.prefix(i)) {
            Ok(steps) if steps.iter().all(|p| p.is_finite()) => {
                profits.push(steps.iter().sum());
                step_profits.push(steps);
            }
            _ => {
                profits.push(f64::NEG_INFINITY);
                step_profits.push(Vec::new());
            }
        }
    }
    let mut best: Option<usize> = None;
    for (i, p) in profits.iter().enumerate() {
        if p.is_finite() && best.is_none_or(|b| *p > profits[b]) {
            best = Some(i);
        }
    }
    let best = best.ok_or(Error::AllPrefixesFailed)? + 1;
    Ok(WrapperResult { best, features: ranking.prefix(best).to_vec(), profits, step_profits })
}

/// Sequential one-step validation: for each of `val_len` months starting at
/// `train_end`, fit on everything before it and score the forecast.
pub fn validation_profits(
    spec: &ForecasterSpec,
    dataset: &Dataset,
    train_end: usize,
    val_len: usize,
    features: &[String],
    params: &ProfitParams,
) -> Result<Vec<f64>> {
    let y = dataset.series().values();
    if train_end + val_len > y.len() {
        return Err(Error::SeriesTooShort { required: train_end + val_len, actual: y.len() });
    }
    (train_end..train_end + val_len)
        .map(|end| {
            let fitted = fit(spec, TrainWindow::new(dataset, end)?, features)?;
            expected_profit(y[end], fitted.forecast_one(), dataset.beta(), params)
        })
        .collect()
}

pub fn wrapper_select(
    ranking: &FeatureRanking,
    spec: &ForecasterSpec,
    dataset: &Dataset,
    train_end: usize,
    val_len: usize,
    params: &ProfitParams,
) -> Result<WrapperResult> {
    wrapper_select_with(ranking, |feats| validation_profits(spec, dataset, train_end, val_len, feats, params))
}
