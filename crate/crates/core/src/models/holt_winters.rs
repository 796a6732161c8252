//! Additive Holt–Winters with smoothing constants fit by in-sample SSE.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::optim::{minimize, NelderMeadOptions};
use crate::series::FREQ;

#[derive(Debug, Clone, PartialEq)]
pub struct HoltWintersFit {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub sse: f64,
    level: f64,
    trend: f64,
    /// Seasonal states for the next 12 positions, first entry = forecast month.
    season: [f64; FREQ],
}

impl HoltWintersFit {
    pub fn forecast(&self) -> f64 {
        self.level + self.trend + self.season[0]
    }
}

/// Level, trend and seasonal states at time −1 from the first two seasons.
fn initial_state(y: &[f64]) -> (f64, f64, [f64; FREQ]) {
    let m = FREQ as f64;
    let mean1 = y[..FREQ].iter().sum::<f64>() / m;
    let mean2 = y[FREQ..2 * FREQ].iter().sum::<f64>() / m;
    let trend = (mean2 - mean1) / m;
    // mean1 sits at the centre of the first season, position (m-1)/2
    let level = mean1 - trend * (m + 1.0) / 2.0;
    let mut season = [0.0; FREQ];
    for (i, s) in season.iter_mut().enumerate() {
        let a = y[i] - (level + trend * (i as f64 + 1.0));
        let b = y[i + FREQ] - (level + trend * ((i + FREQ) as f64 + 1.0));
        *s = (a + b) / 2.0;
    }
    let mean_s = season.iter().sum::<f64>() / m;
    season.iter_mut().for_each(|s| *s -= mean_s);
    (level, trend, season)
}

/// Runs the recursions; returns SSE of one-step errors and the final state.
pub fn run_recursions(y: &[f64], alpha: f64, beta: f64, gamma: f64) -> (f64, f64, f64, [f64; FREQ]) {
    let (mut level, mut trend, init) = initial_state(y);
    let mut season: Vec<f64> = Vec::with_capacity(y.len() + FREQ);
    season.extend_from_slice(&init);
    let mut sse = 0.0;
    for (t, &obs) in y.iter().enumerate() {
        let s_prev = season[t];
        let fitted = level + trend + s_prev;
        let err = obs - fitted;
        sse += err * err;
        let new_level = alpha * (obs - s_prev) + (1.0 - alpha) * (level + trend);
        season.push(gamma * (obs - level - trend) + (1.0 - gamma) * s_prev);
        trend = beta * (new_level - level) + (1.0 - beta) * trend;
        level = new_level;
    }
    let mut tail = [0.0; FREQ];
    tail.copy_from_slice(&season[y.len()..y.len() + FREQ]);
    (sse, level, trend, tail)
}

fn squash(u: f64) -> f64 {
    1.0 / (1.0 + libm::exp(-u))
}

fn unsquash(p: f64) -> f64 {
    libm::log(p / (1.0 - p))
}

pub fn holt_winters_fit(y: &[f64]) -> Result<HoltWintersFit> {
    if y.len() < 2 * FREQ {
        return Err(Error::SeriesTooShort { required: 2 * FREQ, actual: y.len() });
    }
    let sse_at = |a: f64, b: f64, g: f64| run_recursions(y, a, b, g).0;

    let coarse = [0.1, 0.3, 0.5, 0.7, 0.9];
    let mut start = (f64::INFINITY, [0.3, 0.1, 0.1]);
    for &a in &coarse {
        for &b in &coarse[..3] {
            for &g in &coarse[..3] {
                let s = sse_at(a, b, g);
                if s < start.0 {
                    start = (s, [a, b, g]);
                }
            }
        }
    }
    let x0 = vec![unsquash(start.1[0]), unsquash(start.1[1]), unsquash(start.1[2])];
    let opts = NelderMeadOptions { initial_step: 0.5, max_evals: 600, f_tol: 1e-10, x_tol: 1e-6 };
    let found = minimize(|u| sse_at(squash(u[0]), squash(u[1]), squash(u[2])), &x0, opts);
    let (u, sse) = if found.value <= start.0 { (found.x, found.value) } else { (x0, start.0) };
    let (alpha, beta, gamma) = (squash(u[0]), squash(u[1]), squash(u[2]));
    let (sse_final, level, trend, season) = run_recursions(y, alpha, beta, gamma);
    if !sse_final.is_finite() || !level.is_finite() {
        return Err(Error::NumericalFailure("Holt-Winters recursion diverged".into()));
    }
    debug_assert!((sse_final - sse).abs() <= 1e-9 * (1.0 + sse.abs()));
    Ok(HoltWintersFit { alpha, beta, gamma, sse: sse_final, level, trend, season })
}
