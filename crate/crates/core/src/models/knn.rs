use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::preprocess::LagMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Weighting {
    Uniform,
    Distance,
}

impl Weighting {
    pub fn as_str(self) -> &'static str {
        match self {
            Weighting::Uniform => "uniform",
            Weighting::Distance => "distance",
        }
    }
}

impl fmt::Display for Weighting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Weighting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Weighting::Uniform),
            "distance" => Ok(Weighting::Distance),
            other => Err(Error::InvalidParameter(alloc::format!("unknown weighting {other:?}"))),
        }
    }
}

/// Prediction from the `k` nearest rows (Euclidean). Equal distances are
/// ordered by row index. With distance weighting, any zero-distance
/// neighbours take all the weight and their targets are averaged.
pub fn knn_forecast(m: &LagMatrix, query: &[f64], k: usize, weighting: Weighting) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if m.rows() < k {
        return Err(Error::TooFewRows { required: k, actual: m.rows() });
    }
    if query.len() != m.cols() {
        return Err(Error::LengthMismatch(query.len(), m.cols()));
    }
    let mut dist: Vec<(f64, usize)> = (0..m.rows())
        .map(|i| {
            let d2: f64 = m.row(i).iter().zip(query).map(|(a, b)| (a - b) * (a - b)).sum();
            (libm::sqrt(d2), i)
        })
        .collect();
    dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let nearest = &dist[..k];
    let mean = |it: &mut dyn Iterator<Item = f64>| {
        let (s, c) = it.fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
        s / c as f64
    };
    Ok(match weighting {
        Weighting::Uniform => mean(&mut nearest.iter().map(|&(_, i)| m.target[i])),
        Weighting::Distance if nearest[0].0 == 0.0 => {
            mean(&mut nearest.iter().filter(|(d, _)| *d == 0.0).map(|&(_, i)| m.target[i]))
        }
        Weighting::Distance => {
            let (num, den) = nearest.iter().fold((0.0, 0.0), |(n, w), &(d, i)| (n + m.target[i] / d, w + 1.0 / d));
            num / den
        }
    })
}
