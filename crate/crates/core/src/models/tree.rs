//! CART-style regression tree with variance-reduction splits.

use alloc::boxed::Box;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::preprocess::LagMatrix;

#[derive(Debug, Clone, PartialEq)]
pub enum RegressionTree {
    Leaf(f64),
    Split { feature: usize, threshold: f64, left: Box<RegressionTree>, right: Box<RegressionTree> },
}

impl RegressionTree {
    pub fn predict(&self, row: &[f64]) -> f64 {
        match self {
            RegressionTree::Leaf(v) => *v,
            RegressionTree::Split { feature, threshold, left, right } => {
                if row[*feature] <= *threshold { left.predict(row) } else { right.predict(row) }
            }
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            RegressionTree::Leaf(_) => 0,
            RegressionTree::Split { left, right, .. } => 1 + left.depth().max(right.depth()),
        }
    }
}

pub const DEFAULT_MAX_DEPTH: usize = 4;
pub const DEFAULT_MIN_LEAF: usize = 5;

pub fn tree_fit(m: &LagMatrix, max_depth: usize, min_leaf: usize) -> Result<RegressionTree> {
    let min_leaf = min_leaf.max(1);
    if m.rows() < 2 * min_leaf {
        return Err(Error::TooFewRows { required: 2 * min_leaf, actual: m.rows() });
    }
    let idx: Vec<usize> = (0..m.rows()).collect();
    Ok(grow(m, &idx, max_depth, min_leaf))
}

fn mean_of(m: &LagMatrix, idx: &[usize]) -> f64 {
    idx.iter().map(|&i| m.target[i]).sum::<f64>() / idx.len() as f64
}

/// Best split of `idx`: (sse, feature, threshold). Thresholds are midpoints
/// between consecutive distinct values; ties keep the earliest candidate.
pub fn best_split(m: &LagMatrix, idx: &[usize], min_leaf: usize) -> Option<(f64, usize, f64)> {
    let n = idx.len();
    let mut best: Option<(f64, usize, f64)> = None;
    let mut order: Vec<usize> = idx.to_vec();
    for f in 0..m.cols() {
        order.sort_by(|&a, &b| m.row(a)[f].total_cmp(&m.row(b)[f]).then(a.cmp(&b)));
        let total: f64 = order.iter().map(|&i| m.target[i]).sum();
        let total_sq: f64 = order.iter().map(|&i| m.target[i] * m.target[i]).sum();
        let (mut s, mut sq) = (0.0, 0.0);
        for pos in 0..n - 1 {
            let y = m.target[order[pos]];
            s += y;
            sq += y * y;
            let (lo, hi) = (m.row(order[pos])[f], m.row(order[pos + 1])[f]);
            let nl = pos + 1;
            if lo == hi || nl < min_leaf || n - nl < min_leaf {
                continue;
            }
            let nr = (n - nl) as f64;
            let sse = (sq - s * s / nl as f64) + ((total_sq - sq) - (total - s) * (total - s) / nr);
            let threshold = lo + (hi - lo) / 2.0;
            if best.is_none_or(|(b, _, _)| sse < b - 1e-12 * b.abs().max(1e-300)) {
                best = Some((sse, f, threshold));
            }
        }
    }
    best
}

fn grow(m: &LagMatrix, idx: &[usize], depth_left: usize, min_leaf: usize) -> RegressionTree {
    let mean = mean_of(m, idx);
    if depth_left == 0 || idx.len() < 2 * min_leaf {
        return RegressionTree::Leaf(mean);
    }
    let parent_sse: f64 = idx.iter().map(|&i| (m.target[i] - mean) * (m.target[i] - mean)).sum();
    match best_split(m, idx, min_leaf) {
        Some((sse, feature, threshold)) if sse < parent_sse => {
            let (l, r): (Vec<usize>, Vec<usize>) = idx.iter().partition(|&&i| m.row(i)[feature] <= threshold);
            RegressionTree::Split {
                feature,
                threshold,
                left: Box::new(grow(m, &l, depth_left - 1, min_leaf)),
                right: Box::new(grow(m, &r, depth_left - 1, min_leaf)),
            }
        }
        _ => RegressionTree::Leaf(mean),
    }
}
