use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg::lstsq_min_norm;
use crate::preprocess::LagMatrix;

/// Linear regression with intercept; rank-deficient directions get zero weight.
#[derive(Debug, Clone, PartialEq)]
pub struct OlsModel {
    pub intercept: f64,
    pub coef: Vec<f64>,
    pub rank: usize,
}

impl OlsModel {
    pub fn predict(&self, row: &[f64]) -> f64 {
        self.intercept + self.coef.iter().zip(row).map(|(b, x)| b * x).sum::<f64>()
    }
}

pub fn ols_fit(m: &LagMatrix) -> Result<OlsModel> {
    let p = m.cols() + 1;
    if m.rows() <= p {
        return Err(Error::TooFewRows { required: p + 1, actual: m.rows() });
    }
    let x = DMatrix::from_fn(m.rows(), p, |i, j| if j == 0 { 1.0 } else { m.row(i)[j - 1] });
    let (beta, rank) = lstsq_min_norm(&x, &DVector::from_column_slice(&m.target))?;
    Ok(OlsModel { intercept: beta[0], coef: beta.iter().skip(1).copied().collect(), rank })
}
