//! Least-squares helpers on top of `nalgebra`.

use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Row-major dense matrix builder.
pub fn matrix_from_rows(rows: &[Vec<f64>], ncols: usize) -> DMatrix<f64> {
    DMatrix::from_fn(rows.len(), ncols, |i, j| rows[i][j])
}

/// Minimum-norm least-squares solution and numerical rank.
///
/// Singular values below `max(n, p) * eps * sigma_max` are treated as zero,
/// so exactly collinear columns share weight instead of blowing up.
pub fn lstsq_min_norm(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<(DVector<f64>, usize)> {
    if x.nrows() != y.len() {
        return Err(Error::LengthMismatch(x.nrows(), y.len()));
    }
    if x.ncols() == 0 {
        return Ok((DVector::zeros(0), 0));
    }
    let svd = x.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let tol = (x.nrows().max(x.ncols()) as f64) * f64::EPSILON * smax;
    let rank = svd.singular_values.iter().filter(|s| **s > tol).count();
    let beta = svd
        .solve(y, tol)
        .map_err(|e| Error::NumericalFailure(alloc::string::String::from(e)))?;
    if beta.iter().any(|b| !b.is_finite()) {
        return Err(Error::NumericalFailure("non-finite least-squares solution".into()));
    }
    Ok((beta, rank))
}

/// OLS fit with classical standard errors, used by the unit-root regressions.
#[derive(Debug, Clone)]
pub struct OlsStats {
    pub coef: DVector<f64>,
    pub se: DVector<f64>,
    pub ssr: f64,
    pub nobs: usize,
}

impl OlsStats {
    pub fn t_stat(&self, j: usize) -> f64 {
        self.coef[j] / self.se[j]
    }

    /// Gaussian AIC up to a constant: `n ln(SSR/n) + 2p`.
    pub fn aic(&self) -> f64 {
        let n = self.nobs as f64;
        n * libm::log(self.ssr / n) + 2.0 * self.coef.len() as f64
    }
}

pub fn ols_with_stats(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<OlsStats> {
    let (n, p) = (x.nrows(), x.ncols());
    if n <= p {
        return Err(Error::TooFewRows { required: p + 1, actual: n });
    }
    let xtx = x.transpose() * x;
    let inv = xtx
        .try_inverse()
        .ok_or_else(|| Error::NumericalFailure("singular regressor matrix".into()))?;
    let coef = &inv * (x.transpose() * y);
    let resid = y - x * &coef;
    let ssr = resid.dot(&resid);
    let sigma2 = ssr / (n - p) as f64;
    let se = DVector::from_fn(p, |j, _| libm::sqrt((sigma2 * inv[(j, j)]).max(0.0)));
    if coef.iter().chain(se.iter()).any(|v| !v.is_finite()) {
        return Err(Error::NumericalFailure("non-finite OLS statistics".into()));
    }
    Ok(OlsStats { coef, se, ssr, nobs: n })
}
