use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::series::YearMonth;

pub const MAX_LAGS: usize = 7;
pub const DUMMY_COLUMNS: usize = 11;
const MONTH_NAMES: [&str; 11] = ["jan", "feb", "mar", "apr", "may", "jun", "jul", "aug", "sep", "oct", "nov"];

/// Month-of-year indicators with December as the reference level.
pub fn dummy_row(month: YearMonth) -> [f64; DUMMY_COLUMNS] {
    let mut row = [0.0; DUMMY_COLUMNS];
    let m = month.month() as usize;
    if m < 12 {
        row[m - 1] = 1.0;
    }
    row
}

/// Dummy rows for `len` consecutive months starting at `start`.
pub fn seasonal_dummies(start: YearMonth, len: usize) -> Vec<[f64; DUMMY_COLUMNS]> {
    (0..len).map(|k| dummy_row(start.add_months(k as i64))).collect()
}

/// Supervised design matrix built from lagged targets.
///
/// Column order is `lag1..lagL`, then exogenous columns (contemporaneous),
/// then the 11 dummies when requested.
#[derive(Debug, Clone, PartialEq)]
pub struct LagMatrix {
    pub names: Vec<String>,
    /// Row-major, `rows * names.len()` entries.
    pub features: Vec<f64>,
    pub target: Vec<f64>,
    /// Position in the source series of each row's target.
    pub target_index: Vec<usize>,
    pub lags: usize,
}

impl LagMatrix {
    pub fn rows(&self) -> usize {
        self.target.len()
    }

    pub fn cols(&self) -> usize {
        self.names.len()
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let c = self.cols();
        &self.features[i * c..(i + 1) * c]
    }

    /// Builds a matrix directly from rows; used by models and tests that do
    /// not go through [`lag_embed`].
    pub fn from_rows(rows: &[Vec<f64>], target: Vec<f64>) -> Result<Self> {
        if rows.len() != target.len() {
            return Err(Error::LengthMismatch(rows.len(), target.len()));
        }
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidParameter("ragged design rows".into()));
        }
        Ok(Self {
            names: (0..cols).map(|j| format!("x{}", j + 1)).collect(),
            features: rows.iter().flatten().copied().collect(),
            target_index: (0..target.len()).collect(),
            target,
            lags: 0,
        })
    }
}

/// Exogenous inputs for [`lag_embed`]: named columns aligned with `y`.
#[derive(Debug, Clone, Copy)]
pub struct ExogInput<'a> {
    pub names: &'a [String],
    pub columns: &'a [Vec<f64>],
}

/// Embeds `y` with `lags` past values per row. `dummies_start` is the month
/// of `y[0]` when seasonal dummies are wanted.
pub fn lag_embed(y: &[f64], exog: Option<ExogInput<'_>>, lags: usize, dummies_start: Option<YearMonth>) -> Result<LagMatrix> {
    if !(1..=MAX_LAGS).contains(&lags) {
        return Err(Error::InvalidParameter(format!("lag order {lags} outside 1..={MAX_LAGS}")));
    }
    if y.len() <= lags {
        return Err(Error::SeriesTooShort { required: lags + 1, actual: y.len() });
    }
    if let Some(x) = exog {
        if x.names.len() != x.columns.len() {
            return Err(Error::LengthMismatch(x.names.len(), x.columns.len()));
        }
        if let Some(c) = x.columns.iter().find(|c| c.len() < y.len()) {
            return Err(Error::LengthMismatch(y.len(), c.len()));
        }
    }
    let mut names: Vec<String> = (1..=lags).map(|l| format!("lag{l}")).collect();
    if let Some(x) = exog {
        names.extend(x.names.iter().cloned());
    }
    if dummies_start.is_some() {
        names.extend(MONTH_NAMES.iter().map(|m| String::from(*m)));
    }
    let rows = y.len() - lags;
    let mut features = Vec::with_capacity(rows * names.len());
    for t in lags..y.len() {
        features.extend_from_slice(&design_row(y, t, exog, lags, dummies_start));
    }
    Ok(LagMatrix {
        names,
        features,
        target: y[lags..].to_vec(),
        target_index: (lags..y.len()).collect(),
        lags,
    })
}

/// Predictor row for position `t` (which may equal `y.len()` for the
/// forecast row, provided the exogenous columns reach that far).
pub fn design_row(y: &[f64], t: usize, exog: Option<ExogInput<'_>>, lags: usize, dummies_start: Option<YearMonth>) -> Vec<f64> {
    let mut row: Vec<f64> = (1..=lags).map(|l| y[t - l]).collect();
    if let Some(x) = exog {
        row.extend(x.columns.iter().map(|c| c[t]));
    }
    if let Some(start) = dummies_start {
        row.extend_from_slice(&dummy_row(start.add_months(t as i64)));
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn ym(y: i32, m: u8) -> YearMonth {
        YearMonth::new(y, m).unwrap()
    }

    #[test]
    fn dummies() {
        let jan = dummy_row(ym(2001, 1));
        assert_eq!(jan[0], 1.0);
        assert_eq!(jan.iter().sum::<f64>(), 1.0);
        assert!(dummy_row(ym(2001, 12)).iter().all(|v| *v == 0.0));
        let rows = seasonal_dummies(ym(2000, 5), 24);
        for j in 0..DUMMY_COLUMNS {
            assert_eq!(rows.iter().map(|r| r[j]).sum::<f64>(), 2.0);
        }
    }

    #[test]
    fn embed_example() {
        let m = lag_embed(&[1.0, 2.0, 3.0, 4.0], None, 2, None).unwrap();
        assert_eq!(m.rows(), 2);
        assert_eq!(m.row(0), &[2.0, 1.0]);
        assert_eq!(m.row(1), &[3.0, 2.0]);
        assert_eq!(m.target, vec![3.0, 4.0]);
    }

    #[test]
    fn embed_lengths() {
        let y: Vec<f64> = (0..8).map(|v| v as f64).collect();
        assert_eq!(lag_embed(&y, None, 7, None).unwrap().rows(), 1);
        assert_eq!(lag_embed(&y[..7], None, 7, None).unwrap_err(), Error::SeriesTooShort { required: 8, actual: 7 });
        assert!(lag_embed(&y, None, 8, None).is_err());
    }

    #[test]
    fn no_leakage_with_exog_and_dummies() {
        let y: Vec<f64> = (0..30).map(|v| v as f64).collect();
        let names = vec![String::from("temp")];
        let cols = vec![(0..31).map(|v| 1000.0 + v as f64).collect::<Vec<_>>()];
        let ex = ExogInput { names: &names, columns: &cols };
        let m = lag_embed(&y, Some(ex), 3, Some(ym(2000, 1))).unwrap();
        assert_eq!(m.cols(), 3 + 1 + 11);
        for i in 0..m.rows() {
            let t = m.target_index[i];
            let row = m.row(i);
            for l in 0..3 {
                // the series is its own index, so lag values identify their source month
                assert!(row[l] < t as f64);
            }
            assert_eq!(row[3], 1000.0 + t as f64);
        }
        let next = design_row(&y, 30, Some(ex), 3, Some(ym(2000, 1)));
        assert_eq!(&next[..4], &[29.0, 28.0, 27.0, 1030.0]);
    }
}
