use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Min/max of one column over its fitting window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColumnScaler {
    pub min: f64,
    pub max: f64,
}

impl ColumnScaler {
    pub fn fit(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::EmptySet);
        }
        let (min, max) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
        Ok(Self { min, max })
    }

    /// Maps the fit range onto [0, 1] without clamping. A constant column maps to 0.
    pub fn apply(&self, x: f64) -> f64 {
        let range = self.max - self.min;
        if range == 0.0 { 0.0 } else { (x - self.min) / range }
    }

    pub fn invert(&self, z: f64) -> f64 {
        let range = self.max - self.min;
        if range == 0.0 { self.min } else { z * range + self.min }
    }
}

/// Per-column min-max scaling state.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalerState {
    columns: Vec<ColumnScaler>,
}

impl ScalerState {
    /// Fits one scaler per column (`columns[j]` holds column j's values).
    pub fn fit<C: AsRef<[f64]>>(columns: &[C]) -> Result<Self> {
        let columns = columns.iter().map(|c| ColumnScaler::fit(c.as_ref())).collect::<Result<_>>()?;
        Ok(Self { columns })
    }

    pub fn columns(&self) -> &[ColumnScaler] {
        &self.columns
    }

    pub fn apply_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.columns.len() {
            return Err(Error::LengthMismatch(self.columns.len(), row.len()));
        }
        Ok(row.iter().zip(&self.columns).map(|(x, s)| s.apply(*x)).collect())
    }

    pub fn invert_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.columns.len() {
            return Err(Error::LengthMismatch(self.columns.len(), row.len()));
        }
        Ok(row.iter().zip(&self.columns).map(|(z, s)| s.invert(*z)).collect())
    }
}

pub fn minmax_fit(values: &[f64]) -> Result<ColumnScaler> {
    ColumnScaler::fit(values)
}

pub fn minmax_apply(state: &ColumnScaler, values: &[f64]) -> Vec<f64> {
    values.iter().map(|v| state.apply(*v)).collect()
}

pub fn minmax_invert(state: &ColumnScaler, values: &[f64]) -> Vec<f64> {
    values.iter().map(|v| state.invert(*v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let s = minmax_fit(&[0.0, 10.0]).unwrap();
        assert_eq!(s.apply(5.0), 0.5);
        assert_eq!(s.apply(12.0), 1.2);
        let c = minmax_fit(&[5.0, 5.0, 5.0]).unwrap();
        assert_eq!(minmax_apply(&c, &[5.0, 5.0, 5.0]), vec![0.0; 3]);
        assert_eq!(c.invert(0.0), 5.0);
        assert_eq!(minmax_fit(&[]), Err(Error::EmptySet));
    }

    #[test]
    fn row_scaling() {
        let st = ScalerState::fit(&[vec![0.0, 2.0], vec![10.0, 30.0]]).unwrap();
        assert_eq!(st.apply_row(&[1.0, 20.0]).unwrap(), vec![0.5, 0.5]);
        assert!(st.apply_row(&[1.0]).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(values in proptest::collection::vec(-1e3f64..1e3, 1..50)) {
            let s = minmax_fit(&values).unwrap();
            for v in &values {
                let z = s.apply(*v);
                prop_assert!((0.0..=1.0).contains(&z));
                prop_assert!((s.invert(z) - v).abs() < 1e-12 * (1.0 + v.abs()));
            }
        }
    }
}
