use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::series::FREQ;

/// Regular (`d`) and seasonal (`seasonal`, lag 12) differencing orders, each 0 or 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct DifferencingSpec {
    d: u8,
    seasonal: u8,
}

impl DifferencingSpec {
    pub const NONE: DifferencingSpec = DifferencingSpec { d: 0, seasonal: 0 };

    pub fn new(d: u8, seasonal: u8) -> Result<Self> {
        if d > 1 || seasonal > 1 {
            return Err(Error::InvalidParameter(alloc::format!("differencing orders capped at 1, got d={d} D={seasonal}")));
        }
        Ok(Self { d, seasonal })
    }

    pub fn d(&self) -> u8 {
        self.d
    }

    pub fn seasonal(&self) -> u8 {
        self.seasonal
    }

    /// Observations consumed by differencing.
    pub fn lost(&self) -> usize {
        FREQ * self.seasonal as usize + self.d as usize
    }

    pub fn is_identity(&self) -> bool {
        self.d == 0 && self.seasonal == 0
    }

    /// Seasonal differencing first, then regular.
    pub fn apply(&self, y: &[f64]) -> Result<Differenced> {
        if y.len() <= self.lost() {
            return Err(Error::SeriesTooShort { required: self.lost() + 1, actual: y.len() });
        }
        let mut z = y.to_vec();
        let mut seasonal_anchor = Vec::new();
        if self.seasonal == 1 {
            seasonal_anchor = z[..FREQ].to_vec();
            z = (FREQ..z.len()).map(|t| z[t] - z[t - FREQ]).collect();
        }
        let mut regular_anchor = None;
        if self.d == 1 {
            regular_anchor = Some(z[0]);
            z = z.windows(2).map(|w| w[1] - w[0]).collect();
        }
        Ok(Differenced { spec: *self, seasonal_anchor, regular_anchor, values: z })
    }

    /// Differenced value at the last position of `y` (which must be long enough).
    pub fn last_value(&self, y: &[f64]) -> f64 {
        let n = y.len();
        let z = |t: usize| if self.seasonal == 1 { y[t] - y[t - FREQ] } else { y[t] };
        if self.d == 1 { z(n - 1) - z(n - 2) } else { z(n - 1) }
    }

    /// Turns a forecast of the differenced value at position `history.len()`
    /// back into the original scale.
    pub fn undo_next(&self, history: &[f64], w_next: f64) -> f64 {
        let n = history.len();
        let z_prev = |t: usize| if self.seasonal == 1 { history[t] - history[t - FREQ] } else { history[t] };
        let z_next = if self.d == 1 { w_next + z_prev(n - 1) } else { w_next };
        if self.seasonal == 1 { z_next + history[n - FREQ] } else { z_next }
    }
}

/// A differenced series with the anchors needed to integrate it back.
#[derive(Debug, Clone, PartialEq)]
pub struct Differenced {
    pub spec: DifferencingSpec,
    seasonal_anchor: Vec<f64>,
    regular_anchor: Option<f64>,
    pub values: Vec<f64>,
}

impl Differenced {
    pub fn integrate(&self) -> Vec<f64> {
        integrate(&self.values, self)
    }
}

pub fn difference(y: &[f64], spec: DifferencingSpec) -> Result<Differenced> {
    spec.apply(y)
}

/// Rebuilds the original-scale series from `w` using the anchors in `from`.
pub fn integrate(w: &[f64], from: &Differenced) -> Vec<f64> {
    let mut z = w.to_vec();
    if let Some(a) = from.regular_anchor {
        let mut out = Vec::with_capacity(z.len() + 1);
        out.push(a);
        for v in z {
            let prev = *out.last().unwrap();
            out.push(prev + v);
        }
        z = out;
    }
    if from.spec.seasonal == 1 {
        let mut out = from.seasonal_anchor.clone();
        for (i, v) in z.into_iter().enumerate() {
            let prev = out[i];
            out.push(prev + v);
        }
        z = out;
    }
    z
}
