//! Single-hidden-layer perceptron (tanh hidden units, linear output) trained with Adam.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::preprocess::LagMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlpConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    pub batch_size: usize,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self { epochs: 400, learning_rate: 0.01, batch_size: 16 }
    }
}

/// Parameters stored flat as `[W1 (hidden×inputs, row-major), b1, w2, b2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    inputs: usize,
    hidden: usize,
    params: Vec<f64>,
}

pub const MIN_ROWS: usize = 10;

impl Mlp {
    pub fn init(inputs: usize, hidden: usize, rng: &mut ChaCha8Rng) -> Self {
        let len = hidden * inputs + 2 * hidden + 1;
        let r1 = 1.0 / libm::sqrt(inputs.max(1) as f64);
        let r2 = 1.0 / libm::sqrt(hidden as f64);
        let mut params = vec![0.0; len];
        for p in &mut params[..hidden * inputs] {
            *p = rng.random_range(-r1..r1);
        }
        let w2 = hidden * inputs + hidden;
        for p in &mut params[w2..w2 + hidden] {
            *p = rng.random_range(-r2..r2);
        }
        Self { inputs, hidden, params }
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn set_params(&mut self, p: &[f64]) {
        self.params.copy_from_slice(p);
    }

    fn offsets(&self) -> (usize, usize, usize) {
        let b1 = self.hidden * self.inputs;
        (b1, b1 + self.hidden, b1 + 2 * self.hidden)
    }

    fn hidden_activations(&self, x: &[f64], out: &mut [f64]) {
        let (b1, _, _) = self.offsets();
        for (j, h) in out.iter_mut().enumerate() {
            let w = &self.params[j * self.inputs..(j + 1) * self.inputs];
            let z = self.params[b1 + j] + w.iter().zip(x).map(|(a, b)| a * b).sum::<f64>();
            *h = libm::tanh(z);
        }
    }

    pub fn predict(&self, x: &[f64]) -> f64 {
        let (_, w2, b2) = self.offsets();
        let mut h = vec![0.0; self.hidden];
        self.hidden_activations(x, &mut h);
        self.params[b2] + h.iter().zip(&self.params[w2..w2 + self.hidden]).map(|(a, b)| a * b).sum::<f64>()
    }

    /// Mean squared error over `rows` and its gradient.
    pub fn loss_and_grad(&self, m: &LagMatrix, rows: &[usize]) -> (f64, Vec<f64>) {
        let (b1, w2, b2) = self.offsets();
        let mut grad = vec![0.0; self.params.len()];
        let mut h = vec![0.0; self.hidden];
        let mut loss = 0.0;
        let scale = 1.0 / rows.len() as f64;
        for &i in rows {
            let x = m.row(i);
            self.hidden_activations(x, &mut h);
            let out = self.params[b2] + h.iter().zip(&self.params[w2..w2 + self.hidden]).map(|(a, b)| a * b).sum::<f64>();
            let err = out - m.target[i];
            loss += err * err * scale;
            let g_out = 2.0 * err * scale;
            grad[b2] += g_out;
            for j in 0..self.hidden {
                grad[w2 + j] += g_out * h[j];
                let g_z = g_out * self.params[w2 + j] * (1.0 - h[j] * h[j]);
                grad[b1 + j] += g_z;
                for (g, xv) in grad[j * self.inputs..(j + 1) * self.inputs].iter_mut().zip(x) {
                    *g += g_z * xv;
                }
            }
        }
        (loss, grad)
    }
}

pub fn mlp_fit(m: &LagMatrix, hidden: usize, seed: u64, cfg: &MlpConfig) -> Result<Mlp> {
    if m.rows() < MIN_ROWS {
        return Err(Error::TooFewRows { required: MIN_ROWS, actual: m.rows() });
    }
    if hidden == 0 {
        return Err(Error::InvalidParameter("MLP needs at least one hidden unit".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut net = Mlp::init(m.cols(), hidden, &mut rng);
    let (b1, b2) = (0.9, 0.999);
    let mut mom = vec![0.0; net.params.len()];
    let mut vel = vec![0.0; net.params.len()];
    let mut order: Vec<usize> = (0..m.rows()).collect();
    let mut step = 0i32;
    for _ in 0..cfg.epochs {
        order.shuffle(&mut rng);
        for batch in order.chunks(cfg.batch_size.max(1)) {
            let (_, g) = net.loss_and_grad(m, batch);
            step += 1;
            let c1 = 1.0 - libm::pow(b1, step as f64);
            let c2 = 1.0 - libm::pow(b2, step as f64);
            for k in 0..net.params.len() {
                mom[k] = b1 * mom[k] + (1.0 - b1) * g[k];
                vel[k] = b2 * vel[k] + (1.0 - b2) * g[k] * g[k];
                net.params[k] -= cfg.learning_rate * (mom[k] / c1) / (libm::sqrt(vel[k] / c2) + 1e-8);
            }
        }
    }
    if net.params.iter().any(|p| !p.is_finite()) {
        return Err(Error::NumericalFailure("MLP weights diverged".into()));
    }
    Ok(net)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_matrix(seed: u64, n: usize, p: usize) -> LagMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..p).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
        let y = (0..n).map(|_| rng.random_range(0.0..1.0)).collect();
        LagMatrix::from_rows(&rows, y).unwrap()
    }

    #[test]
    fn gradient_matches_finite_differences() {
        for seed in 0..5 {
            let m = random_matrix(seed, 12, 3);
            let mut rng = ChaCha8Rng::seed_from_u64(100 + seed);
            let mut net = Mlp::init(3, 4, &mut rng);
            let rows: Vec<usize> = (0..12).collect();
            let (_, g) = net.loss_and_grad(&m, &rows);
            let base = net.params().to_vec();
            let h = 1e-6;
            for k in 0..base.len() {
                let mut p = base.clone();
                p[k] += h;
                net.set_params(&p);
                let up = net.loss_and_grad(&m, &rows).0;
                p[k] -= 2.0 * h;
                net.set_params(&p);
                let down = net.loss_and_grad(&m, &rows).0;
                net.set_params(&base);
                let fd = (up - down) / (2.0 * h);
                let rel = (fd - g[k]).abs() / fd.abs().max(g[k].abs()).max(1e-6);
                assert!(rel < 1e-4, "param {k}: fd {fd} vs {}", g[k]);
            }
        }
    }

    #[test]
    fn learns_linear_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let rows: Vec<Vec<f64>> = (0..60).map(|_| vec![rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)]).collect();
        let y: Vec<f64> = rows.iter().map(|r| 0.2 + 0.3 * r[0] + 0.4 * r[1]).collect();
        let m = LagMatrix::from_rows(&rows, y).unwrap();
        let net = mlp_fit(&m, 2, 9, &MlpConfig::default()).unwrap();
        let all: Vec<usize> = (0..60).collect();
        let mse = net.loss_and_grad(&m, &all).0;
        assert!(mse < 1e-3, "{mse}");
    }

    #[test]
    fn refit_is_bitwise_identical() {
        let m = random_matrix(7, 30, 4);
        let a = mlp_fit(&m, 5, 42, &MlpConfig::default()).unwrap();
        let b = mlp_fit(&m, 5, 42, &MlpConfig::default()).unwrap();
        assert_eq!(a.params().iter().map(|p| p.to_bits()).collect::<Vec<_>>(), b.params().iter().map(|p| p.to_bits()).collect::<Vec<_>>());
    }

    #[test]
    fn too_few_rows() {
        let m = random_matrix(1, 9, 2);
        assert_eq!(mlp_fit(&m, 2, 0, &MlpConfig::default()).unwrap_err(), Error::TooFewRows { required: 10, actual: 9 });
    }
}
