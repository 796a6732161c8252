//! Tuning grids, enumerated in lexicographic order of their axes.

use alloc::vec::Vec;

use super::knn::Weighting;
use super::sarima::ArmaOrders;
use super::{Hyper, ModelId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridConfig {
    /// Each AR, MA, SAR and SMA order ranges over `0..=arma_max`.
    pub arma_max: u8,
    /// Lag orders tried by LR, KNN and Rpart.
    pub lags: Vec<u8>,
    pub knn_k: Vec<u8>,
    pub weightings: Vec<Weighting>,
    pub mlp_hidden: Vec<u8>,
    pub mlp_lags: Vec<u8>,
}

impl GridConfig {
    /// Full ranges: orders in [0,5], lags in [1,7], k in [2,5], hidden units in [1,10].
    pub fn full() -> Self {
        Self {
            arma_max: 5,
            lags: (1..=7).collect(),
            knn_k: (2..=5).collect(),
            weightings: alloc::vec![Weighting::Uniform, Weighting::Distance],
            mlp_hidden: (1..=10).collect(),
            mlp_lags: (1..=7).collect(),
        }
    }

    /// Desk-scale default: orders in [0,2] and a thinned MLP grid.
    pub fn reduced() -> Self {
        Self { arma_max: 2, mlp_hidden: alloc::vec![2, 5, 10], mlp_lags: alloc::vec![1, 3, 6], ..Self::full() }
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        Self::reduced()
    }
}

/// Grid points for `id`; grid-free models yield the single point [`Hyper::None`].
pub fn grid(id: ModelId, cfg: &GridConfig) -> Vec<Hyper> {
    use ModelId::*;
    let mut out = Vec::new();
    match id {
        Rw | Srw | Hw | Dm => out.push(Hyper::None),
        Sarima | Sarimax => {
            let r = 0..=cfg.arma_max;
            for p in r.clone() {
                for q in r.clone() {
                    for sp in r.clone() {
                        for sq in r.clone() {
                            out.push(Hyper::Arma(ArmaOrders::new(p, q, sp, sq)));
                        }
                    }
                }
            }
        }
        LrUni | LrMulti => out.extend(cfg.lags.iter().map(|&lags| Hyper::Lr { lags })),
        KnnUni | KnnMulti => {
            for &k in &cfg.knn_k {
                for &weighting in &cfg.weightings {
                    for &lags in &cfg.lags {
                        out.push(Hyper::Knn { k, weighting, lags });
                    }
                }
            }
        }
        RpartUni | RpartMulti => out.extend(cfg.lags.iter().map(|&lags| Hyper::Tree { lags })),
        MlpUni | MlpMulti => {
            for &hidden in &cfg.mlp_hidden {
                for &lags in &cfg.mlp_lags {
                    out.push(Hyper::Mlp { hidden, lags });
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn knn_table_axes_give_eight_points() {
        let cfg = GridConfig { lags: vec![3], ..GridConfig::full() };
        assert_eq!(grid(ModelId::KnnUni, &cfg).len(), 8);
        assert_eq!(grid(ModelId::KnnMulti, &GridConfig::full()).len(), 8 * 7);
    }

    #[test]
    fn sizes() {
        let full = GridConfig::full();
        assert_eq!(grid(ModelId::Sarima, &full).len(), 1296);
        assert_eq!(grid(ModelId::Sarimax, &GridConfig::reduced()).len(), 81);
        assert_eq!(grid(ModelId::Hw, &full), vec![Hyper::None]);
        assert_eq!(grid(ModelId::MlpUni, &full).len(), 70);
        assert_eq!(grid(ModelId::LrUni, &full).len(), 7);
    }

    #[test]
    fn lexicographic_order() {
        let g = grid(ModelId::Sarima, &GridConfig::reduced());
        assert_eq!(g[0], Hyper::Arma(ArmaOrders::new(0, 0, 0, 0)));
        assert_eq!(g[1], Hyper::Arma(ArmaOrders::new(0, 0, 0, 1)));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
        let k = grid(ModelId::KnnUni, &GridConfig::full());
        assert_eq!(k[0], Hyper::Knn { k: 2, weighting: Weighting::Uniform, lags: 1 });
        assert_eq!(k[7], Hyper::Knn { k: 2, weighting: Weighting::Distance, lags: 1 });
    }

    #[test]
    fn every_point_validates() {
        for id in ModelId::ALL {
            for h in grid(id, &GridConfig::full()) {
                super::super::ForecasterSpec::new(id, h, 0).unwrap();
            }
        }
    }
}
