//! Rank-based comparison of forecasters: rank matrices, Friedman, Nemenyi,
//! Wilcoxon signed-rank and category contrasts.

pub mod special;
pub mod tukey;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::models::ModelId;
use crate::series::ForecastRecord;
use special::{chi2_sf, norm_sf};

/// Per-forecast quantity used for ranking.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    Mape,
    Rmse,
    Mase,
    Profit,
    Time,
}

impl Criterion {
    pub const ALL: [Criterion; 5] = [Criterion::Mape, Criterion::Rmse, Criterion::Mase, Criterion::Profit, Criterion::Time];

    pub fn as_str(self) -> &'static str {
        match self {
            Criterion::Mape => "mape",
            Criterion::Rmse => "rmse",
            Criterion::Mase => "mase",
            Criterion::Profit => "profit",
            Criterion::Time => "time",
        }
    }

    /// The record field ranked for this criterion.
    pub fn value(self, r: &ForecastRecord) -> f64 {
        match self {
            Criterion::Mape => r.abs_pe,
            Criterion::Rmse => r.squared_error,
            Criterion::Mase => r.scaled_error,
            Criterion::Profit => r.profit,
            Criterion::Time => r.compute_seconds,
        }
    }

    pub fn higher_is_better(self) -> bool {
        self == Criterion::Profit
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Criterion {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Criterion::ALL
            .into_iter()
            .find(|c| c.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(alloc::format!("unknown criterion {s:?}")))
    }
}

/// Ranks (1 = best, ties averaged) of `values`.
pub fn rank_row(values: &[f64], higher_is_better: bool) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    let key = |i: usize| if higher_is_better { -values[i] } else { values[i] };
    order.sort_by(|&a, &b| key(a).total_cmp(&key(b)));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && key(order[j + 1]) == key(order[i]) {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Within-row ranks: one row per forecast instance, one column per model.
#[derive(Debug, Clone, PartialEq)]
pub struct RankMatrix {
    pub models: Vec<String>,
    /// (dataset, origin) of each row.
    pub instances: Vec<(String, usize)>,
    pub ranks: Vec<Vec<f64>>,
    /// Instances dropped because some model had no record.
    pub dropped: usize,
}

impl RankMatrix {
    /// Ranks a complete N×k value matrix.
    pub fn from_values(models: Vec<String>, values: &[Vec<f64>], higher_is_better: bool) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::NoCompleteRows);
        }
        if let Some(r) = values.iter().find(|r| r.len() != models.len()) {
            return Err(Error::LengthMismatch(r.len(), models.len()));
        }
        Ok(Self {
            instances: (0..values.len()).map(|i| (String::new(), i)).collect(),
            ranks: values.iter().map(|r| rank_row(r, higher_is_better)).collect(),
            models,
            dropped: 0,
        })
    }

    pub fn n(&self) -> usize {
        self.ranks.len()
    }

    pub fn k(&self) -> usize {
        self.models.len()
    }

    pub fn average_ranks(&self) -> Vec<f64> {
        let n = self.n() as f64;
        (0..self.k()).map(|j| self.ranks.iter().map(|r| r[j]).sum::<f64>() / n).collect()
    }
}

/// Builds the rank matrix for `criterion`. Models are ordered by name and
/// instances by (dataset, origin); incomplete instances are dropped.
pub fn rank_matrix(records: &[ForecastRecord], criterion: Criterion) -> Result<RankMatrix> {
    let mut models: Vec<String> = records.iter().map(|r| r.model.clone()).collect();
    models.sort();
    models.dedup();
    let mut cells: BTreeMap<(String, usize), BTreeMap<&str, f64>> = BTreeMap::new();
    for r in records {
        cells.entry((r.dataset.clone(), r.origin)).or_default().insert(r.model.as_str(), criterion.value(r));
    }
    let mut out = RankMatrix { models: Vec::new(), instances: Vec::new(), ranks: Vec::new(), dropped: 0 };
    for (inst, row) in cells {
        if row.len() != models.len() {
            out.dropped += 1;
            continue;
        }
        let values: Vec<f64> = models.iter().map(|m| row[m.as_str()]).collect();
        out.ranks.push(rank_row(&values, criterion.higher_is_better()));
        out.instances.push(inst);
    }
    if out.ranks.is_empty() {
        return Err(Error::NoCompleteRows);
    }
    out.models = models;
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FriedmanResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

pub fn friedman(rm: &RankMatrix) -> Result<FriedmanResult> {
    let (n, k) = (rm.n(), rm.k());
    if n < 2 || k < 2 {
        return Err(Error::DegenerateMatrix(alloc::format!("Friedman needs N ≥ 2 and k ≥ 2, got N={n}, k={k}")));
    }
    let (nf, kf) = (n as f64, k as f64);
    let sum_sq: f64 = rm.average_ranks().iter().map(|r| r * r).sum();
    let raw = 12.0 * nf * (sum_sq - kf * (kf + 1.0) * (kf + 1.0) / 4.0) / (kf * (kf + 1.0));
    let statistic = raw.clamp(0.0, nf * (kf - 1.0));
    Ok(FriedmanResult { statistic, df: k - 1, p_value: chi2_sf(statistic, kf - 1.0) })
}

#[derive(Debug, Clone, PartialEq)]
pub struct NemenyiResult {
    pub alpha: f64,
    /// Studentized-range quantile divided by √2.
    pub q_alpha: f64,
    pub cd: f64,
    /// Symmetric k×k matrix of pairwise p-values with unit diagonal.
    pub p_values: Vec<Vec<f64>>,
}

impl NemenyiResult {
    /// p-values of every model against the one with the lowest average rank.
    pub fn versus_best(&self, average_ranks: &[f64]) -> (usize, Vec<f64>) {
        let best = (0..average_ranks.len()).fold(0, |b, j| if average_ranks[j] < average_ranks[b] { j } else { b });
        (best, self.p_values.iter().map(|row| row[best]).collect())
    }
}

pub fn nemenyi(rm: &RankMatrix, alpha: f64) -> Result<NemenyiResult> {
    let (n, k) = (rm.n(), rm.k());
    if n < 1 || k < 2 {
        return Err(Error::DegenerateMatrix(alloc::format!("Nemenyi needs N ≥ 1 and k ≥ 2, got N={n}, k={k}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(alloc::format!("alpha {alpha} outside (0, 1)")));
    }
    let q = tukey::table_quantile(alpha, k).unwrap_or_else(|| tukey::range_quantile(alpha, k));
    let q_alpha = q / core::f64::consts::SQRT_2;
    let se = libm::sqrt((k * (k + 1)) as f64 / (6.0 * n as f64));
    let avg = rm.average_ranks();
    let mut p_values = vec![vec![1.0; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            let stat = (avg[i] - avg[j]).abs() / se * core::f64::consts::SQRT_2;
            let p = (1.0 - tukey::range_cdf(stat, k)).clamp(0.0, 1.0);
            p_values[i][j] = p;
            p_values[j][i] = p;
        }
    }
    Ok(NemenyiResult { alpha, q_alpha, cd: q_alpha * se, p_values })
}

/// Which sample tends to be larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shift {
    FirstLarger,
    SecondLarger,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WilcoxonResult {
    /// Sum of ranks of positive differences a − b.
    pub w_plus: f64,
    pub z: f64,
    /// Two-sided p-value.
    pub p_value: f64,
    /// One-sided p-value for the alternative a > b.
    pub p_greater: f64,
    /// Non-zero differences used.
    pub n: usize,
    /// All differences were zero; p is 1 and nothing else is meaningful.
    pub all_zero: bool,
    pub shift: Shift,
}

pub const WILCOXON_MIN_PAIRS: usize = 10;

/// Signed-rank test, normal approximation with continuity and tie corrections.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).filter(|v| *v != 0.0).collect();
    if d.is_empty() && !a.is_empty() {
        return Ok(WilcoxonResult { w_plus: 0.0, z: 0.0, p_value: 1.0, p_greater: 1.0, n: 0, all_zero: true, shift: Shift::None });
    }
    if d.len() < WILCOXON_MIN_PAIRS {
        return Err(Error::TooFewPairs { required: WILCOXON_MIN_PAIRS, actual: d.len() });
    }
    let n = d.len() as f64;
    let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
    let ranks = rank_row(&abs, false);
    let w_plus: f64 = d.iter().zip(&ranks).filter(|(v, _)| **v > 0.0).map(|(_, r)| r).sum();
    let mean = n * (n + 1.0) / 4.0;
    let mut sorted = abs.clone();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|v| **v == sorted[i]).count();
        let t = j as f64;
        tie_term += t * t * t - t;
        i += j;
    }
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    let dev = w_plus - mean;
    let corrected = if dev.abs() <= 0.5 { 0.0 } else { dev - 0.5 * dev.signum() };
    let z = if var > 0.0 { corrected / libm::sqrt(var) } else { 0.0 };
    let p_value = (2.0 * norm_sf(z.abs())).min(1.0);
    let p_greater = norm_sf((dev - 0.5) / libm::sqrt(var.max(f64::MIN_POSITIVE)));
    let shift = if dev > 0.0 {
        Shift::FirstLarger
    } else if dev < 0.0 {
        Shift::SecondLarger
    } else {
        Shift::None
    };
    Ok(WilcoxonResult { w_plus, z, p_value, p_greater, n: d.len(), all_zero: false, shift })
}

/// Model attributes used to split a roster in two.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Partition {
    Variables,
    Seasonal,
    Ml,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::Variables, Partition::Seasonal, Partition::Ml];

    pub fn as_str(self) -> &'static str {
        match self {
            Partition::Variables => "variables",
            Partition::Seasonal => "seasonal",
            Partition::Ml => "ml",
        }
    }

    pub fn contains(self, model: &str) -> Result<bool> {
        let id: ModelId = model.parse()?;
        Ok(match self {
            Partition::Variables => id.variables(),
            Partition::Seasonal => id.seasonal(),
            Partition::Ml => id.ml(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContrastResult {
    /// Mean over instances of the category's average rank.
    pub inside_rank: f64,
    pub outside_rank: f64,
    /// Wilcoxon of inside vs outside per-instance average ranks.
    pub test: WilcoxonResult,
    /// True when the category has the lower (better) average rank.
    pub inside_better: bool,
}

/// Compares the per-instance average rank of models in the category against the rest.
pub fn category_contrast_by<F>(rm: &RankMatrix, mut inside: F) -> Result<ContrastResult>
where
    F: FnMut(&str) -> Result<bool>,
{
    let flags: Vec<bool> = rm.models.iter().map(|m| inside(m)).collect::<Result<_>>()?;
    if !flags.iter().any(|f| *f) {
        return Err(Error::EmptyCategory("inside".into()));
    }
    if flags.iter().all(|f| *f) {
        return Err(Error::EmptyCategory("outside".into()));
    }
    let side = |want: bool| -> Vec<f64> {
        rm.ranks
            .iter()
            .map(|row| {
                let v: Vec<f64> = row.iter().zip(&flags).filter(|(_, f)| **f == want).map(|(r, _)| *r).collect();
                v.iter().sum::<f64>() / v.len() as f64
            })
            .collect()
    };
    let (a, b) = (side(true), side(false));
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let test = wilcoxon_signed_rank(&a, &b)?;
    let (inside_rank, outside_rank) = (mean(&a), mean(&b));
    Ok(ContrastResult { inside_rank, outside_rank, test, inside_better: inside_rank < outside_rank })
}

pub fn category_contrast(rm: &RankMatrix, partition: Partition) -> Result<ContrastResult> {
    category_contrast_by(rm, |m| partition.contains(m)).map_err(|e| match e {
        Error::EmptyCategory(side) => Error::EmptyCategory(alloc::format!("{} ({side})", partition.as_str())),
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn names(k: usize) -> Vec<String> {
        (0..k).map(|i| alloc::format!("m{i}")).collect()
    }

    #[test]
    fn dominant_model() {
        let v = vec![vec![1.0, 2.0]; 6];
        let rm = RankMatrix::from_values(names(2), &v, false).unwrap();
        assert_eq!(rm.average_ranks(), vec![1.0, 2.0]);
        let p = RankMatrix::from_values(names(2), &v, true).unwrap();
        assert_eq!(p.average_ranks(), vec![2.0, 1.0]);
    }

    #[test]
    fn ties_average() {
        assert_eq!(rank_row(&[3.0, 1.0, 3.0], false), vec![2.5, 1.0, 2.5]);
        assert_eq!(rank_row(&[5.0, 5.0], true), vec![1.5, 1.5]);
    }

    #[test]
    fn matches_sort_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let vals: Vec<Vec<f64>> = (0..4).map(|_| (0..3).map(|_| rng.random_range(0..4) as f64).collect()).collect();
            let rm = RankMatrix::from_values(names(3), &vals, false).unwrap();
            for (row, ranks) in vals.iter().zip(&rm.ranks) {
                for (j, v) in row.iter().enumerate() {
                    // rank = #strictly smaller + (#equal + 1) / 2
                    let less = row.iter().filter(|x| *x < v).count() as f64;
                    let eq = row.iter().filter(|x| *x == v).count() as f64;
                    assert_eq!(ranks[j], less + (eq + 1.0) / 2.0);
                }
            }
        }
    }

    #[test]
    fn incomplete_instances_dropped() {
        let rec = |model: &str, origin: usize, pe: f64| ForecastRecord {
            dataset: "d".into(),
            model: model.into(),
            origin,
            period: crate::series::YearMonth::new(2000, 1).unwrap(),
            horizon: 1,
            forecast: 1.0,
            actual: 1.0,
            compute_seconds: 0.0,
            selected_features: Vec::new(),
            abs_pe: pe,
            squared_error: 0.0,
            scaled_error: 0.0,
            profit: 0.0,
        };
        let records = vec![rec("a", 0, 1.0), rec("b", 0, 2.0), rec("a", 1, 1.0)];
        let rm = rank_matrix(&records, Criterion::Mape).unwrap();
        assert_eq!(rm.n(), 1);
        assert_eq!(rm.dropped, 1);
        assert_eq!(rank_matrix(&records[2..], Criterion::Mape).unwrap().n(), 1);
        assert_eq!(rank_matrix(&[], Criterion::Mape).unwrap_err(), Error::NoCompleteRows);
    }

    #[test]
    fn friedman_consistent_rankings() {
        for (k, n) in [(3usize, 3usize), (5, 10), (10, 20)] {
            let rows = vec![(0..k).map(|j| j as f64).collect::<Vec<f64>>(); n];
            let rm = RankMatrix::from_values(names(k), &rows, false).unwrap();
            assert_eq!(friedman(&rm).unwrap().statistic, (n * (k - 1)) as f64);
        }
        let tied = RankMatrix::from_values(names(4), &vec![vec![1.0; 4]; 5], false).unwrap();
        assert_eq!(friedman(&tied).unwrap().statistic, 0.0);
        assert_eq!(friedman(&tied).unwrap().p_value, 1.0);
    }

    #[test]
    fn friedman_hand_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let vals: Vec<Vec<f64>> = (0..5).map(|_| (0..4).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
        let rm = RankMatrix::from_values(names(4), &vals, false).unwrap();
        let (n, k) = (5.0, 4.0);
        let r = rm.average_ranks();
        let expected = 12.0 * n / (k * (k + 1.0)) * (r.iter().map(|x| x * x).sum::<f64>() - k * (k + 1.0) * (k + 1.0) / 4.0);
        let got = friedman(&rm).unwrap();
        assert!((got.statistic - expected).abs() < 1e-12);
        assert_eq!(got.df, 3);
    }

    #[test]
    fn friedman_degenerate() {
        let rm = RankMatrix::from_values(names(3), &[vec![1.0, 2.0, 3.0]], false).unwrap();
        assert!(matches!(friedman(&rm), Err(Error::DegenerateMatrix(_))));
    }

    #[test]
    fn nemenyi_cd_k3_n10() {
        let rows: Vec<Vec<f64>> = (0..10).map(|i| vec![(i % 3) as f64, ((i + 1) % 3) as f64, ((i + 2) % 3) as f64]).collect();
        let rm = RankMatrix::from_values(names(3), &rows, false).unwrap();
        let res = nemenyi(&rm, 0.05).unwrap();
        let q = tukey::table_quantile(0.05, 3).unwrap();
        assert!((res.cd - q / core::f64::consts::SQRT_2 * libm::sqrt(12.0 / 60.0)).abs() < 1e-12);
        // published q_0.05 for k=3 is 2.343 after dividing by √2
        assert!((res.q_alpha - 2.343).abs() < 0.01);
    }

    #[test]
    fn nemenyi_pairs() {
        let rows: Vec<Vec<f64>> = (0..30).map(|i| vec![1.0, 1.0, 2.0 + (i % 2) as f64, 5.0]).collect();
        let rm = RankMatrix::from_values(names(4), &rows, false).unwrap();
        let res = nemenyi(&rm, 0.05).unwrap();
        assert_eq!(res.p_values[0][1], 1.0);
        let avg = rm.average_ranks();
        for i in 0..4 {
            assert_eq!(res.p_values[i][i], 1.0);
            for j in 0..4 {
                assert!((res.p_values[i][j] - res.p_values[j][i]).abs() < 1e-12);
                if (avg[i] - avg[j]).abs() > res.cd {
                    assert!(res.p_values[i][j] < 0.05);
                }
            }
        }
        let (best, col) = res.versus_best(&avg);
        assert_eq!(best, 0);
        assert_eq!(col[best], 1.0);
    }

    #[test]
    fn wilcoxon_identical() {
        let a = [1.0, 2.0, 3.0];
        let r = wilcoxon_signed_rank(&a, &a).unwrap();
        assert!(r.all_zero);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn wilcoxon_shift() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a: Vec<f64> = (0..50).map(|_| rng.sample(StandardNormal)).collect();
        let b: Vec<f64> = a.iter().map(|v| v - 10.0).collect();
        let r = wilcoxon_signed_rank(&a, &b).unwrap();
        assert!(r.p_value < 0.01);
        assert_eq!(r.shift, Shift::FirstLarger);
    }

    #[test]
    fn wilcoxon_too_few() {
        let a = [1.0; 9];
        let b = [0.0; 9];
        assert_eq!(wilcoxon_signed_rank(&a, &b).unwrap_err(), Error::TooFewPairs { required: 10, actual: 9 });
    }

    /// Exact two-sided p by enumerating all 2^n sign assignments of the ranks.
    fn exact_p(d: &[f64]) -> f64 {
        let abs: Vec<f64> = d.iter().map(|v| v.abs()).collect();
        let ranks = rank_row(&abs, false);
        let n = d.len();
        let mean = (n * (n + 1)) as f64 / 4.0;
        let observed: f64 = d.iter().zip(&ranks).filter(|(v, _)| **v > 0.0).map(|(_, r)| r).sum();
        let mut extreme = 0usize;
        for mask in 0u32..(1 << n) {
            let w: f64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| ranks[i]).sum();
            if (w - mean).abs() >= (observed - mean).abs() - 1e-9 {
                extreme += 1;
            }
        }
        extreme as f64 / (1u64 << n) as f64
    }

    #[test]
    fn wilcoxon_near_exact_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let a: Vec<f64> = (0..30).map(|_| rng.sample(StandardNormal)).collect();
        let b: Vec<f64> = (0..30).map(|_| 0.4 + rng.sample::<f64, _>(StandardNormal)).collect();
        let (a, b) = (&a[..12], &b[..12]);
        let approx = wilcoxon_signed_rank(a, b).unwrap().p_value;
        let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        let exact = exact_p(&d);
        assert!((approx - exact).abs() < 0.02, "{approx} vs {exact}");
    }

    #[test]
    fn contrast_single_model_categories() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let vals: Vec<Vec<f64>> = (0..20).map(|_| vec![rng.random_range(0.0..1.0), rng.random_range(0.0..1.0)]).collect();
        let rm = RankMatrix::from_values(vec!["HW".into(), "RW".into()], &vals, false).unwrap();
        let c = category_contrast(&rm, Partition::Seasonal).unwrap();
        let a: Vec<f64> = rm.ranks.iter().map(|r| r[0]).collect();
        let b: Vec<f64> = rm.ranks.iter().map(|r| r[1]).collect();
        assert_eq!(c.test, wilcoxon_signed_rank(&a, &b).unwrap());
    }

    #[test]
    fn contrast_dominant_category() {
        let vals: Vec<Vec<f64>> = (0..40).map(|i| vec![0.0, 1.0 + (i % 3) as f64, 2.0 + (i % 2) as f64]).collect();
        let rm = RankMatrix::from_values(vec!["SARIMA".into(), "LRUni".into(), "RW".into()], &vals, false).unwrap();
        let c = category_contrast(&rm, Partition::Seasonal).unwrap();
        assert!(c.inside_better);
        assert!(c.test.p_value < 1e-6);
        assert!(matches!(category_contrast(&rm, Partition::Variables), Err(Error::EmptyCategory(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn ranks_are_permutation_averages(vals in prop::collection::vec(prop::collection::vec(0u8..5, 4), 1..8)) {
            let rows: Vec<Vec<f64>> = vals.iter().map(|r| r.iter().map(|&v| v as f64).collect()).collect();
            let rm = RankMatrix::from_values(names(4), &rows, false).unwrap();
            for r in &rm.ranks {
                prop_assert_eq!(r.iter().sum::<f64>(), 10.0);
            }
        }

        #[test]
        fn friedman_bounded_and_monotone_invariant(seed in 0u64..5000, k in 2usize..7, n in 2usize..12) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..k).map(|_| rng.random_range(0.0..3.0)).collect()).collect();
            let cubed: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| libm::exp(*v) * 7.0 - 2.0).collect()).collect();
            let a = friedman(&RankMatrix::from_values(names(k), &rows, false).unwrap()).unwrap();
            let b = friedman(&RankMatrix::from_values(names(k), &cubed, false).unwrap()).unwrap();
            prop_assert!(a.statistic >= 0.0 && a.statistic <= (n * (k - 1)) as f64);
            prop_assert_eq!(a.statistic, b.statistic);
        }

        #[test]
        fn wilcoxon_swap_antisymmetry(seed in 0u64..5000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a: Vec<f64> = (0..15).map(|_| rng.sample(StandardNormal)).collect();
            let b: Vec<f64> = (0..15).map(|_| rng.sample(StandardNormal)).collect();
            let ab = wilcoxon_signed_rank(&a, &b).unwrap();
            let ba = wilcoxon_signed_rank(&b, &a).unwrap();
            prop_assert!(ab.p_value > 0.0 && ab.p_value <= 1.0);
            prop_assert!((ab.p_value - ba.p_value).abs() < 1e-12);
            prop_assert!((ab.z + ba.z).abs() < 1e-12);
        }

        #[test]
        fn nemenyi_p_decreases_with_gap(n in 5usize..40) {
            let p = |gap: f64| {
                let s = core::f64::consts::SQRT_2 * gap / libm::sqrt(20.0 / (6.0 * n as f64));
                1.0 - tukey::range_cdf(s, 4)
            };
            prop_assert!(p(0.2) >= p(0.5) && p(0.5) >= p(1.0));
        }
    }
}
