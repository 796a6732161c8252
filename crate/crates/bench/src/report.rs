//! Rank statistics over a record set and their CSV tables.

use std::path::{Path, PathBuf};

use profitcast_core::series::ForecastRecord;
use profitcast_core::stats::{
    category_contrast, friedman, nemenyi, rank_matrix, ContrastResult, Criterion, FriedmanResult, NemenyiResult, Partition, Shift,
};

use crate::error::{BenchError, Result};
use crate::io::{num, write_table};

pub const NEMENYI_ALPHA: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionStats {
    pub criterion: Criterion,
    pub models: Vec<String>,
    pub average_ranks: Vec<f64>,
    pub n: usize,
    pub dropped: usize,
    pub friedman: Option<FriedmanResult>,
    pub nemenyi: Option<NemenyiResult>,
    /// Index of the best (lowest average rank) model.
    pub best: usize,
    /// Nemenyi p-value of each model against the best one.
    pub p_vs_best: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Contrast {
    pub criterion: Criterion,
    pub partition: Partition,
    pub result: std::result::Result<ContrastResult, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub criteria: Vec<CriterionStats>,
    pub contrasts: Vec<Contrast>,
}

impl Summary {
    pub fn get(&self, c: Criterion) -> Option<&CriterionStats> {
        self.criteria.iter().find(|s| s.criterion == c)
    }

    pub fn models(&self) -> &[String] {
        self.criteria.first().map_or(&[], |c| &c.models)
    }
}

pub fn criterion_stats(records: &[ForecastRecord], criterion: Criterion) -> Result<CriterionStats> {
    let rm = rank_matrix(records, criterion).map_err(|e| BenchError::core(format!("ranking by {criterion}"), e))?;
    let average_ranks = rm.average_ranks();
    let friedman = friedman(&rm).ok();
    let nemenyi = nemenyi(&rm, NEMENYI_ALPHA).ok();
    let (best, p_vs_best) = match &nemenyi {
        Some(n) => n.versus_best(&average_ranks),
        None => (0, vec![1.0; rm.k()]),
    };
    Ok(CriterionStats { criterion, n: rm.n(), dropped: rm.dropped, models: rm.models.clone(), average_ranks, friedman, nemenyi, best, p_vs_best })
}

/// Ranks, Friedman, Nemenyi and category contrasts for every criterion.
pub fn analyze(records: &[ForecastRecord]) -> Result<Summary> {
    let mut criteria = Vec::new();
    let mut contrasts = Vec::new();
    for c in Criterion::ALL {
        criteria.push(criterion_stats(records, c)?);
        let rm = rank_matrix(records, c).map_err(|e| BenchError::core(format!("ranking by {c}"), e))?;
        for p in Partition::ALL {
            contrasts.push(Contrast { criterion: c, partition: p, result: category_contrast(&rm, p).map_err(|e| e.to_string()) });
        }
    }
    Ok(Summary { criteria, contrasts })
}

/// Writes summary, friedman, contrasts and per-criterion p-value tables.
pub fn write_summary(summary: &Summary, dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    let models = summary.models();

    let mut header = vec!["model".to_string()];
    header.extend(summary.criteria.iter().map(|c| format!("rank_{}", c.criterion)));
    header.extend(summary.criteria.iter().map(|c| format!("p_{}", c.criterion)));
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let path = dir.join("summary.csv");
    write_table(
        &path,
        &header_refs,
        models.iter().enumerate().map(|(j, m)| {
            let mut row = vec![m.clone()];
            row.extend(summary.criteria.iter().map(|c| num(c.average_ranks[j])));
            row.extend(summary.criteria.iter().map(|c| num(c.p_vs_best[j])));
            row
        }),
    )?;
    files.push(path);

    let path = dir.join("friedman.csv");
    write_table(
        &path,
        &["criterion", "n", "k", "dropped", "statistic", "df", "p_value", "nemenyi_cd", "best"],
        summary.criteria.iter().map(|c| {
            let (stat, df, p) = c.friedman.map_or((String::new(), String::new(), String::new()), |f| (num(f.statistic), f.df.to_string(), num(f.p_value)));
            vec![
                c.criterion.to_string(),
                c.n.to_string(),
                c.models.len().to_string(),
                c.dropped.to_string(),
                stat,
                df,
                p,
                c.nemenyi.as_ref().map_or(String::new(), |n| num(n.cd)),
                c.models[c.best].clone(),
            ]
        }),
    )?;
    files.push(path);

    for c in &summary.criteria {
        let Some(nem) = &c.nemenyi else { continue };
        let mut header = vec!["model"];
        header.extend(c.models.iter().map(String::as_str));
        let path = dir.join(format!("pvalues_{}.csv", c.criterion));
        write_table(
            &path,
            &header,
            c.models.iter().zip(&nem.p_values).map(|(m, row)| std::iter::once(m.clone()).chain(row.iter().map(|p| num(*p))).collect::<Vec<_>>()),
        )?;
        files.push(path);
    }

    let path = dir.join("contrasts.csv");
    write_table(
        &path,
        &["criterion", "partition", "inside_rank", "outside_rank", "w_plus", "z", "p_value", "n", "better", "note"],
        summary.contrasts.iter().map(|c| match &c.result {
            Ok(r) => {
                let better = match r.test.shift {
                    _ if r.test.all_zero => "tie",
                    Shift::None => "tie",
                    _ if r.inside_better => "inside",
                    _ => "outside",
                };
                vec![
                    c.criterion.to_string(),
                    c.partition.as_str().into(),
                    num(r.inside_rank),
                    num(r.outside_rank),
                    num(r.test.w_plus),
                    num(r.test.z),
                    num(r.test.p_value),
                    r.test.n.to_string(),
                    better.into(),
                    String::new(),
                ]
            }
            Err(e) => {
                let mut row = vec![c.criterion.to_string(), c.partition.as_str().into()];
                row.extend(std::iter::repeat_n(String::new(), 7));
                row.push(e.clone());
                row
            }
        }),
    )?;
    files.push(path);
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;
    use profitcast_core::series::YearMonth;

    fn rec(dataset: &str, model: &str, origin: usize, err: f64) -> ForecastRecord {
        ForecastRecord {
            dataset: dataset.into(),
            model: model.into(),
            origin,
            period: YearMonth::new(2000, 1).unwrap(),
            horizon: 1,
            forecast: 100.0 + err,
            actual: 100.0,
            compute_seconds: 0.001,
            selected_features: Vec::new(),
            abs_pe: err.abs(),
            squared_error: err * err,
            scaled_error: err.abs(),
            profit: 100.0 - err.abs(),
        }
    }

    #[test]
    fn summary_tables() {
        let mut records = Vec::new();
        for o in 0..24 {
            records.push(rec("d", "HW", o, 1.0 + (o % 3) as f64 * 0.1));
            records.push(rec("d", "RW", o, 5.0 + (o % 2) as f64));
            records.push(rec("d", "LRUni", o, 3.0));
        }
        let s = analyze(&records).unwrap();
        let profit = s.get(Criterion::Profit).unwrap();
        assert_eq!(profit.models[profit.best], "HW");
        assert_eq!(profit.n, 24);
        let seasonal = s.contrasts.iter().find(|c| c.criterion == Criterion::Mape && c.partition == Partition::Seasonal).unwrap();
        assert!(seasonal.result.as_ref().unwrap().inside_better);
        let dir = tempfile::tempdir().unwrap();
        let files = write_summary(&s, dir.path()).unwrap();
        assert!(files.iter().all(|f| f.exists()));
        assert!(dir.path().join("pvalues_profit.csv").exists());
    }
}
