//! CSV ingestion of datasets and the record, timing and log files of a run.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use profitcast_core::metrics::MetricSummary;
use profitcast_core::models::ModelId;
use profitcast_core::series::{Category, Dataset, ExogColumn, ExogenousTable, ForecastRecord, TimeSeries, YearMonth};

use crate::error::{BenchError, Result};
use crate::harness::{Failure, RunResult, SelectionEvent, TuningChoice};

#[derive(Debug, Clone, PartialEq)]
pub struct ExogSpec {
    pub name: String,
    pub category: Category,
    pub unit: String,
}

/// How to read one dataset file.
#[derive(Debug, Clone, PartialEq)]
pub struct DatasetSchema {
    pub id: String,
    pub date_column: String,
    pub value_column: String,
    pub exog: Vec<ExogSpec>,
    pub beta: f64,
    pub location: String,
}

impl DatasetSchema {
    pub fn univariate(id: impl Into<String>, beta: f64) -> Self {
        Self { id: id.into(), date_column: "date".into(), value_column: "value".into(), exog: Vec::new(), beta, location: String::new() }
    }
}

fn parse_err(path: &Path, line: usize, message: impl Into<String>) -> BenchError {
    BenchError::Parse { path: path.to_path_buf(), line, message: message.into() }
}

fn reader(path: &Path) -> Result<csv::Reader<fs::File>> {
    let file = fs::File::open(path).map_err(|e| BenchError::io(path, e))?;
    Ok(csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(file))
}

fn headers(rdr: &mut csv::Reader<fs::File>, path: &Path) -> Result<Vec<String>> {
    let h = rdr.headers().map_err(|e| parse_err(path, 1, e.to_string()))?;
    Ok(h.iter().map(String::from).collect())
}

fn column_index(headers: &[String], name: &str, path: &Path) -> Result<usize> {
    headers.iter().position(|h| h == name).ok_or_else(|| parse_err(path, 1, format!("missing column {name:?}")))
}

/// Reads a monthly sales file with a header row. Dates are `YYYY-MM` or
/// `YYYY-MM-DD`; rows must be consecutive months.
pub fn ingest_csv(path: &Path, schema: &DatasetSchema) -> Result<Dataset> {
    let mut rdr = reader(path)?;
    let headers = headers(&mut rdr, path)?;
    let date_ix = column_index(&headers, &schema.date_column, path)?;
    let value_ix = column_index(&headers, &schema.value_column, path)?;
    let exog_ix: Vec<usize> = schema.exog.iter().map(|e| column_index(&headers, &e.name, path)).collect::<Result<_>>()?;

    let mut start: Option<YearMonth> = None;
    let mut prev: Option<YearMonth> = None;
    let mut values = Vec::new();
    let mut exog: Vec<Vec<f64>> = vec![Vec::new(); exog_ix.len()];
    for row in rdr.records() {
        let row = row.map_err(|e| parse_err(path, e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let field = |i: usize| row.get(i).unwrap_or("");
        let month: YearMonth = field(date_ix).parse().map_err(|_| parse_err(path, line, format!("bad date {:?}", field(date_ix))))?;
        if let Some(p) = prev {
            if month != p.add_months(1) {
                return Err(BenchError::NonContiguousMonths { path: path.into(), line, expected: p.add_months(1).to_string(), found: month.to_string() });
            }
        }
        let number = |i: usize, what: &str| -> Result<f64> {
            let raw = field(i);
            raw.parse::<f64>().ok().filter(|v| v.is_finite()).ok_or_else(|| parse_err(path, line, format!("{what}: not a finite number {raw:?}")))
        };
        let value = number(value_ix, &schema.value_column)?;
        if value < 0.0 {
            return Err(BenchError::NegativeSales { path: path.into(), line, value });
        }
        values.push(value);
        for (col, (&i, spec)) in exog.iter_mut().zip(exog_ix.iter().zip(&schema.exog)) {
            col.push(number(i, &spec.name)?);
        }
        start.get_or_insert(month);
        prev = Some(month);
    }
    let start = start.ok_or_else(|| parse_err(path, 2, "no data rows"))?;
    let ctx = |e| BenchError::core(format!("dataset {}", schema.id), e);
    let series = TimeSeries::new(schema.id.clone(), start, values).map_err(ctx)?;
    let table = if schema.exog.is_empty() {
        None
    } else {
        let columns = schema
            .exog
            .iter()
            .zip(exog)
            .map(|(s, values)| ExogColumn { name: s.name.clone(), category: s.category, unit: s.unit.clone(), values })
            .collect();
        Some(ExogenousTable::new(start, columns).map_err(ctx)?)
    };
    Dataset::new(series, table, schema.beta, schema.location.clone()).map_err(ctx)
}

/// Schema matching [`write_dataset_csv`] output for `dataset`.
pub fn schema_of(dataset: &Dataset) -> DatasetSchema {
    DatasetSchema {
        id: dataset.id().to_string(),
        date_column: "date".into(),
        value_column: "value".into(),
        exog: dataset
            .exog()
            .map(|t| t.columns().iter().map(|c| ExogSpec { name: c.name.clone(), category: c.category, unit: c.unit.clone() }).collect())
            .unwrap_or_default(),
        beta: dataset.beta(),
        location: dataset.location().to_string(),
    }
}

fn writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| BenchError::io(dir, e))?;
    }
    let file = fs::File::create(path).map_err(|e| BenchError::io(path, e))?;
    Ok(csv::Writer::from_writer(file))
}

/// Writes rows to a CSV file with the given header.
pub fn write_table<I, R>(path: &Path, header: &[&str], rows: I) -> Result<()>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let io = |e: csv::Error| BenchError::io(path, e.into());
    let mut w = writer(path)?;
    w.write_record(header).map_err(io)?;
    for row in rows {
        w.write_record(row.into_iter().collect::<Vec<_>>()).map_err(io)?;
    }
    w.flush().map_err(|e| BenchError::io(path, e))
}

pub fn write_dataset_csv(dataset: &Dataset, path: &Path) -> Result<()> {
    let mut header = vec!["date", "value"];
    let cols: Vec<&ExogColumn> = dataset.exog().map(|t| t.columns().iter().collect()).unwrap_or_default();
    header.extend(cols.iter().map(|c| c.name.as_str()));
    let s = dataset.series();
    let rows = (0..s.len()).map(|t| {
        let mut row = vec![s.month_at(t).to_string(), num(s.values()[t])];
        row.extend(cols.iter().map(|c| num(c.values[t])));
        row
    });
    write_table(path, &header, rows)
}

pub const RECORDS_HEADER: [&str; 12] =
    ["dataset", "model", "origin", "period", "horizon", "forecast", "actual", "abs_pe", "squared_error", "scaled_error", "profit", "features"];
pub const TIMINGS_HEADER: [&str; 4] = ["dataset", "model", "origin", "compute_seconds"];

/// Forecast records without timings, so identical runs give identical files.
pub fn write_records(records: &[ForecastRecord], path: &Path) -> Result<()> {
    write_table(
        path,
        &RECORDS_HEADER,
        records.iter().map(|r| {
            vec![
                r.dataset.clone(),
                r.model.clone(),
                r.origin.to_string(),
                r.period.to_string(),
                r.horizon.to_string(),
                num(r.forecast),
                num(r.actual),
                num(r.abs_pe),
                num(r.squared_error),
                num(r.scaled_error),
                num(r.profit),
                r.selected_features.join(";"),
            ]
        }),
    )
}

pub fn write_timings(records: &[ForecastRecord], path: &Path) -> Result<()> {
    write_table(
        path,
        &TIMINGS_HEADER,
        records.iter().map(|r| vec![r.dataset.clone(), r.model.clone(), r.origin.to_string(), num(r.compute_seconds)]),
    )
}

fn check_header(found: &[String], expected: &[&str], path: &Path) -> Result<()> {
    if found.iter().map(String::as_str).ne(expected.iter().copied()) {
        return Err(parse_err(path, 1, format!("expected header {}", expected.join(","))));
    }
    Ok(())
}

/// Reads a records file; `compute_seconds` is 0 until joined with timings.
pub fn read_records(path: &Path) -> Result<Vec<ForecastRecord>> {
    let mut rdr = reader(path)?;
    check_header(&headers(&mut rdr, path)?, &RECORDS_HEADER, path)?;
    let mut out = Vec::new();
    for row in rdr.records() {
        let row = row.map_err(|e| parse_err(path, e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let f = |i: usize| row.get(i).unwrap_or("");
        let num = |i: usize| f(i).parse::<f64>().map_err(|_| parse_err(path, line, format!("{}: bad number {:?}", RECORDS_HEADER[i], f(i))));
        let int = |i: usize| f(i).parse::<usize>().map_err(|_| parse_err(path, line, format!("{}: bad integer {:?}", RECORDS_HEADER[i], f(i))));
        out.push(ForecastRecord {
            dataset: f(0).into(),
            model: f(1).into(),
            origin: int(2)?,
            period: f(3).parse().map_err(|_| parse_err(path, line, format!("bad period {:?}", f(3))))?,
            horizon: int(4)? as u32,
            forecast: num(5)?,
            actual: num(6)?,
            compute_seconds: 0.0,
            selected_features: if f(11).is_empty() { Vec::new() } else { f(11).split(';').map(String::from).collect() },
            abs_pe: num(7)?,
            squared_error: num(8)?,
            scaled_error: num(9)?,
            profit: num(10)?,
        });
    }
    Ok(out)
}

/// Fills `compute_seconds` from a timings file, keyed by (dataset, model, origin).
pub fn join_timings(records: &mut [ForecastRecord], path: &Path) -> Result<()> {
    let mut rdr = reader(path)?;
    check_header(&headers(&mut rdr, path)?, &TIMINGS_HEADER, path)?;
    let mut map = HashMap::new();
    for row in rdr.records() {
        let row = row.map_err(|e| parse_err(path, 0, e.to_string()))?;
        let line = row.position().map_or(0, |p| p.line() as usize);
        let origin: usize = row[2].parse().map_err(|_| parse_err(path, line, "bad origin"))?;
        let secs: f64 = row[3].parse().map_err(|_| parse_err(path, line, "bad seconds"))?;
        map.insert((row[0].to_string(), row[1].to_string(), origin), secs);
    }
    for r in records {
        if let Some(s) = map.get(&(r.dataset.clone(), r.model.clone(), r.origin)) {
            r.compute_seconds = *s;
        }
    }
    Ok(())
}

/// Shortest round-tripping text for a float, in scientific notation when tiny or huge.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}

fn opt(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_failures(failures: &[Failure], path: &Path) -> Result<()> {
    write_table(
        path,
        &["dataset", "model", "step", "origin", "stage", "message"],
        failures.iter().map(|f| vec![f.dataset.clone(), f.model.to_string(), f.step.to_string(), opt(f.origin), f.stage.to_string(), f.message.clone()]),
    )
}

pub fn write_tuning(tuning: &[TuningChoice], path: &Path) -> Result<()> {
    write_table(
        path,
        &["dataset", "model", "hyper", "validation_profit", "evaluated", "failed", "features"],
        tuning.iter().map(|t| {
            vec![
                t.dataset.clone(),
                t.model.to_string(),
                t.hyper.to_string(),
                num(t.profit),
                t.evaluated.to_string(),
                t.failed.to_string(),
                t.features.join(";"),
            ]
        }),
    )
}

pub fn write_selections(events: &[SelectionEvent], path: &Path) -> Result<()> {
    write_table(
        path,
        &["dataset", "model", "step", "origin", "train_end", "ranking", "prefix_profits", "features", "error"],
        events.iter().map(|e| {
            vec![
                e.dataset.clone(),
                e.model.to_string(),
                e.step.to_string(),
                e.origin.to_string(),
                e.train_end.to_string(),
                e.ranking.join(";"),
                e.profits.iter().map(|p| num(*p)).collect::<Vec<_>>().join(";"),
                e.features.join(";"),
                e.error.clone().unwrap_or_default(),
            ]
        }),
    )
}

pub fn write_metrics(summaries: &[(String, ModelId, MetricSummary)], path: &Path) -> Result<()> {
    write_table(
        path,
        &["dataset", "model", "mape", "rmse", "mase", "total_profit", "total_seconds"],
        summaries.iter().map(|(d, m, s)| {
            vec![d.clone(), m.to_string(), num(s.mape), num(s.rmse), num(s.mase), num(s.total_profit), num(s.total_seconds)]
        }),
    )
}

/// Every run artefact except the statistics, written under `dir`.
pub fn write_run(result: &RunResult, dir: &Path) -> Result<Vec<PathBuf>> {
    let files = [
        ("records.csv", write_records(&result.records, &dir.join("records.csv"))),
        ("timings.csv", write_timings(&result.records, &dir.join("timings.csv"))),
        ("failures.csv", write_failures(&result.failures, &dir.join("failures.csv"))),
        ("tuning.csv", write_tuning(&result.tuning, &dir.join("tuning.csv"))),
        ("features.csv", write_selections(&result.selections, &dir.join("features.csv"))),
        ("metrics.csv", write_metrics(&result.summaries, &dir.join("metrics.csv"))),
    ];
    let mut out = Vec::new();
    for (name, res) in files {
        res?;
        out.push(dir.join(name));
    }
    Ok(out)
}
