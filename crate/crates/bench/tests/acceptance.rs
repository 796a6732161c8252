//! Acceptance criteria 1 to 11, one PASS/FAIL line each. Runs without the
//! libtest harness so the lines are visible under `cargo test`.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use profitcast::cli::DEFAULT_ROSTER;
use profitcast::harness::{run_backtest, RunPlan, RunResult};
use profitcast::io::write_records;
use profitcast::report::{analyze, criterion_stats};
use profitcast::synth::{public_corpus, synthetic_corpus};
use profitcast_core::featsel::{mrmr_rank_columns, wrapper_select};
use profitcast_core::metrics::{expected_profit, mase, ProfitParams};
use profitcast_core::models::{fit, fit_css, holt_winters_fit, ArmaOrders, ForecasterSpec, Hyper, Mlp, ModelId, TrainWindow};
use profitcast_core::preprocess::{adf_default_max_lag, adf_test, ocsb_test, LagMatrix};
use profitcast_core::series::{Category, Dataset, ExogColumn, ExogenousTable, ForecastRecord, TimeSeries, YearMonth};
use profitcast_core::stats::tukey::{simulate_range_quantiles, table_quantile, TABLE_ALPHAS};
use profitcast_core::stats::{friedman, nemenyi, Criterion, Partition, RankMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn within(elapsed: Duration, limit: Duration) -> bool {
    elapsed <= limit
}

fn gauss(rng: &mut ChaCha8Rng) -> f64 {
    rng.sample(StandardNormal)
}

fn c1_profit() -> Outcome {
    let p = ProfitParams::default();
    let cases = [(100.0, 101.0, 101.0), (100.0, 99.0, 99.0), (100.0, 110.0, 93.5)];
    let worst = cases.iter().map(|&(a, f, want)| (expected_profit(a, f, 1.0, &p).unwrap() - want).abs()).fold(0.0, f64::max);
    // Outside the band and up to |PE| = 1/α profit must not rise as |PE| grows.
    let actual = 250.0;
    let reach = 1.0 / p.alpha() - 1.0;
    let mut violations = 0;
    let mut prev_over: Option<f64> = None;
    let mut prev_under: Option<f64> = None;
    for i in 0..10_000 {
        let step = i as f64 / 10_000.0;
        let pe = 1.0 + reach * step;
        let over = actual * (1.0 + pe / 100.0);
        let under = actual * (1.0 - pe / 100.0);
        let po = expected_profit(actual, over, 1.7, &p).unwrap();
        let pu = expected_profit(actual, under, 1.7, &p).unwrap();
        violations += prev_over.is_some_and(|q| po > q + 1e-9) as usize + prev_under.is_some_and(|q| pu > q + 1e-9) as usize;
        prev_over = Some(po);
        prev_under = Some(pu);
    }
    outcome(worst <= 1e-12 && violations == 0, format!("max example error {worst:e}, {violations} monotonicity violations in 1e4 points per side, 1 < |PE| ≤ {:.1}", 1.0 / p.alpha()))
}

fn c2_wrapper() -> Outcome {
    let params = ProfitParams::default();
    let spec = ForecasterSpec::new(ModelId::LrMulti, Hyper::Lr { lags: 2 }, 0).unwrap();
    let (n, train_end, val_len) = (96, 72, 12);
    let mut agree = 0;
    for seed in 0..25 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let cols: Vec<Vec<f64>> = (0..5).map(|_| (0..n).map(|_| gauss(&mut rng)).collect()).collect();
        let y: Vec<f64> = (0..n).map(|t| 100.0 + 4.0 * cols[0][t] + 2.0 * cols[2][t] + 5.0 * gauss(&mut rng)).collect();
        let start = YearMonth::new(2000, 1).unwrap();
        let names: Vec<String> = (0..5).map(|i| format!("x{i}")).collect();
        let columns = names.iter().zip(&cols).map(|(nm, v)| ExogColumn { name: nm.clone(), category: Category::Macro, unit: String::new(), values: v.clone() }).collect();
        let ds = Dataset::new(TimeSeries::new("w", start, y.clone()).unwrap(), Some(ExogenousTable::new(start, columns).unwrap()), 1.3, "x").unwrap();
        let col_refs: Vec<&[f64]> = cols.iter().map(|c| &c[..train_end]).collect();
        let ranking = mrmr_rank_columns(&names, &col_refs, &y[..train_end], 5).unwrap();
        let got = wrapper_select(&ranking, &spec, &ds, train_end, val_len, &params).unwrap();

        // Exhaustive prefix evaluation with the profit formula written out.
        let mut best = (0, f64::NEG_INFINITY);
        for i in 1..=5 {
            let prefix = &ranking.names[..i];
            let mut total = 0.0;
            for end in train_end..train_end + val_len {
                let f = fit(&spec, TrainWindow::new(&ds, end).unwrap(), prefix).unwrap().forecast_one();
                let pe = (y[end] - f) / y[end] * 100.0;
                total += if (-1.0..=1.0).contains(&pe) { 1.3 * f } else { (1.0 - 0.015 * pe.abs()) * 1.3 * f };
            }
            if total > best.1 {
                best = (i, total);
            }
        }
        agree += (got.best == best.0 && (got.profits[best.0 - 1] - best.1).abs() < 1e-9 * best.1.abs()) as usize;
    }
    outcome(agree == 25, format!("{agree}/25 seeds match the exhaustive prefix evaluation"))
}

fn consistent(k: usize, n: usize) -> RankMatrix {
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..k).map(|j| j as f64).collect()).collect();
    RankMatrix::from_values((0..k).map(|j| format!("m{j}")).collect(), &rows, false).unwrap()
}

fn c3_friedman() -> Outcome {
    let mut worst = 0.0f64;
    for (k, n) in [(3, 3), (5, 10), (10, 20)] {
        let f = friedman(&consistent(k, n)).unwrap();
        worst = worst.max((f.statistic - (n * (k - 1)) as f64).abs());
    }
    let ties = RankMatrix::from_values(vec!["a".into(), "b".into(), "c".into()], &vec![vec![1.0; 3]; 8], false).unwrap();
    let tie_stat = friedman(&ties).unwrap().statistic;
    outcome(worst < 1e-9 && tie_stat.abs() < 1e-12, format!("max |χ² − N(k−1)| {worst:e}, all-ties χ² {tie_stat:e}"))
}

fn c4_nemenyi() -> Outcome {
    let mut worst_cd = 0.0f64;
    for (k, n) in [(3, 10), (5, 24), (10, 240), (26, 840)] {
        let cd = nemenyi(&consistent(k, n), 0.05).unwrap().cd;
        let q = table_quantile(0.05, k).unwrap();
        let oracle = q / 2f64.sqrt() * (k as f64 * (k as f64 + 1.0) / (6.0 * n as f64)).sqrt();
        worst_cd = worst_cd.max((cd - oracle).abs());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let rows: Vec<Vec<f64>> = (0..30).map(|_| (0..7).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
    let rm = RankMatrix::from_values((0..7).map(|j| format!("m{j}")).collect(), &rows, false).unwrap();
    let p = nemenyi(&rm, 0.05).unwrap().p_values;
    let asym = (0..7).flat_map(|i| (0..7).map(move |j| (i, j))).map(|(i, j)| (p[i][j] - p[j][i]).abs()).fold(0.0, f64::max);

    // A fresh, smaller Monte-Carlo run must agree with the embedded table.
    let draws = 400_000;
    let t = Instant::now();
    let sim = simulate_range_quantiles(10, &TABLE_ALPHAS, draws, &mut ChaCha8Rng::seed_from_u64(77));
    let elapsed = t.elapsed();
    let full_estimate = elapsed.as_secs_f64() * 1e7 / draws as f64;
    let drift = sim.iter().enumerate().map(|(i, row)| (row[1] / table_quantile(0.05, i + 2).unwrap() - 1.0).abs()).fold(0.0, f64::max);
    outcome(
        worst_cd < 1e-12 && asym <= 1e-12 && drift < 0.01 && full_estimate < 300.0,
        format!("CD error {worst_cd:e}, p asymmetry {asym:e}, fresh MC vs table {:.3}%, full table ≈ {full_estimate:.0} s", drift * 100.0),
    )
}

fn simulate_ar(coef: f64, lag: usize, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let burn = 200;
    let mut y = vec![0.0; n + burn];
    for t in lag..y.len() {
        y[t] = coef * y[t - lag] + gauss(rng);
    }
    y.split_off(burn)
}

fn c5_sarima() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(300);
    let ar = (0..50).filter(|_| {
        let f = fit_css(&simulate_ar(0.7, 1, 300, &mut rng), ArmaOrders::new(1, 0, 0, 0), true).unwrap();
        (0.6..=0.8).contains(&f.ar[0])
    });
    let ar = ar.count();
    let sar = (0..50)
        .filter(|_| {
            let f = fit_css(&simulate_ar(0.8, 12, 300, &mut rng), ArmaOrders::new(0, 0, 1, 0), true).unwrap();
            (0.65..=0.95).contains(&f.sar[0])
        })
        .count();
    outcome(ar >= 45 && sar >= 45, format!("φ=0.7 recovered in {ar}/50, Φ=0.8 recovered in {sar}/50"))
}

fn c6_holt_winters() -> Outcome {
    let season = [3.0, -1.0, 4.0, 1.0, -5.0, 9.0, -2.0, 6.0, -5.0, 3.0, -5.0, -8.0];
    let y: Vec<f64> = (0..96).map(|t| 50.0 + 0.8 * t as f64 + season[t % 12]).collect();
    let worst = (36..96).map(|n| (holt_winters_fit(&y[..n]).unwrap().forecast() - y[n]).abs()).fold(0.0, f64::max);
    outcome(worst < 1e-3, format!("max one-step error after burn-in {worst:e}"))
}

fn c7_mase() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let len = rng.random_range(24..120);
        let insample: Vec<f64> = (0..len).map(|_| rng.random_range(10.0..500.0)).collect();
        let h = rng.random_range(1..30);
        let records: Vec<ForecastRecord> = (0..h)
            .map(|i| {
                let (actual, forecast) = (rng.random_range(10.0..500.0), rng.random_range(0.0..600.0));
                ForecastRecord {
                    dataset: "d".into(),
                    model: "m".into(),
                    origin: len + i,
                    period: YearMonth::new(2000, 1).unwrap(),
                    horizon: 1,
                    forecast,
                    actual,
                    compute_seconds: 0.0,
                    selected_features: Vec::new(),
                    abs_pe: 0.0,
                    squared_error: 0.0,
                    scaled_error: 0.0,
                    profit: 0.0,
                }
            })
            .collect();
        let mut denom = 0.0;
        for t in 12..len {
            denom += (insample[t] - insample[t - 12]).abs();
        }
        denom /= (len - 12) as f64;
        let oracle = records.iter().map(|r| (r.actual - r.forecast).abs()).sum::<f64>() / denom;
        let got = mase(&records, &insample, 12).unwrap();
        worst = worst.max((got - oracle).abs() / oracle.max(1.0));
    }
    outcome(worst < 1e-10, format!("max relative deviation {worst:e} over 100 instances"))
}

fn c8_mlp() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let mut rng = ChaCha8Rng::seed_from_u64(800 + seed);
        let (inputs, hidden, rows) = (rng.random_range(1..6), rng.random_range(1..8), rng.random_range(10..30));
        let x: Vec<Vec<f64>> = (0..rows).map(|_| (0..inputs).map(|_| rng.random_range(0.0..1.0)).collect()).collect();
        let y = (0..rows).map(|_| rng.random_range(0.0..1.0)).collect();
        let m = LagMatrix::from_rows(&x, y).unwrap();
        let mut net = Mlp::init(inputs, hidden, &mut rng);
        let all: Vec<usize> = (0..rows).collect();
        let (_, grad) = net.loss_and_grad(&m, &all);
        let base = net.params().to_vec();
        let h = 1e-6;
        for k in 0..base.len() {
            let mut p = base.clone();
            p[k] += h;
            net.set_params(&p);
            let up = net.loss_and_grad(&m, &all).0;
            p[k] -= 2.0 * h;
            net.set_params(&p);
            let down = net.loss_and_grad(&m, &all).0;
            net.set_params(&base);
            let fd = (up - down) / (2.0 * h);
            worst = worst.max((fd - grad[k]).abs() / fd.abs().max(grad[k].abs()).max(1e-6));
        }
    }
    outcome(worst < 1e-4, format!("max relative gradient error {worst:e} over 20 networks"))
}

fn c9_unit_root() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let lag = adf_default_max_lag(200);
    let power = (0..100).filter(|_| adf_test(&simulate_ar(0.5, 1, 200, &mut rng), lag).unwrap().stationary).count();
    let size = (0..100).filter(|_| adf_test(&simulate_ar(1.0, 1, 200, &mut rng), lag).unwrap().stationary).count();
    let mut seasonal_power = 0;
    let mut seasonal_size = 0;
    for _ in 0..100 {
        let srw: Vec<f64> = simulate_ar(1.0, 12, 144, &mut rng);
        seasonal_power += ocsb_test(&srw).unwrap().seasonal_d() as usize;
        let noise: Vec<f64> = (0..144).map(|_| gauss(&mut rng)).collect();
        seasonal_size += ocsb_test(&noise).unwrap().seasonal_d() as usize;
    }
    outcome(
        power >= 90 && size <= 10 && seasonal_power >= 90 && seasonal_size <= 10,
        format!("ADF power {power}% size {size}%, OCSB power {seasonal_power}% size {seasonal_size}%"),
    )
}

fn corpus_run() -> RunResult {
    let datasets: Vec<Dataset> = synthetic_corpus(2018).into_iter().chain(public_corpus(2018)).collect();
    let mut plan = RunPlan::new(datasets, DEFAULT_ROSTER.to_vec());
    plan.seed = 2018;
    plan.jobs = std::thread::available_parallelism().map_or(1, |n| n.get());
    run_backtest(&plan).unwrap()
}

fn c10_end_to_end(result: &RunResult) -> Outcome {
    let summary = analyze(&result.records).unwrap();
    let contrast = |c: Criterion| summary.contrasts.iter().find(|x| x.criterion == c && x.partition == Partition::Seasonal).unwrap().result.clone().unwrap();
    let (profit, mape) = (contrast(Criterion::Profit), contrast(Criterion::Mape));
    let a = [&profit, &mape].iter().all(|r| r.inside_better && r.test.p_value < 0.05);

    let synthetic: Vec<ForecastRecord> = result.records.iter().filter(|r| r.dataset.starts_with("synth")).cloned().collect();
    let stats = criterion_stats(&synthetic, Criterion::Profit).unwrap();
    let mut order: Vec<usize> = (0..stats.models.len()).collect();
    order.sort_by(|&i, &j| stats.average_ranks[i].total_cmp(&stats.average_ranks[j]));
    let top: Vec<&str> = order[..3].iter().map(|&i| stats.models[i].as_str()).collect();
    let b = top.contains(&"HW") && top.contains(&"SARIMA");
    outcome(
        a && b && result.failures.is_empty(),
        format!(
            "seasonal vs rest profit rank {:.3} vs {:.3} (p {:.2e}), MAPE rank {:.3} vs {:.3} (p {:.2e}); synthetic profit top 3 {top:?}; {} records, {} failures",
            profit.inside_rank,
            profit.outside_rank,
            profit.test.p_value,
            mape.inside_rank,
            mape.outside_rank,
            mape.test.p_value,
            result.records.len(),
            result.failures.len()
        ),
    )
}

fn c11_determinism(first: &RunResult, second: &RunResult) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    write_records(&first.records, &a).unwrap();
    write_records(&second.records, &b).unwrap();
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    outcome(a == b && !a.is_empty(), format!("records.csv {} bytes, identical: {}", a.len(), a == b))
}

fn main() -> ExitCode {
    let mut all_pass = true;
    let mut report = |id: &str, limit: Duration, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        let elapsed = t.elapsed();
        let pass = o.pass && within(elapsed, limit);
        all_pass &= pass;
        println!("criterion {id:>2}: {} ({:.2} s, limit {} s) {}", if pass { "PASS" } else { "FAIL" }, elapsed.as_secs_f64(), limit.as_secs(), o.detail);
    };
    let s = Duration::from_secs;
    report("1", s(1), &mut c1_profit);
    report("2", s(30), &mut c2_wrapper);
    report("3", s(1), &mut c3_friedman);
    report("4", s(300), &mut c4_nemenyi);
    report("5", s(120), &mut c5_sarima);
    report("6", s(5), &mut c6_holt_winters);
    report("7", s(5), &mut c7_mase);
    report("8", s(30), &mut c8_mlp);
    report("9", s(120), &mut c9_unit_root);

    let t = Instant::now();
    let first = corpus_run();
    let run_time = t.elapsed();
    report("10", s(600), &mut || {
        let mut o = c10_end_to_end(&first);
        o.pass &= within(run_time, s(600));
        o.detail = format!("run {:.1} s; {}", run_time.as_secs_f64(), o.detail);
        o
    });
    report("11", s(1200), &mut || {
        let t = Instant::now();
        let second = corpus_run();
        let mut o = c11_determinism(&first, &second);
        o.pass &= within(run_time + t.elapsed(), s(1200));
        o
    });
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
