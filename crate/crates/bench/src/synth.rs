//! Synthetic monthly corpora: trend plus seasonal series and stand-ins shaped
//! like the public Champagne, Car sales and Paper datasets.

use std::f64::consts::PI;

use profitcast_core::series::{Category, Dataset, ExogColumn, ExogenousTable, TimeSeries, YearMonth};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

/// Shape of a public-style stand-in.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublicShape {
    pub id: &'static str,
    pub len: usize,
    pub start: (i32, u8),
    pub beta: f64,
    pub location: &'static str,
    pub level: f64,
    /// Monthly growth rate of the level.
    pub growth: f64,
    /// Month (1..=12) of the seasonal peak.
    pub peak: u8,
    /// Seasonal swing relative to level.
    pub amplitude: f64,
}

pub const PUBLIC_SHAPES: [PublicShape; 3] = [
    PublicShape { id: "champagne", len: 105, start: (1964, 1), beta: 1.0, location: "FR", level: 4500.0, growth: 0.004, peak: 12, amplitude: 0.55 },
    PublicShape { id: "car_sales", len: 156, start: (1960, 1), beta: 2.1, location: "CA", level: 11000.0, growth: 0.006, peak: 5, amplitude: 0.3 },
    PublicShape { id: "paper", len: 120, start: (1963, 1), beta: 1.9, location: "FR", level: 600.0, growth: 0.005, peak: 3, amplitude: 0.15 },
];

pub const SYNTHETIC_LEN: usize = 144;
pub const SYNTHETIC_COUNT: usize = 10;

fn normal(sd: f64) -> Normal<f64> {
    Normal::new(0.0, sd).expect("finite positive sd")
}

fn column(name: &str, category: Category, unit: &str, values: Vec<f64>) -> ExogColumn {
    ExogColumn { name: name.into(), category, unit: unit.into(), values }
}

/// Holidays per month in a stylized calendar; Easter alternates March/April.
fn holidays(month: YearMonth) -> f64 {
    match month.month() {
        1 | 5 => 2.0,
        3 => (month.year() % 2 == 0) as u8 as f64,
        4 => (month.year() % 2 != 0) as u8 as f64,
        7 | 8 | 11 => 1.0,
        12 => 2.0,
        _ => 0.0,
    }
}

fn assemble(id: &str, start: YearMonth, values: Vec<f64>, columns: Vec<ExogColumn>, beta: f64, location: &str) -> Dataset {
    let series = TimeSeries::new(id, start, values).expect("finite synthetic series");
    let table = ExogenousTable::new(start, columns).expect("consistent synthetic table");
    Dataset::new(series, Some(table), beta, location).expect("aligned synthetic dataset")
}

/// Local linear trend with slowly drifting seasonal indices and observation
/// noise, with four drivers (one per category) that track the season or
/// trend but add no information beyond them.
pub fn trend_seasonal(id: &str, seed: u64, len: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = YearMonth::new(2005, 1).expect("valid month");
    let base = rng.random_range(500.0..5000.0);
    let amplitude = rng.random_range(0.2..0.35);
    let mut profile: Vec<f64> = (0..12).map(|_| rng.random_range(-1.0..1.0)).collect();
    let mean = profile.iter().sum::<f64>() / 12.0;
    let spread = profile.iter().map(|p| (p - mean).abs()).fold(0.0, f64::max);
    profile.iter_mut().for_each(|p| *p = amplitude * (*p - mean) / spread);

    let level_shock = normal(0.01 * base);
    let slope_shock = normal(0.0005 * base);
    let season_shock = normal(0.1 * amplitude);
    let obs = normal(0.02 * base);
    let mut level = base;
    let mut slope = base * rng.random_range(0.002..0.008);
    let mut values = Vec::with_capacity(len);
    for t in 0..len {
        profile[t % 12] += season_shock.sample(&mut rng);
        level += slope + level_shock.sample(&mut rng);
        slope += slope_shock.sample(&mut rng);
        values.push((level * (1.0 + profile[t % 12]) + obs.sample(&mut rng)).max(1.0));
    }

    let months: Vec<YearMonth> = (0..len).map(|t| start.add_months(t as i64)).collect();
    let temp_noise = normal(1.5);
    let cpi_noise = normal(0.2);
    let price_noise = normal(0.02);
    let temperature = months.iter().map(|m| 12.0 - 9.0 * (2.0 * PI * (m.month() as f64 - 1.0) / 12.0).cos() + temp_noise.sample(&mut rng)).collect();
    let cpi = (0..len).map(|t| 100.0 + 0.15 * t as f64 + cpi_noise.sample(&mut rng)).collect();
    let mut p = 1.0;
    let price = (0..len)
        .map(|_| {
            p *= 1.0 + price_noise.sample(&mut rng);
            p
        })
        .collect();
    let columns = vec![
        column("temperature", Category::Weather, "degC", temperature),
        column("cpi", Category::Macro, "index", cpi),
        column("holidays", Category::Holiday, "days", months.iter().map(|m| holidays(*m)).collect()),
        column("price", Category::Pricing, "eur", price),
    ];
    assemble(id, start, values, columns, 1.0, "synthetic")
}

/// The ten-series trend plus seasonal corpus.
pub fn synthetic_corpus(seed: u64) -> Vec<Dataset> {
    (0..SYNTHETIC_COUNT).map(|i| trend_seasonal(&format!("synth{:02}", i + 1), seed.wrapping_add(i as u64), SYNTHETIC_LEN)).collect()
}

/// A stand-in with the length, start and β of `shape`, and twelve drivers
/// (three per category). Sales respond to temperature and price.
pub fn public_like(shape: &PublicShape, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = YearMonth::new(shape.start.0, shape.start.1).expect("valid month");
    let n = shape.len;
    let months: Vec<YearMonth> = (0..n).map(|t| start.add_months(t as i64)).collect();
    let phase = |m: YearMonth, peak: u8| (2.0 * PI * (m.month() as f64 - peak as f64) / 12.0).cos();

    let walk = |sd: f64, rng: &mut ChaCha8Rng| -> Vec<f64> {
        let d = normal(sd);
        let mut v = 0.0;
        (0..n)
            .map(|_| {
                v += d.sample(rng);
                v
            })
            .collect()
    };
    let temp_noise = normal(1.5);
    let temperature: Vec<f64> = months.iter().map(|m| 12.0 + 9.0 * phase(*m, 7) + temp_noise.sample(&mut rng)).collect();
    let sunshine: Vec<f64> = months.iter().map(|m| 160.0 + 90.0 * phase(*m, 7) + 25.0 * rng.random_range(-1.0..1.0)).collect();
    let rainfall: Vec<f64> = (0..n).map(|_| rng.random_range(20.0..120.0)).collect();
    let gdp: Vec<f64> = walk(0.3, &mut rng).iter().enumerate().map(|(t, w)| 100.0 + 0.2 * t as f64 + w).collect();
    let unemployment: Vec<f64> = walk(0.1, &mut rng).iter().map(|w| 7.0 + w).collect();
    let confidence: Vec<f64> = walk(1.0, &mut rng).iter().map(|w| w.tanh() * 10.0).collect();
    let public_holidays: Vec<f64> = months.iter().map(|m| holidays(*m)).collect();
    let school_holidays: Vec<f64> = months.iter().map(|m| if matches!(m.month(), 7 | 8) { 20.0 } else if m.month() == 12 { 8.0 } else { 3.0 }).collect();
    let events: Vec<f64> = (0..n).map(|_| (rng.random_range(0.0..1.0) < 0.1) as u8 as f64).collect();
    let price: Vec<f64> = walk(0.01, &mut rng).iter().map(|w| 1.0 + w + 0.05 * rng.random_range(-1.0..1.0)).collect();
    let competitor_price: Vec<f64> = price.iter().map(|p| p * (1.0 + 0.05 * rng.random_range(-1.0..1.0))).collect();
    let promotion: Vec<f64> = (0..n).map(|_| (rng.random_range(0.0..1.0) < 0.15) as u8 as f64).collect();

    let shock = normal(0.04);
    let mut noise = 0.0;
    let values: Vec<f64> = (0..n)
        .map(|t| {
            noise = 0.4 * noise + shock.sample(&mut rng);
            let base = shape.level * (1.0 + shape.growth * t as f64);
            let season = 1.0 + shape.amplitude * phase(months[t], shape.peak);
            let drivers = 1.0 + 0.01 * (temperature[t] - 12.0) - 0.8 * (price[t] - 1.0) + 0.06 * promotion[t];
            (base * season * drivers * (1.0 + noise)).max(1.0)
        })
        .collect();

    let columns = vec![
        column("temperature", Category::Weather, "degC", temperature),
        column("sunshine", Category::Weather, "hours", sunshine),
        column("rainfall", Category::Weather, "mm", rainfall),
        column("gdp", Category::Macro, "index", gdp),
        column("unemployment", Category::Macro, "pct", unemployment),
        column("confidence", Category::Macro, "index", confidence),
        column("public_holidays", Category::Holiday, "days", public_holidays),
        column("school_holidays", Category::Holiday, "days", school_holidays),
        column("events", Category::Holiday, "count", events),
        column("price", Category::Pricing, "eur", price),
        column("competitor_price", Category::Pricing, "eur", competitor_price),
        column("promotion", Category::Pricing, "flag", promotion),
    ];
    assemble(shape.id, start, values, columns, shape.beta, shape.location)
}

/// The three public-style stand-ins.
pub fn public_corpus(seed: u64) -> Vec<Dataset> {
    PUBLIC_SHAPES.iter().enumerate().map(|(i, s)| public_like(s, seed.wrapping_add(1000 + i as u64))).collect()
}
