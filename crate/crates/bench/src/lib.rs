//! Backtest harness, dataset and report IO, charts and the `profitcast` CLI
//! built on `profitcast-core`.

pub mod chart;
pub mod cli;
pub mod config;
pub mod error;
pub mod harness;
pub mod io;
pub mod report;
pub mod synth;

pub use error::{BenchError, Result};
