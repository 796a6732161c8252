#![no_std]
extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod error;
pub mod featsel;
pub mod linalg;
pub mod metrics;
pub mod models;
pub mod optim;
pub mod preprocess;
pub mod series;
pub mod stats;
