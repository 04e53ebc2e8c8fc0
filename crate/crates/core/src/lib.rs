//! Numerical laboratory for k-means and the clustering axioms: consistency
//! transforms, separation certificates, exhaustive oracles and the dataset
//! constructions behind them.

pub mod constructions;
pub mod data;
pub mod error;
pub mod harness;
pub mod kmeans;
pub mod par;
pub mod rng;
pub mod separation;
pub mod transforms;

pub use error::{Error, Result};
