//! Estimate the degree-centrality rank of nodes in large undirected graphs
//! from small samples.
//!
//! The crate is organised bottom-up:
//!
//! - [`graph`]: CSR graph storage, BA/ER generators, edge-list ingestion and
//!   the exact rank table used as ground truth.
//! - [`sampling`]: uniform, random-walk, Metropolis–Hastings and smoothed
//!   random-walk samplers producing [`SampleSet`]s.
//! - [`params`]: network size, degree and power-law exponent estimators.
//! - [`rank`]: the PL, US, MH, RW and PD rank estimators.
//! - [`eval`]: error metrics and the per-degree evaluation protocol.

pub mod error;
pub mod eval;
pub mod graph;
pub mod params;
pub mod rank;
pub mod sampling;
pub mod seed;

pub use error::{Error, Result};
pub use graph::{exact_degree_ranks, Graph, RankTable};
pub use params::NetworkParams;
pub use rank::{Method, RankEstimate, RankEstimator};
pub use sampling::{SampleSet, SamplingMethod};
