//! The run configuration embedded in every output file.

use degrank::params::{NetworkKind, DEFAULT_MIN_GAP_FRACTION, DEFAULT_MIN_GAP_STEPS};
use degrank::Method;
use serde::Serialize;

pub const RUN_CONFIG_FORMAT: &str = "degrank-run/1";

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub format: &'static str,
    pub version: &'static str,
    pub command: String,
    pub graph: Option<String>,
    pub methods: Vec<Method>,
    pub sample_fraction: f64,
    pub sample_size: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub output: Option<String>,
    pub params: String,
    pub size_override: Option<f64>,
    pub network_kind: NetworkKind,
    pub min_gap_fraction: f64,
    pub min_gap_steps: usize,
    pub smoothing_c: Option<f64>,
    pub repetitions: usize,
    pub walk_length: Option<usize>,
    pub neighbor_collisions: bool,
    pub round: bool,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        Self { command: command.to_string(), ..Self::default() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("run config serializes")
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            format: RUN_CONFIG_FORMAT,
            version: env!("CARGO_PKG_VERSION"),
            command: String::new(),
            graph: None,
            methods: Vec::new(),
            sample_fraction: 0.01,
            sample_size: None,
            trials: 20,
            seed: 0,
            output: None,
            params: "estimated".into(),
            size_override: None,
            network_kind: NetworkKind::RealWorld,
            min_gap_fraction: DEFAULT_MIN_GAP_FRACTION,
            min_gap_steps: DEFAULT_MIN_GAP_STEPS,
            smoothing_c: None,
            repetitions: 10,
            walk_length: None,
            neighbor_collisions: true,
            round: false,
        }
    }
}
