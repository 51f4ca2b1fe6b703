//! Error metrics and the per-degree evaluation protocol.
//!
//! A trial draws one sample with the method's sampler, estimates the rank of
//! every distinct degree present in the graph and compares it with the exact
//! rank. Per-degree errors are averaged over trials, then over degrees.

use crate::error::{Error, Result};
use crate::graph::{exact_degree_ranks, generate_ba, Graph, RankTable};
use crate::params::{estimate_network_params, NetworkKind, NetworkParams, ParamConfig, ParamSource};
use crate::rank::{Method, RankEstimator};
use crate::sampling::{sample_mhrw, sample_rw, sample_uniform, SampleSet};
use crate::seed::derive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

pub const REPORT_CSV_FORMAT: &str = "degrank-report/1";

/// `|est - act|`.
pub fn abs_error(est: f64, act: usize) -> f64 {
    (est - act as f64).abs()
}

/// Absolute error scaled by network size and by the node's percentile:
/// `|est - act| / n * (n - act + 1) / n * 100`.
pub fn weighted_error(est: f64, act: usize, n: usize) -> Result<f64> {
    if act < 1 || act > n {
        return Err(Error::Domain(format!("actual rank {act} outside [1, {n}]")));
    }
    let n_f = n as f64;
    Ok(abs_error(est, act) / n_f * ((n - act + 1) as f64 / n_f) * 100.0)
}

/// Percentage average absolute error: `mean(errors) / n * 100`.
pub fn paae(abs_errors_by_degree: &[f64], n: usize) -> Result<f64> {
    if abs_errors_by_degree.is_empty() {
        return Err(Error::InvalidParameter("no errors to average".into()));
    }
    let mean = abs_errors_by_degree.iter().sum::<f64>() / abs_errors_by_degree.len() as f64;
    Ok(mean / n as f64 * 100.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeError {
    pub degree: usize,
    pub act_rank: usize,
    pub mean_est_rank: f64,
    pub mean_abs_err: f64,
    pub mean_wtd_err: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorReport {
    pub method: Method,
    pub param_source: ParamSource,
    pub node_count: usize,
    pub per_degree: Vec<DegreeError>,
    pub paae: f64,
    pub avg_wtd: f64,
    pub trials: usize,
    pub sample_fraction: f64,
    pub sample_size: usize,
    pub seeds: Vec<u64>,
}

impl ErrorReport {
    /// Recomputes `(paae, avg_wtd)` from the per-degree rows.
    pub fn recompute_summary(&self) -> Result<(f64, f64)> {
        let abs: Vec<f64> = self.per_degree.iter().map(|r| r.mean_abs_err).collect();
        let wtd = self.per_degree.iter().map(|r| r.mean_wtd_err).sum::<f64>() / self.per_degree.len() as f64;
        Ok((paae(&abs, self.node_count)?, wtd))
    }

    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "method": self.method,
            "param_source": self.param_source,
            "node_count": self.node_count,
            "paae": self.paae,
            "avg_wtd": self.avg_wtd,
            "trials": self.trials,
            "sample_fraction": self.sample_fraction,
            "sample_size": self.sample_size,
            "seeds": self.seeds,
        })
    }

    /// One row per degree after a `#`-prefixed JSON header carrying `meta`
    /// merged with the report summary.
    pub fn write_csv<W: Write>(&self, mut w: W, meta: &serde_json::Value) -> Result<()> {
        let header = serde_json::json!({
            "format": REPORT_CSV_FORMAT,
            "summary": self.summary_json(),
            "config": meta,
        });
        writeln!(w, "# {header}")?;
        writeln!(w, "degree,act_rank,mean_est_rank,mean_abs_err,mean_wtd_err")?;
        for r in &self.per_degree {
            writeln!(w, "{},{},{},{},{}", r.degree, r.act_rank, r.mean_est_rank, r.mean_abs_err, r.mean_wtd_err)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub sample_fraction: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self { sample_fraction: 0.01, trials: 20, seed: 0 }
    }
}

/// A graph prepared for repeated experiments: exact ranks, distinct degrees
/// and the largest component (where walks start) are computed once.
pub struct Experiment<'g> {
    graph: &'g Graph,
    ranks: RankTable,
    degrees: Vec<usize>,
    component: Vec<usize>,
}

impl<'g> Experiment<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self {
            graph,
            ranks: exact_degree_ranks(graph),
            degrees: graph.distinct_degrees(),
            component: graph.largest_component(),
        }
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn ranks(&self) -> &RankTable {
        &self.ranks
    }

    pub fn component(&self) -> &[usize] {
        &self.component
    }

    /// Parameters for this graph: the true values, or the walk-based
    /// pipeline with walks of `walk_length` steps.
    pub fn params(&self, source: ParamSource, config: &ParamConfig) -> Result<NetworkParams> {
        match source {
            ParamSource::Actual => NetworkParams::actual(self.graph),
            ParamSource::Estimated => estimate_network_params(self.graph, config),
        }
    }

    pub fn sample_size(&self, fraction: f64) -> Result<usize> {
        if !(fraction > 0.0 && fraction <= 1.0) {
            return Err(Error::InvalidParameter(format!("sample fraction must lie in (0, 1], got {fraction}")));
        }
        Ok(((fraction * self.graph.node_count() as f64).round() as usize).max(1))
    }

    /// Draws the sample a method consumes. Uniform sampling at fraction 1
    /// is a census (every node once). Walks start uniformly in the largest
    /// component.
    pub fn draw_sample(&self, method: Method, fraction: f64, seed: u64) -> Result<Option<SampleSet>> {
        self.draw_sample_sized(method, self.sample_size(fraction)?, seed)
    }

    /// As [`Experiment::draw_sample`] with an explicit sample size; a uniform
    /// sample of size `n` is a census.
    pub fn draw_sample_sized(&self, method: Method, s: usize, seed: u64) -> Result<Option<SampleSet>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let start = self.component[rng.gen_range(0..self.component.len())];
        let walk_seed = derive(seed, 1);
        Ok(match method {
            Method::Pl | Method::Pd => None,
            Method::Us if s == self.graph.node_count() => Some(SampleSet::census(self.graph)),
            Method::Us => Some(sample_uniform(self.graph, s, walk_seed)?),
            Method::Mh => Some(sample_mhrw(self.graph, s, walk_seed, Some(start))?),
            Method::Rw => Some(sample_rw(self.graph, s, walk_seed, Some(start))?),
        })
    }

    /// Estimated rank for every distinct degree, in ascending degree order.
    fn trial(&self, method: Method, params: &NetworkParams, fraction: f64, seed: u64) -> Result<Vec<f64>> {
        let sample = self.draw_sample(method, fraction, seed)?;
        let estimator = RankEstimator::new(method, params, sample.as_ref())?;
        self.degrees.iter().map(|&d| estimator.rank(d)).collect()
    }

    pub fn run(&self, method: Method, params: &NetworkParams, config: &ExperimentConfig) -> Result<ErrorReport> {
        if config.trials == 0 {
            return Err(Error::InvalidParameter("at least one trial is required".into()));
        }
        let sample_size = self.sample_size(config.sample_fraction)?;
        let seeds: Vec<u64> = (0..config.trials as u64).map(|t| derive(config.seed, t)).collect();
        let estimates: Vec<Vec<f64>> = seeds
            .par_iter()
            .map(|&seed| self.trial(method, params, config.sample_fraction, seed))
            .collect::<Result<_>>()?;
        let report = self.aggregate(method, params, config, sample_size, seeds, &estimates)?;
        Ok(report)
    }

    fn aggregate(
        &self,
        method: Method,
        params: &NetworkParams,
        config: &ExperimentConfig,
        sample_size: usize,
        seeds: Vec<u64>,
        estimates: &[Vec<f64>],
    ) -> Result<ErrorReport> {
        let n = self.graph.node_count();
        let trials = estimates.len() as f64;
        let mut per_degree = Vec::with_capacity(self.degrees.len());
        for (i, &degree) in self.degrees.iter().enumerate() {
            let act = self.ranks.rank_for_degree(degree);
            let (mut est_sum, mut abs_sum, mut wtd_sum) = (0.0, 0.0, 0.0);
            for trial in estimates {
                let est = trial[i];
                est_sum += est;
                abs_sum += abs_error(est, act);
                wtd_sum += weighted_error(est, act, n)?;
            }
            per_degree.push(DegreeError {
                degree,
                act_rank: act,
                mean_est_rank: est_sum / trials,
                mean_abs_err: abs_sum / trials,
                mean_wtd_err: wtd_sum / trials,
            });
        }
        let mut report = ErrorReport {
            method,
            param_source: params.provenance.source,
            node_count: n,
            per_degree,
            paae: 0.0,
            avg_wtd: 0.0,
            trials: estimates.len(),
            sample_fraction: config.sample_fraction,
            sample_size,
            seeds,
        };
        (report.paae, report.avg_wtd) = report.recompute_summary()?;
        Ok(report)
    }
}

/// One-shot form of [`Experiment::run`].
pub fn run_experiment(
    g: &Graph,
    method: Method,
    params: &NetworkParams,
    config: &ExperimentConfig,
) -> Result<ErrorReport> {
    Experiment::new(g).run(method, params, config)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub act_rank: usize,
    pub mean_abs_err: f64,
}

/// `(act_rank, mean_abs_err)` rows sorted by rank, for log-log plots.
pub fn error_vs_rank_profile(report: &ErrorReport, ranks: &RankTable) -> Result<Vec<ProfileRow>> {
    if report.node_count != ranks.node_count() {
        return Err(Error::Mismatch(format!(
            "report covers {} nodes, rank table {}",
            report.node_count,
            ranks.node_count()
        )));
    }
    let mut rows = Vec::with_capacity(report.per_degree.len());
    for r in &report.per_degree {
        if ranks.rank_for_degree(r.degree) != r.act_rank {
            return Err(Error::Mismatch(format!("degree {} has a different rank in the rank table", r.degree)));
        }
        rows.push(ProfileRow { act_rank: r.act_rank, mean_abs_err: r.mean_abs_err });
    }
    rows.sort_by_key(|r| r.act_rank);
    Ok(rows)
}

/// Generator settings for one BA graph of a size sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BaSpec {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub method: Method,
    pub paae: f64,
    pub avg_wtd: f64,
}

/// Runs every method on BA graphs of growing size and equal density.
/// Parameters are estimated with walks as long as the rank sample.
pub fn size_sweep(
    specs: &[BaSpec],
    methods: &[Method],
    source: ParamSource,
    config: &ExperimentConfig,
) -> Result<Vec<SweepRow>> {
    if let Some(first) = specs.first() {
        if specs.iter().any(|s| s.k != first.k) {
            return Err(Error::InvalidParameter("size sweep specs must share k".into()));
        }
    }
    let mut rows = Vec::new();
    for spec in specs {
        let g = generate_ba(spec.n, spec.k, spec.seed)?;
        let exp = Experiment::new(&g);
        let walk = exp.sample_size(config.sample_fraction)?.max(100);
        let params =
            exp.params(source, &ParamConfig::new(walk, derive(config.seed, spec.n as u64), NetworkKind::Synthetic))?;
        for &method in methods {
            let report = exp.run(method, &params, config)?;
            rows.push(SweepRow { n: spec.n, method, paae: report.paae, avg_wtd: report.avg_wtd });
        }
    }
    Ok(rows)
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    assert_eq!(xs.len(), ys.len());
    let (rx, ry) = (average_ranks(xs), average_ranks(ys));
    let n = xs.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let mut cov = 0.0;
    let (mut vx, mut vy) = (0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        cov += (a - mx) * (b - my);
        vx += (a - mx).powi(2);
        vy += (b - my).powi(2);
    }
    cov / (vx * vy).sqrt()
}

fn average_ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut ranks = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}
