//! Node samplers: uniform with replacement, simple random walk,
//! Metropolis–Hastings random walk and smoothed (lazy) random walk.
//!
//! Every walk emits one sample per step, so a rejected MH proposal or a
//! smoothed self-loop repeats the current node in the trace. Walks never
//! leave the component of their start node.

use crate::error::{Error, Result};
use crate::graph::Graph;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::io::{BufRead, Write};

pub const SAMPLE_CSV_FORMAT: &str = "degrank-sample/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMethod {
    Uniform,
    Rw,
    Mhrw,
    Smoothed,
}

impl SamplingMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            SamplingMethod::Uniform => "uniform",
            SamplingMethod::Rw => "rw",
            SamplingMethod::Mhrw => "mhrw",
            SamplingMethod::Smoothed => "smoothed",
        }
    }
}

impl std::str::FromStr for SamplingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "uniform" | "us" => Ok(SamplingMethod::Uniform),
            "rw" => Ok(SamplingMethod::Rw),
            "mhrw" | "mh" => Ok(SamplingMethod::Mhrw),
            "smoothed" => Ok(SamplingMethod::Smoothed),
            other => Err(Error::InvalidParameter(format!("unknown sampling method {other:?}"))),
        }
    }
}

/// Ordered multiset of sampled nodes with their degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    method: SamplingMethod,
    trace: Vec<usize>,
    degrees: Vec<usize>,
    degree_counts: BTreeMap<usize, usize>,
    seed: u64,
    smoothing_c: Option<f64>,
}

impl SampleSet {
    /// Builds a sample from a trace; degrees are looked up in `g`.
    pub fn from_trace(
        g: &Graph,
        method: SamplingMethod,
        trace: Vec<usize>,
        seed: u64,
        smoothing_c: Option<f64>,
    ) -> Result<Self> {
        if let Some(&bad) = trace.iter().find(|&&u| u >= g.node_count()) {
            return Err(Error::InvalidParameter(format!("node {bad} is not in the graph")));
        }
        let degrees = trace.iter().map(|&u| g.degree(u)).collect();
        Self::from_parts(method, trace, degrees, seed, smoothing_c)
    }

    fn from_parts(
        method: SamplingMethod,
        trace: Vec<usize>,
        degrees: Vec<usize>,
        seed: u64,
        smoothing_c: Option<f64>,
    ) -> Result<Self> {
        if trace.is_empty() {
            return Err(Error::InvalidParameter("sample must not be empty".into()));
        }
        if trace.len() != degrees.len() {
            return Err(Error::Mismatch("trace and degree columns differ in length".into()));
        }
        let mut degree_counts = BTreeMap::new();
        for &d in &degrees {
            *degree_counts.entry(d).or_insert(0) += 1;
        }
        Ok(Self { method, trace, degrees, degree_counts, seed, smoothing_c })
    }

    /// Every node exactly once, in id order. Used as the full-sample oracle.
    pub fn census(g: &Graph) -> Self {
        let trace: Vec<usize> = (0..g.node_count()).collect();
        let degrees = g.degrees().collect();
        Self::from_parts(SamplingMethod::Uniform, trace, degrees, 0, None).expect("graph is non-empty")
    }

    pub fn method(&self) -> SamplingMethod {
        self.method
    }

    pub fn trace(&self) -> &[usize] {
        &self.trace
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn size(&self) -> usize {
        self.trace.len()
    }

    /// Sample-side degree histogram, `n'_j`.
    pub fn degree_counts(&self) -> &BTreeMap<usize, usize> {
        &self.degree_counts
    }

    pub fn observed_max_degree(&self) -> usize {
        *self.degree_counts.keys().next_back().expect("non-empty sample")
    }

    pub fn observed_min_degree(&self) -> usize {
        *self.degree_counts.keys().next().expect("non-empty sample")
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn smoothing_c(&self) -> Option<f64> {
        self.smoothing_c
    }

    /// Number of entries with degree strictly greater than `degree`.
    pub fn count_above(&self, degree: usize) -> usize {
        self.degree_counts.range(degree + 1..).map(|(_, &c)| c).sum()
    }

    /// Per-node visit frequencies over `node_count` nodes.
    pub fn frequencies(&self, node_count: usize) -> Vec<f64> {
        let mut freq = vec![0.0; node_count];
        for &u in &self.trace {
            freq[u] += 1.0;
        }
        let s = self.size() as f64;
        freq.iter_mut().for_each(|f| *f /= s);
        freq
    }

    /// CSV with a `#`-prefixed JSON metadata line, then `step,node_id,degree`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        self.write_csv_with_config(w, &serde_json::Value::Null)
    }

    /// As [`SampleSet::write_csv`], embedding `config` in the metadata line
    /// when it is not null.
    pub fn write_csv_with_config<W: Write>(&self, mut w: W, config: &serde_json::Value) -> Result<()> {
        let mut meta = serde_json::json!({
            "format": SAMPLE_CSV_FORMAT,
            "method": self.method,
            "seed": self.seed,
            "smoothing_c": self.smoothing_c,
            "size": self.size(),
        });
        if !config.is_null() {
            meta["config"] = config.clone();
        }
        writeln!(w, "# {meta}")?;
        writeln!(w, "step,node_id,degree")?;
        for (step, (&u, &d)) in self.trace.iter().zip(&self.degrees).enumerate() {
            writeln!(w, "{step},{u},{d}")?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines().enumerate();
        let meta: serde_json::Value = match lines.next() {
            Some((_, line)) => {
                let line = line?;
                let json = line
                    .strip_prefix('#')
                    .ok_or_else(|| Error::Parse { line: 1, message: "missing metadata line".into() })?;
                serde_json::from_str(json.trim()).map_err(|e| Error::Parse { line: 1, message: e.to_string() })?
            }
            None => return Err(Error::Parse { line: 1, message: "empty sample file".into() }),
        };
        let bad_meta = |what: &str| Error::Parse { line: 1, message: format!("bad metadata field {what}") };
        let method: SamplingMethod = serde_json::from_value(meta["method"].clone()).map_err(|_| bad_meta("method"))?;
        let seed = meta["seed"].as_u64().ok_or_else(|| bad_meta("seed"))?;
        let smoothing_c = meta["smoothing_c"].as_f64();

        let mut trace = Vec::new();
        let mut degrees = Vec::new();
        for (idx, line) in lines {
            let line = line?;
            if idx == 1 || line.trim().is_empty() {
                continue;
            }
            let parse_err = || Error::Parse { line: idx + 1, message: format!("bad sample row {line:?}") };
            let cols: Vec<&str> = line.split(',').collect();
            if cols.len() != 3 {
                return Err(parse_err());
            }
            trace.push(cols[1].trim().parse().map_err(|_| parse_err())?);
            degrees.push(cols[2].trim().parse().map_err(|_| parse_err())?);
        }
        Self::from_parts(method, trace, degrees, seed, smoothing_c)
    }
}

/// `s` independent uniform draws with replacement.
pub fn sample_uniform(g: &Graph, s: usize, seed: u64) -> Result<SampleSet> {
    if s == 0 {
        return Err(Error::InvalidParameter("sample size must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = g.node_count();
    let trace = (0..s).map(|_| rng.gen_range(0..n)).collect();
    SampleSet::from_trace(g, SamplingMethod::Uniform, trace, seed, None)
}

/// Simple random walk of `s` visited nodes (start included), no burn-in.
pub fn sample_rw(g: &Graph, s: usize, seed: u64, start: Option<usize>) -> Result<SampleSet> {
    walk(g, s, seed, start, SamplingMethod::Rw, 0.0)
}

/// Metropolis–Hastings walk targeting the uniform distribution: a proposed
/// neighbor `v` of `u` is accepted with probability `min(1, d_u / d_v)`.
pub fn sample_mhrw(g: &Graph, s: usize, seed: u64, start: Option<usize>) -> Result<SampleSet> {
    walk(g, s, seed, start, SamplingMethod::Mhrw, 0.0)
}

/// Walk whose stationary law is proportional to `d_u + c`: at `u` it stays
/// put with probability `c / (d_u + c)`, otherwise moves to a uniform
/// neighbor. With `c = 0` it consumes randomness exactly like [`sample_rw`].
pub fn sample_smoothed(g: &Graph, s: usize, c: f64, seed: u64, start: Option<usize>) -> Result<SampleSet> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("smoothing constant must be >= 0, got {c}")));
    }
    walk(g, s, seed, start, SamplingMethod::Smoothed, c)
}

fn walk(g: &Graph, s: usize, seed: u64, start: Option<usize>, method: SamplingMethod, c: f64) -> Result<SampleSet> {
    if s == 0 {
        return Err(Error::InvalidParameter("walk length must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut u = resolve_start(g, start, &mut rng)?;
    let mut trace = Vec::with_capacity(s);
    trace.push(u);
    for _ in 1..s {
        let du = g.degree(u);
        match method {
            SamplingMethod::Rw => {
                u = g.neighbors(u)[rng.gen_range(0..du)];
            }
            SamplingMethod::Mhrw => {
                let v = g.neighbors(u)[rng.gen_range(0..du)];
                let dv = g.degree(v);
                if dv <= du || rng.gen::<f64>() * (dv as f64) < du as f64 {
                    u = v;
                }
            }
            SamplingMethod::Smoothed => {
                let stay = c > 0.0 && rng.gen::<f64>() * (du as f64 + c) < c;
                if !stay {
                    u = g.neighbors(u)[rng.gen_range(0..du)];
                }
            }
            SamplingMethod::Uniform => unreachable!("uniform sampling is not a walk"),
        }
        trace.push(u);
    }
    let smoothing_c = (method == SamplingMethod::Smoothed).then_some(c);
    SampleSet::from_trace(g, method, trace, seed, smoothing_c)
}

fn resolve_start(g: &Graph, start: Option<usize>, rng: &mut ChaCha8Rng) -> Result<usize> {
    match start {
        Some(u) if u >= g.node_count() => Err(Error::InvalidParameter(format!("start node {u} is not in the graph"))),
        Some(u) if g.degree(u) == 0 => Err(Error::IsolatedStart(u)),
        Some(u) => Ok(u),
        None => {
            if g.edge_count() == 0 {
                return Err(Error::EmptyGraph);
            }
            loop {
                let u = rng.gen_range(0..g.node_count());
                if g.degree(u) > 0 {
                    return Ok(u);
                }
            }
        }
    }
}

/// Total variation distance between two distributions over the same support.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap()
    }

    fn star(leaves: usize) -> Graph {
        Graph::from_edges(leaves + 1, (1..=leaves).map(|l| (0, l))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    fn check_consistent(s: &SampleSet) {
        assert_eq!(s.size(), s.degree_counts().values().sum::<usize>());
        assert_eq!(s.observed_max_degree(), *s.degrees().iter().max().unwrap());
        assert_eq!(s.observed_min_degree(), *s.degrees().iter().min().unwrap());
    }

    #[test]
    fn uniform_single_node() {
        let g = Graph::from_edges(1, std::iter::empty()).unwrap();
        let s = sample_uniform(&g, 5, 3).unwrap();
        assert_eq!(s.trace(), &[0, 0, 0, 0, 0]);
        assert!(sample_uniform(&g, 0, 3).is_err());
    }

    #[test]
    fn uniform_frequencies_within_three_sigma() {
        let g = cycle(50);
        let draws = 50 * 100 * 20;
        let s = sample_uniform(&g, draws, 17).unwrap();
        let p = 1.0 / 50.0;
        let sigma = (p * (1.0 - p) / draws as f64).sqrt();
        for f in s.frequencies(50) {
            assert!((f - p).abs() < 4.0 * sigma, "freq {f}");
        }
        check_consistent(&s);
    }

    #[test]
    fn uniform_degree_composition_on_path() {
        let s = sample_uniform(&path3(), 3000, 5).unwrap();
        let ends = s.degree_counts()[&1] as f64;
        let centre = s.degree_counts()[&2] as f64;
        let ratio = ends / centre;
        assert!((ratio - 2.0).abs() < 0.3, "ratio {ratio}");
    }

    #[test]
    fn rw_single_step_is_start() {
        let s = sample_rw(&path3(), 1, 0, Some(2)).unwrap();
        assert_eq!(s.trace(), &[2]);
    }

    #[test]
    fn rw_path_stationary() {
        let s = sample_rw(&path3(), 200_000, 9, Some(0)).unwrap();
        let tv = total_variation(&s.frequencies(3), &[0.25, 0.5, 0.25]);
        assert!(tv < 0.02, "tv {tv}");
    }

    #[test]
    fn walk_steps_are_edges() {
        let g = crate::graph::generate_ba(300, 2, 1).unwrap();
        for s in [
            sample_rw(&g, 2000, 4, None).unwrap(),
            sample_mhrw(&g, 2000, 4, None).unwrap(),
            sample_smoothed(&g, 2000, 3.0, 4, None).unwrap(),
        ] {
            for w in s.trace().windows(2) {
                assert!(w[0] == w[1] || g.has_edge(w[0], w[1]));
            }
            if s.method() == SamplingMethod::Rw {
                assert!(s.trace().windows(2).all(|w| w[0] != w[1]));
            }
            check_consistent(&s);
        }
    }

    #[test]
    fn isolated_start_rejected() {
        let g = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert!(matches!(sample_rw(&g, 10, 0, Some(2)), Err(Error::IsolatedStart(2))));
        assert!(matches!(sample_mhrw(&g, 10, 0, Some(2)), Err(Error::IsolatedStart(2))));
        // default start skips the isolated node
        for seed in 0..20 {
            let s = sample_rw(&g, 5, seed, None).unwrap();
            assert!(s.trace().iter().all(|&u| u < 2));
        }
    }

    #[test]
    fn mhrw_star_is_uniform() {
        let s = sample_mhrw(&star(5), 300_000, 21, Some(0)).unwrap();
        let tv = total_variation(&s.frequencies(6), &[1.0 / 6.0; 6]);
        assert!(tv < 0.02, "tv {tv}");
    }

    #[test]
    fn mhrw_on_cycle_never_rejects() {
        let s = sample_mhrw(&cycle(9), 5000, 2, Some(0)).unwrap();
        assert!(s.trace().windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn smoothed_zero_matches_rw() {
        let g = crate::graph::generate_ba(200, 3, 8).unwrap();
        let a = sample_rw(&g, 1000, 77, None).unwrap();
        let b = sample_smoothed(&g, 1000, 0.0, 77, None).unwrap();
        assert_eq!(a.trace(), b.trace());
    }

    #[test]
    fn smoothed_rejects_negative_c() {
        assert!(sample_smoothed(&path3(), 10, -1.0, 0, None).is_err());
        assert!(sample_smoothed(&path3(), 10, f64::NAN, 0, None).is_err());
    }

    #[test]
    fn smoothed_path_c2() {
        let s = sample_smoothed(&path3(), 300_000, 2.0, 5, Some(1)).unwrap();
        let tv = total_variation(&s.frequencies(3), &[0.3, 0.4, 0.3]);
        assert!(tv < 0.02, "tv {tv}");
        assert_eq!(s.smoothing_c(), Some(2.0));
    }

    #[test]
    fn smoothed_large_c_near_uniform() {
        let g = star(9);
        let s = sample_smoothed(&g, 4_000_000, 200.0, 5, Some(0)).unwrap();
        let tv = total_variation(&s.frequencies(10), &[0.1; 10]);
        assert!(tv < 0.02, "tv {tv}");
    }

    #[test]
    fn count_above_matches_scan() {
        let s = sample_uniform(&crate::graph::generate_ba(100, 2, 0).unwrap(), 500, 1).unwrap();
        for d in 0..30 {
            assert_eq!(s.count_above(d), s.degrees().iter().filter(|&&x| x > d).count());
        }
    }

    #[test]
    fn csv_metadata_and_rows() {
        let s = sample_smoothed(&path3(), 4, 1.5, 3, Some(0)).unwrap();
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# {"));
        assert!(text.contains("\"smoothing_c\":1.5"));
        assert_eq!(text.lines().nth(1), Some("step,node_id,degree"));
        assert_eq!(SampleSet::read_csv(&buf[..]).unwrap(), s);
    }
}
