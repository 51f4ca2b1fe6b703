//! Network parameter estimation from walk samples: size via degree-weighted
//! collisions, average degree via a smoothed walk, extreme degrees from the
//! observed sample, and the power-law exponent and normalisation constant.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sampling::{sample_rw, sample_smoothed, SampleSet, SamplingMethod};
use crate::seed::derive;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt::Write as _;

pub const DEFAULT_MIN_GAP_FRACTION: f64 = 0.025;
pub const DEFAULT_REPETITIONS: usize = 10;
pub const DEFAULT_MIN_GAP_STEPS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NetworkKind {
    /// Minimum degree assumed to be 1.
    RealWorld,
    /// Minimum degree read off the sample.
    Synthetic,
}

impl std::str::FromStr for NetworkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "real" | "real_world" => Ok(NetworkKind::RealWorld),
            "synthetic" => Ok(NetworkKind::Synthetic),
            other => Err(Error::InvalidParameter(format!("unknown network kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamSource {
    Estimated,
    Actual,
}

/// How a [`NetworkParams`] value was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub source: ParamSource,
    pub walk_length: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub smoothing_c: Option<f64>,
    pub min_gap_fraction: f64,
    pub min_gap_steps: usize,
    pub network_kind: Option<NetworkKind>,
    pub neighbor_collisions: bool,
}

impl Provenance {
    pub fn actual() -> Self {
        Self {
            source: ParamSource::Actual,
            walk_length: 0,
            repetitions: 0,
            seed: 0,
            smoothing_c: None,
            min_gap_fraction: DEFAULT_MIN_GAP_FRACTION,
            min_gap_steps: 0,
            network_kind: None,
            neighbor_collisions: false,
        }
    }
}

/// Estimated (or actual) network parameters feeding the rank estimators.
///
/// `gamma` and `norm_const` are derived from the degree statistics and are
/// `None` when the power-law fit is undefined (average not above minimum, or
/// minimum equal to maximum).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NetworkParams {
    pub est_size: f64,
    pub est_min_degree: usize,
    pub est_max_degree: usize,
    pub est_avg_degree: f64,
    pub gamma: Option<f64>,
    pub norm_const: Option<f64>,
    pub provenance: Provenance,
}

impl NetworkParams {
    /// Assembles parameters and derives the exponent. The average degree is
    /// clamped into `[min, max]`.
    pub fn new(
        est_size: f64,
        est_min_degree: usize,
        est_max_degree: usize,
        est_avg_degree: f64,
        provenance: Provenance,
    ) -> Result<Self> {
        if !(est_size > 0.0 && est_size.is_finite()) {
            return Err(Error::InvalidParameter(format!("network size must be positive, got {est_size}")));
        }
        if est_min_degree > est_max_degree {
            return Err(Error::InvalidParameter(format!(
                "minimum degree {est_min_degree} exceeds maximum degree {est_max_degree}"
            )));
        }
        let est_avg_degree = est_avg_degree.clamp(est_min_degree as f64, est_max_degree as f64);
        let gamma = estimate_gamma(est_min_degree as f64, est_avg_degree).ok();
        let norm_const = gamma.and_then(|g| norm_const(g, est_min_degree as f64, est_max_degree as f64).ok());
        Ok(Self { est_size, est_min_degree, est_max_degree, est_avg_degree, gamma, norm_const, provenance })
    }

    /// The true parameters of `g`, as if estimation were perfect.
    pub fn actual(g: &Graph) -> Result<Self> {
        Self::new(g.node_count() as f64, g.min_degree(), g.max_degree(), g.avg_degree(), Provenance::actual())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("params serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), message: e.to_string() })
    }

    /// Flat `key = value` block.
    pub fn to_key_values(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| "none".to_string(), |x| x.to_string());
        let p = &self.provenance;
        let mut out = String::new();
        let _ = writeln!(out, "est_size = {}", self.est_size);
        let _ = writeln!(out, "est_min_degree = {}", self.est_min_degree);
        let _ = writeln!(out, "est_max_degree = {}", self.est_max_degree);
        let _ = writeln!(out, "est_avg_degree = {}", self.est_avg_degree);
        let _ = writeln!(out, "gamma = {}", opt(self.gamma));
        let _ = writeln!(out, "norm_const = {}", opt(self.norm_const));
        let _ = writeln!(out, "source = {:?}", p.source);
        let _ = writeln!(out, "walk_length = {}", p.walk_length);
        let _ = writeln!(out, "repetitions = {}", p.repetitions);
        let _ = writeln!(out, "seed = {}", p.seed);
        let _ = writeln!(out, "smoothing_c = {}", opt(p.smoothing_c));
        let _ = writeln!(out, "min_gap_fraction = {}", p.min_gap_fraction);
        let _ = writeln!(out, "min_gap_steps = {}", p.min_gap_steps);
        let _ = writeln!(out, "neighbor_collisions = {}", p.neighbor_collisions);
        out
    }
}

fn require_rw(walk: &SampleSet) -> Result<()> {
    if walk.method() != SamplingMethod::Rw {
        return Err(Error::InvalidParameter(format!(
            "size estimation needs a simple random walk, got {}",
            walk.method().as_str()
        )));
    }
    if walk.size() < 100 {
        return Err(Error::InsufficientSamples(format!(
            "size estimation needs at least 100 walk steps, got {}",
            walk.size()
        )));
    }
    Ok(())
}

fn gap_steps(walk: &SampleSet, min_gap_fraction: f64) -> Result<usize> {
    if !(min_gap_fraction > 0.0 && min_gap_fraction < 0.5) {
        return Err(Error::InvalidParameter(format!("min gap fraction must lie in (0, 0.5), got {min_gap_fraction}")));
    }
    Ok((min_gap_fraction * walk.size() as f64).floor() as usize)
}

/// Sum over eligible pairs `(k, l)`, `l - k > gap`, of
/// `(d_k / d_l + d_l / d_k) / 2`: the pair weight whose ratio to the
/// collision count is an unbiased size estimate under the `d_u / 2m` law.
fn pair_weight_sum(degrees: &[usize], gap: usize) -> f64 {
    let mut deg_prefix = 0.0;
    let mut inv_prefix = 0.0;
    let mut total = 0.0;
    for l in (gap + 1)..degrees.len() {
        let k = l - gap - 1;
        deg_prefix += degrees[k] as f64;
        inv_prefix += 1.0 / degrees[k] as f64;
        let dl = degrees[l] as f64;
        total += 0.5 * (deg_prefix / dl + inv_prefix * dl);
    }
    total
}

fn positions_by_node(trace: &[usize]) -> HashMap<usize, Vec<usize>> {
    let mut map: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, &u) in trace.iter().enumerate() {
        map.entry(u).or_default().push(i);
    }
    map
}

/// Number of repeat visits to one node more than `gap` steps apart.
fn collision_count(positions: &HashMap<usize, Vec<usize>>, gap: usize) -> f64 {
    let mut total = 0usize;
    for pos in positions.values() {
        let mut i = 0;
        for j in 0..pos.len() {
            while i < j && pos[j] - pos[i] > gap {
                i += 1;
            }
            total += i;
        }
    }
    total as f64
}

/// Network size from a simple random walk.
///
/// `n' = W / C` where `C` counts pairs of steps more than
/// `min_gap_fraction * s` apart that visit the same node, and `W` sums
/// `(d_k/d_l + d_l/d_k)/2` over the same eligible pairs.
pub fn estimate_size(walk: &SampleSet, min_gap_fraction: f64) -> Result<f64> {
    size_terms(walk, None, gap_steps(walk, min_gap_fraction)?).and_then(|t| t.ratio(walk.size()))
}

/// As [`estimate_size`], additionally counting near-collisions: an eligible
/// pair whose nodes are adjacent contributes `(1/d_k + 1/d_l)/2`, which has
/// the same expectation as an exact collision. Both counts are pooled.
pub fn estimate_size_with_neighbors(walk: &SampleSet, g: &Graph, min_gap_fraction: f64) -> Result<f64> {
    size_terms(walk, Some(g), gap_steps(walk, min_gap_fraction)?).and_then(|t| t.ratio(walk.size()))
}

/// Numerator and collision count of a size estimate, kept apart so that
/// several walks can be pooled before dividing.
#[derive(Debug, Clone, Copy, Default)]
struct SizeTerms {
    weight: f64,
    collisions: f64,
}

impl SizeTerms {
    fn add(self, other: SizeTerms) -> SizeTerms {
        SizeTerms { weight: self.weight + other.weight, collisions: self.collisions + other.collisions }
    }

    fn ratio(self, steps: usize) -> Result<f64> {
        if self.collisions == 0.0 {
            return Err(no_collisions(steps));
        }
        Ok(self.weight / self.collisions)
    }
}

/// Terms over pairs `(k, l)` with `l - k > gap`.
fn size_terms(walk: &SampleSet, g: Option<&Graph>, gap: usize) -> Result<SizeTerms> {
    require_rw(walk)?;
    let positions = positions_by_node(walk.trace());
    let exact = collision_count(&positions, gap);
    let weight = pair_weight_sum(walk.degrees(), gap);
    let Some(g) = g else {
        return Ok(SizeTerms { weight, collisions: exact });
    };
    let mut near = 0.0;
    for (l, &x) in walk.trace().iter().enumerate().skip(gap + 1) {
        let inv_dl = 1.0 / g.degree(x) as f64;
        for &w in g.neighbors(x) {
            if let Some(pos) = positions.get(&w) {
                let earlier = pos.partition_point(|&k| k + gap < l);
                if earlier > 0 {
                    near += earlier as f64 * 0.5 * (1.0 / g.degree(w) as f64 + inv_dl);
                }
            }
        }
    }
    Ok(SizeTerms { weight: 2.0 * weight, collisions: exact + near })
}

/// Terms over pairs taken from two different walks. Independent walks need
/// no separation, so every cross pair counts.
fn cross_walk_terms(walks: &[SampleSet], g: Option<&Graph>) -> SizeTerms {
    let sums: Vec<(f64, f64)> = walks
        .iter()
        .map(|w| w.degrees().iter().fold((0.0, 0.0), |(d, h), &x| (d + x as f64, h + 1.0 / x as f64)))
        .collect();
    let (total_d, total_h) = sums.iter().fold((0.0, 0.0), |(d, h), &(a, b)| (d + a, h + b));
    let weight = 0.5 * (total_d * total_h - sums.iter().map(|&(d, h)| d * h).sum::<f64>());

    let per_walk: Vec<HashMap<usize, f64>> = walks
        .iter()
        .map(|w| {
            let mut counts = HashMap::new();
            for &u in w.trace() {
                *counts.entry(u).or_insert(0.0) += 1.0;
            }
            counts
        })
        .collect();
    let mut total: HashMap<usize, f64> = HashMap::new();
    for counts in &per_walk {
        for (&u, &c) in counts {
            *total.entry(u).or_insert(0.0) += c;
        }
    }
    let square = |m: &HashMap<usize, f64>| m.values().map(|c| c * c).sum::<f64>();
    let exact = 0.5 * (square(&total) - per_walk.iter().map(square).sum::<f64>());
    let Some(g) = g else {
        return SizeTerms { weight, collisions: exact };
    };
    // Ordered adjacent pairs, weighted by the mean inverse degree.
    let adjacent = |m: &HashMap<usize, f64>| {
        let mut sum = 0.0;
        for (&u, &cu) in m {
            let inv_u = 1.0 / g.degree(u) as f64;
            for &v in g.neighbors(u) {
                if let Some(&cv) = m.get(&v) {
                    sum += cu * cv * 0.5 * (inv_u + 1.0 / g.degree(v) as f64);
                }
            }
        }
        sum
    };
    let near = 0.5 * (adjacent(&total) - per_walk.iter().map(adjacent).sum::<f64>());
    SizeTerms { weight: 2.0 * weight, collisions: exact + near }
}

fn no_collisions(s: usize) -> Error {
    Error::InsufficientSamples(format!(
        "no collisions among {s} walk steps at the required separation; use a longer walk"
    ))
}

/// Average degree from a walk with stationary law proportional to `d_u + c`:
/// `(Σ d/(d+c)) / (Σ 1/(d+c))`.
pub fn estimate_avg_degree(walk: &SampleSet, c: f64) -> Result<f64> {
    if !(c >= 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("smoothing constant must be >= 0, got {c}")));
    }
    if let Some(walk_c) = walk.smoothing_c() {
        if walk_c != c {
            return Err(Error::Mismatch(format!("walk was smoothed with c = {walk_c}, not {c}")));
        }
    }
    let (mut num, mut den) = (0.0, 0.0);
    for &d in walk.degrees() {
        let w = 1.0 / (d as f64 + c);
        if !w.is_finite() {
            return Err(Error::Domain("degree 0 with c = 0 has no finite weight".into()));
        }
        num += d as f64 * w;
        den += w;
    }
    Ok(num / den)
}

/// Picks a smoothing constant from `{1, 2, 4, ..., 2^⌈log2 U⌉}`, `U` being
/// the largest degree seen on a pilot walk, by minimising the spread of the
/// average-degree estimate across short pilot walks. Ties go to the smaller
/// constant.
pub fn choose_smoothing_c(g: &Graph, budget: usize, seed: u64) -> Result<f64> {
    choose_smoothing_c_from(g, budget, seed, None)
}

const PILOTS_PER_CANDIDATE: usize = 5;

fn choose_smoothing_c_from(g: &Graph, budget: usize, seed: u64, starts: Option<&[usize]>) -> Result<f64> {
    if budget < 500 {
        return Err(Error::InvalidParameter(format!("smoothing pilot budget must be >= 500, got {budget}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive(seed, 0));
    let mut pick_start = || starts.map(|pool| pool[rng.gen_range(0..pool.len())]);

    let scout_len = budget / 5;
    let scout = sample_rw(g, scout_len, derive(seed, 1), pick_start())?;
    let upper = scout.observed_max_degree().max(1);
    let reference = estimate_avg_degree(&scout, 0.0)?;
    let mut grid = vec![1.0];
    while (*grid.last().unwrap() as usize) < upper {
        grid.push(grid.last().unwrap() * 2.0);
    }

    let per_walk = ((budget - scout_len) / (PILOTS_PER_CANDIDATE * grid.len())).max(20);
    let pilot_starts: Vec<Option<usize>> = (0..PILOTS_PER_CANDIDATE).map(|_| pick_start()).collect();

    let mut best = (f64::INFINITY, grid[0]);
    for &c in &grid {
        let mut estimates = Vec::with_capacity(PILOTS_PER_CANDIDATE);
        for (i, &start) in pilot_starts.iter().enumerate() {
            let walk = sample_smoothed(g, per_walk, c, derive(seed, 2 + i as u64), start)?;
            estimates.push(estimate_avg_degree(&walk, c)?);
        }
        let spread = mean_squared_deviation(&estimates, reference);
        if spread < best.0 {
            best = (spread, c);
        }
    }
    Ok(best.1)
}

fn mean_squared_deviation(xs: &[f64], reference: f64) -> f64 {
    xs.iter().map(|x| (x - reference).powi(2)).sum::<f64>() / xs.len() as f64
}

pub fn estimate_max_degree(s: &SampleSet) -> usize {
    s.observed_max_degree()
}

pub fn estimate_min_degree(s: &SampleSet, kind: NetworkKind) -> usize {
    match kind {
        NetworkKind::RealWorld => 1,
        NetworkKind::Synthetic => s.observed_min_degree(),
    }
}

/// Power-law exponent from minimum and average degree:
/// `2 + d_min / (d_avg - d_min)`.
pub fn estimate_gamma(d_min: f64, d_avg: f64) -> Result<f64> {
    if !(d_min > 0.0) {
        return Err(Error::InvalidParameter(format!("minimum degree must be positive, got {d_min}")));
    }
    if !(d_avg > d_min) {
        return Err(Error::DegenerateDegrees { min: d_min, avg: d_avg });
    }
    Ok(2.0 + d_min / (d_avg - d_min))
}

/// Normalising constant of the continuous density `c * j^-gamma` on
/// `[d_min, d_max]`: `(1 - γ) / (d_max^(1-γ) - d_min^(1-γ))`.
pub fn norm_const(gamma: f64, d_min: f64, d_max: f64) -> Result<f64> {
    if gamma == 1.0 {
        return Err(Error::Singularity("gamma = 1".into()));
    }
    if d_min == d_max {
        return Err(Error::Singularity(format!("d_min = d_max = {d_min}")));
    }
    if !(d_min > 0.0 && d_min < d_max) {
        return Err(Error::InvalidParameter(format!("need 0 < d_min < d_max, got {d_min}, {d_max}")));
    }
    let e = 1.0 - gamma;
    Ok(e / (d_max.powf(e) - d_min.powf(e)))
}

/// Settings for [`estimate_network_params`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamConfig {
    pub walk_length: usize,
    pub repetitions: usize,
    pub seed: u64,
    pub network_kind: NetworkKind,
    pub min_gap_fraction: f64,
    /// Lower bound on the collision gap in steps, so that short walks do
    /// not count their own back-and-forth moves as collisions.
    pub min_gap_steps: usize,
    /// Fixed smoothing constant; chosen by pilot walks when absent.
    pub smoothing_c: Option<f64>,
    pub neighbor_collisions: bool,
}

impl ParamConfig {
    pub fn new(walk_length: usize, seed: u64, network_kind: NetworkKind) -> Self {
        Self {
            walk_length,
            repetitions: DEFAULT_REPETITIONS,
            seed,
            network_kind,
            min_gap_fraction: DEFAULT_MIN_GAP_FRACTION,
            min_gap_steps: DEFAULT_MIN_GAP_STEPS,
            smoothing_c: None,
            neighbor_collisions: true,
        }
    }
}

/// Full estimation pipeline. Each repetition runs one simple random walk
/// (size, maximum and minimum degree) and one smoothed walk (average
/// degree); the repetitions are averaged. Walks start uniformly inside the
/// largest connected component.
pub fn estimate_network_params(g: &Graph, config: &ParamConfig) -> Result<NetworkParams> {
    if config.repetitions == 0 {
        return Err(Error::InvalidParameter("repetitions must be at least 1".into()));
    }
    if 2 * config.min_gap_steps >= config.walk_length {
        return Err(Error::InvalidParameter(format!(
            "walk of {} steps is too short for a collision gap of {} steps",
            config.walk_length, config.min_gap_steps
        )));
    }
    let component = g.largest_component();
    if g.degree(component[0]) == 0 {
        return Err(Error::EmptyGraph);
    }
    let c = match config.smoothing_c {
        Some(c) => c,
        None => {
            choose_smoothing_c_from(g, config.walk_length.max(500), derive(config.seed, u64::MAX), Some(&component))?
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let reps = config.repetitions as f64;
    let mut size = SizeTerms::default();
    let mut walks = Vec::with_capacity(config.repetitions);
    let (mut max_deg, mut min_deg, mut avg_deg) = (0.0, 0.0, 0.0);
    for r in 0..config.repetitions {
        let start = component[rng.gen_range(0..component.len())];
        let walk = sample_rw(g, config.walk_length, derive(config.seed, 2 * r as u64), Some(start))?;
        let graph = config.neighbor_collisions.then_some(g);
        let gap = gap_steps(&walk, config.min_gap_fraction)?.max(config.min_gap_steps);
        size = size.add(size_terms(&walk, graph, gap)?);
        max_deg += estimate_max_degree(&walk) as f64;
        min_deg += estimate_min_degree(&walk, config.network_kind) as f64;
        walks.push(walk);

        let start = component[rng.gen_range(0..component.len())];
        let smooth = sample_smoothed(g, config.walk_length, c, derive(config.seed, 2 * r as u64 + 1), Some(start))?;
        avg_deg += estimate_avg_degree(&smooth, c)?;
    }
    size = size.add(cross_walk_terms(&walks, config.neighbor_collisions.then_some(g)));

    let provenance = Provenance {
        source: ParamSource::Estimated,
        walk_length: config.walk_length,
        repetitions: config.repetitions,
        seed: config.seed,
        smoothing_c: Some(c),
        min_gap_fraction: config.min_gap_fraction,
        min_gap_steps: config.min_gap_steps,
        network_kind: Some(config.network_kind),
        neighbor_collisions: config.neighbor_collisions,
    };
    NetworkParams::new(
        size.ratio(config.walk_length * config.repetitions)?,
        (min_deg / reps).round() as usize,
        (max_deg / reps).round() as usize,
        avg_deg / reps,
        provenance,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_ba;
    use crate::sampling::sample_uniform;

    fn complete(m: usize) -> Graph {
        Graph::from_edges(m, (0..m).flat_map(|u| ((u + 1)..m).map(move |v| (u, v)))).unwrap()
    }

    fn ring(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    #[test]
    fn cross_walk_terms_match_all_pairs() {
        let g = generate_ba(60, 3, 4).unwrap();
        let walks: Vec<SampleSet> = (0..3).map(|r| sample_rw(&g, 150, r, None).unwrap()).collect();
        let (mut weight, mut exact, mut near) = (0.0, 0.0, 0.0);
        for i in 0..walks.len() {
            for j in (i + 1)..walks.len() {
                for &x in walks[i].trace() {
                    for &y in walks[j].trace() {
                        let (dx, dy) = (g.degree(x) as f64, g.degree(y) as f64);
                        weight += 0.5 * (dx / dy + dy / dx);
                        if x == y {
                            exact += 1.0;
                        } else if g.neighbors(x).contains(&y) {
                            near += 0.5 * (1.0 / dx + 1.0 / dy);
                        }
                    }
                }
            }
        }
        let plain = cross_walk_terms(&walks, None);
        assert!((plain.weight - weight).abs() < 1e-9 * weight);
        assert!((plain.collisions - exact).abs() < 1e-9);
        let with_nbr = cross_walk_terms(&walks, Some(&g));
        assert!((with_nbr.weight - 2.0 * weight).abs() < 1e-9 * weight);
        assert!((with_nbr.collisions - exact - near).abs() < 1e-9 * (exact + near));
    }

    /// O(s^2) reference for the size estimator.
    fn brute_force_size(walk: &SampleSet, frac: f64) -> f64 {
        let gap = (frac * walk.size() as f64).floor() as usize;
        let (t, d) = (walk.trace(), walk.degrees());
        let (mut w, mut c) = (0.0, 0.0);
        for k in 0..t.len() {
            for l in (k + gap + 1)..t.len() {
                w += 0.5 * (d[k] as f64 / d[l] as f64 + d[l] as f64 / d[k] as f64);
                if t[k] == t[l] {
                    c += 1.0;
                }
            }
        }
        w / c
    }

    #[test]
    fn size_matches_brute_force() {
        let g = generate_ba(300, 3, 2).unwrap();
        let walk = sample_rw(&g, 1500, 3, None).unwrap();
        let fast = estimate_size(&walk, 0.025).unwrap();
        let slow = brute_force_size(&walk, 0.025);
        assert!((fast - slow).abs() / slow < 1e-9, "{fast} vs {slow}");
    }

    #[test]
    fn neighbor_collisions_match_brute_force() {
        let g = generate_ba(300, 3, 2).unwrap();
        let walk = sample_rw(&g, 800, 5, None).unwrap();
        let gap = (0.025 * 800.0f64).floor() as usize;
        let (t, d) = (walk.trace(), walk.degrees());
        let (mut w, mut c) = (0.0, 0.0);
        for k in 0..t.len() {
            for l in (k + gap + 1)..t.len() {
                w += 0.5 * (d[k] as f64 / d[l] as f64 + d[l] as f64 / d[k] as f64);
                if t[k] == t[l] {
                    c += 1.0;
                }
                if g.has_edge(t[k], t[l]) {
                    c += 0.5 * (1.0 / d[k] as f64 + 1.0 / d[l] as f64);
                }
            }
        }
        let expected = 2.0 * w / c;
        let got = estimate_size_with_neighbors(&walk, &g, 0.025).unwrap();
        assert!((got - expected).abs() / expected < 1e-9);
    }

    #[test]
    fn size_on_single_edge_is_two() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let walk = sample_rw(&g, 400, 0, None).unwrap();
        let n = estimate_size(&walk, 0.025).unwrap();
        assert!((n - 2.0).abs() < 0.05, "{n}");
    }

    #[test]
    fn size_on_complete_graph() {
        let g = complete(60);
        let mut est = 0.0;
        for seed in 0..10 {
            let walk = sample_rw(&g, 4000, seed, None).unwrap();
            est += estimate_size(&walk, 0.025).unwrap() / 10.0;
        }
        assert!((est - 60.0).abs() / 60.0 < 0.05, "{est}");
    }

    #[test]
    fn size_requires_rw_and_collisions() {
        let g = complete(50);
        let u = sample_uniform(&g, 500, 0).unwrap();
        assert!(estimate_size(&u, 0.025).is_err());
        let short = sample_rw(&g, 99, 0, None).unwrap();
        assert!(matches!(estimate_size(&short, 0.025), Err(Error::InsufficientSamples(_))));
        let big = generate_ba(100_000, 3, 0).unwrap();
        let walk = sample_rw(&big, 100, 1, None).unwrap();
        assert!(matches!(estimate_size(&walk, 0.4), Err(Error::InsufficientSamples(_))));
        let walk = sample_rw(&g, 200, 1, None).unwrap();
        assert!(estimate_size(&walk, 0.5).is_err());
        assert!(estimate_size(&walk, 0.0).is_err());
    }

    #[test]
    fn avg_degree_exact_on_regular() {
        let g = ring(40);
        for c in [0.0, 1.0, 7.5, 300.0] {
            let walk = sample_smoothed(&g, 500, c, 3, None).unwrap();
            assert!((estimate_avg_degree(&walk, c).unwrap() - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn avg_degree_path_stationary_weights() {
        // trace weighted exactly 3:4:3 as the c = 2 stationary law
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let trace = vec![0, 0, 0, 1, 1, 1, 1, 2, 2, 2];
        let s = SampleSet::from_trace(&g, SamplingMethod::Smoothed, trace, 0, Some(2.0)).unwrap();
        assert!((estimate_avg_degree(&s, 2.0).unwrap() - 4.0 / 3.0).abs() < 1e-12);
        assert!(matches!(estimate_avg_degree(&s, 1.0), Err(Error::Mismatch(_))));
    }

    #[test]
    fn choose_c_regular_returns_smallest() {
        assert_eq!(choose_smoothing_c(&ring(200), 1000, 4).unwrap(), 1.0);
        assert!(choose_smoothing_c(&ring(200), 499, 4).is_err());
    }

    #[test]
    fn extreme_degrees() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        let s = SampleSet::from_trace(&g, SamplingMethod::Rw, vec![1, 0, 2], 0, None).unwrap();
        assert_eq!(estimate_max_degree(&s), 3);
        assert_eq!(estimate_min_degree(&s, NetworkKind::Synthetic), 1);
        let hub = SampleSet::from_trace(&g, SamplingMethod::Rw, vec![0], 0, None).unwrap();
        assert_eq!(estimate_min_degree(&hub, NetworkKind::RealWorld), 1);
        assert_eq!(estimate_min_degree(&hub, NetworkKind::Synthetic), 3);
    }

    #[test]
    fn gamma_cases() {
        assert!((estimate_gamma(1.0, 3.0).unwrap() - 2.5).abs() < 1e-15);
        assert!((estimate_gamma(1.0, 2.0).unwrap() - 3.0).abs() < 1e-15);
        let g = estimate_gamma(10.0, 19.68).unwrap();
        assert!((g - (2.0 + 10.0 / 9.68)).abs() < 1e-12 && (g - 3.033).abs() < 1e-3);
        assert!(matches!(estimate_gamma(2.0, 2.0), Err(Error::DegenerateDegrees { .. })));
        assert!(estimate_gamma(0.0, 2.0).is_err());
    }

    #[test]
    fn norm_const_cases() {
        let c = norm_const(2.0, 1.0, 1e9).unwrap();
        assert!((c - 1.0).abs() < 1e-8);
        let c = norm_const(2.5, 1.0, 100.0).unwrap();
        assert!((c - 1.5 / (1.0 - 100f64.powf(-1.5))).abs() < 1e-12);
        assert!((c - 1.5015).abs() < 1e-4);
        assert!(matches!(norm_const(3.0, 2.0, 2.0), Err(Error::Singularity(_))));
        assert!(matches!(norm_const(1.0, 1.0, 5.0), Err(Error::Singularity(_))));
    }

    #[test]
    fn params_derive_gamma_and_serialize() {
        let p = NetworkParams::new(1000.0, 1, 100, 3.0, Provenance::actual()).unwrap();
        assert_eq!(p.gamma, Some(2.5));
        let back = NetworkParams::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
        let kv = p.to_key_values();
        for key in ["est_size", "est_min_degree", "est_max_degree", "est_avg_degree", "gamma", "norm_const"] {
            assert!(kv.contains(&format!("{key} = ")), "{key}");
        }
        let regular = NetworkParams::actual(&ring(10)).unwrap();
        assert_eq!(regular.gamma, None);
        assert_eq!(regular.norm_const, None);
    }

    #[test]
    fn pipeline_on_ring_is_exact_in_average() {
        let g = ring(500);
        let mut cfg = ParamConfig::new(2000, 3, NetworkKind::Synthetic);
        cfg.repetitions = 3;
        let p = estimate_network_params(&g, &cfg).unwrap();
        assert!((p.est_avg_degree - 2.0).abs() < 1e-12);
        assert_eq!((p.est_min_degree, p.est_max_degree), (2, 2));
        assert_eq!(p.provenance.smoothing_c, Some(1.0));
    }

    #[test]
    fn pipeline_on_single_edge() {
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let p = estimate_network_params(&g, &ParamConfig::new(500, 1, NetworkKind::RealWorld)).unwrap();
        assert!((p.est_size - 2.0).abs() < 0.05);
    }
}
