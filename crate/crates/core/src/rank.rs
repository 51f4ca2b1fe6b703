//! Degree-rank estimators.
//!
//! | method | input                     | idea                                      |
//! |--------|---------------------------|-------------------------------------------|
//! | PL     | [`NetworkParams`]         | integrate a fitted power law above `d_u`  |
//! | US     | uniform sample            | scale the local rank by `n' / s`          |
//! | MH     | Metropolis–Hastings walk  | US applied to a near-uniform walk sample  |
//! | RW     | simple random walk        | re-weight each degree class by `1 / j`    |
//! | PD     | [`NetworkParams`]         | Poisson tail above `d_u`                  |
//!
//! Every estimate is clamped to `[1, n']` and depends on the node only
//! through its degree, so equal degrees always share a rank.

use crate::error::{Error, Result};
use crate::params::NetworkParams;
use crate::sampling::{SampleSet, SamplingMethod};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Pl,
    Us,
    Mh,
    Rw,
    Pd,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Pl, Method::Us, Method::Mh, Method::Rw, Method::Pd];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Pl => "pl",
            Method::Us => "us",
            Method::Mh => "mh",
            Method::Rw => "rw",
            Method::Pd => "pd",
        }
    }

    /// Sampler whose output this method consumes, if any.
    pub fn sampler(self) -> Option<SamplingMethod> {
        match self {
            Method::Us => Some(SamplingMethod::Uniform),
            Method::Mh => Some(SamplingMethod::Mhrw),
            Method::Rw => Some(SamplingMethod::Rw),
            Method::Pl | Method::Pd => None,
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pl" => Ok(Method::Pl),
            "us" => Ok(Method::Us),
            "mh" => Ok(Method::Mh),
            "rw" => Ok(Method::Rw),
            "pd" => Ok(Method::Pd),
            other => Err(Error::InvalidParameter(format!("unknown method {other:?}"))),
        }
    }
}

/// One estimated rank together with what produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct RankEstimate<'a> {
    pub node_degree: usize,
    pub method: Method,
    pub est_rank: f64,
    pub sample_size: usize,
    pub sample_seed: Option<u64>,
    pub params_used: &'a NetworkParams,
}

fn clamp_rank(value: f64, n_est: f64) -> f64 {
    value.clamp(1.0, n_est.max(1.0))
}

fn check_size(n_est: f64) -> Result<()> {
    if n_est > 0.0 && n_est.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("network size must be positive, got {n_est}")))
    }
}

/// Expected rank under a continuous power law on `[d_min, d_max]`:
/// `n (d_max^(1-γ) - (d_u+1)^(1-γ)) / (d_max^(1-γ) - d_min^(1-γ)) + 1`,
/// clamped to `[1, n]`.
pub fn expected_rank_pl(n: f64, gamma: f64, d_min: f64, d_max: f64, d_u: usize) -> Result<f64> {
    Ok(clamp_rank(expected_rank_pl_unclamped(n, gamma, d_min, d_max, d_u)?, n))
}

/// [`expected_rank_pl`] before clamping.
pub fn expected_rank_pl_unclamped(n: f64, gamma: f64, d_min: f64, d_max: f64, d_u: usize) -> Result<f64> {
    check_size(n)?;
    if gamma == 1.0 {
        return Err(Error::Singularity("gamma = 1".into()));
    }
    if d_min == d_max {
        return Err(Error::Singularity(format!("d_min = d_max = {d_min}")));
    }
    if !(d_min > 0.0 && d_max > 0.0) {
        return Err(Error::InvalidParameter(format!("degrees must be positive, got {d_min}, {d_max}")));
    }
    let e = 1.0 - gamma;
    let top = d_max.powf(e);
    Ok(n * (top - (d_u as f64 + 1.0).powf(e)) / (top - d_min.powf(e)) + 1.0)
}

/// PL estimate from estimated parameters.
pub fn rank_pl(params: &NetworkParams, d_u: usize) -> Result<f64> {
    let gamma = params
        .gamma
        .ok_or(Error::DegenerateDegrees { min: params.est_min_degree as f64, avg: params.est_avg_degree })?;
    expected_rank_pl(params.est_size, gamma, params.est_min_degree as f64, params.est_max_degree as f64, d_u)
}

/// `1 +` number of sample entries (with multiplicity) of degree above `d_u`.
pub fn local_rank(s: &SampleSet, d_u: usize) -> usize {
    s.count_above(d_u) + 1
}

/// `n' * r_local / s`, clamped to `[1, n']`.
pub fn rank_us(n_est: f64, s: usize, r_local: usize) -> Result<f64> {
    check_size(n_est)?;
    if s == 0 {
        return Err(Error::InvalidParameter("sample size must be at least 1".into()));
    }
    if r_local == 0 {
        return Err(Error::InvalidParameter("local rank starts at 1".into()));
    }
    Ok(clamp_rank(n_est * r_local as f64 / s as f64, n_est))
}

pub fn rank_mh(s: &SampleSet, n_est: f64, d_u: usize) -> Result<f64> {
    if s.method() != SamplingMethod::Mhrw {
        return Err(Error::InvalidParameter(format!("MH needs an mhrw sample, got {}", s.method().as_str())));
    }
    rank_us(n_est, s.size(), local_rank(s, d_u))
}

/// Re-sampling law that turns a degree-biased walk sample into a uniform
/// one: `q(j) ∝ n'_j / j`, and the scale `k = min_j 1/q(j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RwResampling {
    pub q: BTreeMap<usize, f64>,
    pub k: f64,
    weights: BTreeMap<usize, f64>,
    total: f64,
}

impl RwResampling {
    pub fn from_sample(s: &SampleSet) -> Result<Self> {
        if s.degree_counts().contains_key(&0) {
            return Err(Error::Domain("random-walk sample contains a degree-0 node".into()));
        }
        let weights: BTreeMap<usize, f64> =
            s.degree_counts().iter().map(|(&j, &count)| (j, count as f64 / j as f64)).collect();
        let total: f64 = weights.values().sum();
        let q: BTreeMap<usize, f64> = weights.iter().map(|(&j, &w)| (j, w / total)).collect();
        let k = q.values().map(|&p| 1.0 / p).fold(f64::INFINITY, f64::min);
        Ok(Self { q, k, weights, total })
    }

    /// Share of re-weighted mass on degrees above `d_u`.
    pub fn mass_above(&self, d_u: usize) -> f64 {
        self.weights.range(d_u + 1..).map(|(_, &w)| w).sum::<f64>() / self.total
    }

    /// `n' * mass_above(d_u) + 1`, clamped to `[1, n']`. `k` cancels.
    pub fn rank(&self, n_est: f64, d_u: usize) -> Result<f64> {
        check_size(n_est)?;
        Ok(clamp_rank(n_est * self.mass_above(d_u) + 1.0, n_est))
    }
}

pub fn rank_rw(s: &SampleSet, n_est: f64, d_u: usize) -> Result<f64> {
    if s.method() != SamplingMethod::Rw {
        return Err(Error::InvalidParameter(format!("RW needs an rw sample, got {}", s.method().as_str())));
    }
    RwResampling::from_sample(s)?.rank(n_est, d_u)
}

/// Poisson tail `n' e^{-λ} Σ_{j=d_u+1}^{d_max} λ^j / j! + 1`, clamped.
/// Terms follow the recurrence `t_{j+1} = t_j λ / (j + 1)` starting from a
/// log-space first term, so no factorial is ever formed.
pub fn rank_pd(n_est: f64, d_avg_est: f64, d_max_est: usize, d_u: usize) -> Result<f64> {
    check_size(n_est)?;
    if !(d_avg_est > 0.0 && d_avg_est.is_finite()) {
        return Err(Error::InvalidParameter(format!("average degree must be positive, got {d_avg_est}")));
    }
    if d_max_est < 1 {
        return Err(Error::InvalidParameter("maximum degree must be at least 1".into()));
    }
    Ok(clamp_rank(n_est * poisson_tail(d_avg_est, d_u + 1, d_max_est) + 1.0, n_est))
}

/// `Σ_{j=from}^{to} e^{-λ} λ^j / j!`.
pub fn poisson_tail(lambda: f64, from: usize, to: usize) -> f64 {
    if from > to {
        return 0.0;
    }
    let ln_lambda = lambda.ln();
    let ln_fact: f64 = (2..=from).map(|i| (i as f64).ln()).sum();
    let mut term = (-lambda + from as f64 * ln_lambda - ln_fact).exp();
    let mut sum = 0.0;
    for j in from..=to {
        sum += term;
        term *= lambda / (j + 1) as f64;
    }
    sum
}

/// A method bound to its parameters and sample, ready to rank many degrees.
#[derive(Debug, Clone)]
pub enum RankEstimator<'a> {
    Pl(&'a NetworkParams),
    Pd(&'a NetworkParams),
    Local { method: Method, n_est: f64, sample: &'a SampleSet },
    Rw { n_est: f64, resampling: RwResampling },
}

impl<'a> RankEstimator<'a> {
    pub fn new(method: Method, params: &'a NetworkParams, sample: Option<&'a SampleSet>) -> Result<Self> {
        let need_sample = || sample.ok_or_else(|| Error::InvalidParameter(format!("method {method} needs a sample")));
        Ok(match method {
            Method::Pl => RankEstimator::Pl(params),
            Method::Pd => RankEstimator::Pd(params),
            Method::Us => RankEstimator::Local { method, n_est: params.est_size, sample: need_sample()? },
            Method::Mh => {
                let s = need_sample()?;
                if s.method() != SamplingMethod::Mhrw {
                    return Err(Error::InvalidParameter(format!(
                        "MH needs an mhrw sample, got {}",
                        s.method().as_str()
                    )));
                }
                RankEstimator::Local { method, n_est: params.est_size, sample: s }
            }
            Method::Rw => {
                let s = need_sample()?;
                if s.method() != SamplingMethod::Rw {
                    return Err(Error::InvalidParameter(format!("RW needs an rw sample, got {}", s.method().as_str())));
                }
                RankEstimator::Rw { n_est: params.est_size, resampling: RwResampling::from_sample(s)? }
            }
        })
    }

    pub fn rank(&self, d_u: usize) -> Result<f64> {
        match self {
            RankEstimator::Pl(p) => rank_pl(p, d_u),
            RankEstimator::Pd(p) => rank_pd(p.est_size, p.est_avg_degree, p.est_max_degree, d_u),
            RankEstimator::Local { n_est, sample, .. } => rank_us(*n_est, sample.size(), local_rank(sample, d_u)),
            RankEstimator::Rw { n_est, resampling } => resampling.rank(*n_est, d_u),
        }
    }
}

/// Estimates the rank of a degree-`d_u` node with `method`. Sampling methods
/// need `sample`; PL and PD use `params` alone.
pub fn estimate_rank<'a>(
    method: Method,
    params: &'a NetworkParams,
    sample: Option<&SampleSet>,
    d_u: usize,
) -> Result<RankEstimate<'a>> {
    let est_rank = RankEstimator::new(method, params, sample)?.rank(d_u)?;
    Ok(RankEstimate {
        node_degree: d_u,
        method,
        est_rank,
        sample_size: sample.map_or(0, SampleSet::size),
        sample_seed: sample.map(SampleSet::seed),
        params_used: params,
    })
}
