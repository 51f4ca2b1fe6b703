//! Synthetic generators: Barabási–Albert preferential attachment and
//! Erdős–Rényi G(n, p).

use super::Graph;
use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Preferential attachment graph with `n` nodes where every node after the
/// first `k` attaches to `k` distinct earlier nodes.
///
/// The first `k` nodes start isolated and node `k` links to all of them, so
/// the result has exactly `k * (n - k)` edges. Later targets are drawn with
/// probability proportional to current degree by picking a uniform entry of
/// the list of all edge endpoints; a repeated target is redrawn.
pub fn generate_ba(n: usize, k: usize, seed: u64) -> Result<Graph> {
    if k < 1 {
        return Err(Error::InvalidParameter("BA requires k >= 1".into()));
    }
    if n <= k {
        return Err(Error::InvalidParameter(format!("BA requires n > k (got n = {n}, k = {k})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edge_count = k * (n - k);
    let mut endpoints: Vec<usize> = Vec::with_capacity(2 * edge_count);
    let mut edges: Vec<(usize, usize)> = Vec::with_capacity(edge_count);

    for target in 0..k {
        edges.push((k, target));
        endpoints.push(k);
        endpoints.push(target);
    }

    // stamp[v] == node means v is already a target of `node`
    let mut stamp = vec![usize::MAX; n];
    let mut chosen = Vec::with_capacity(k);
    for node in (k + 1)..n {
        chosen.clear();
        while chosen.len() < k {
            let v = endpoints[rng.gen_range(0..endpoints.len())];
            if stamp[v] != node {
                stamp[v] = node;
                chosen.push(v);
            }
        }
        for &v in &chosen {
            edges.push((node, v));
            endpoints.push(node);
            endpoints.push(v);
        }
    }
    Graph::from_edges(n, edges)
}

/// G(n, p) with `p = avg_degree_target / (n - 1)`, using geometric skips over
/// the lower-triangular pair space so the cost is linear in the edge count.
pub fn generate_er(n: usize, avg_degree_target: f64, seed: u64) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidParameter("ER requires n >= 2".into()));
    }
    let max = (n - 1) as f64;
    if !(avg_degree_target > 0.0 && avg_degree_target <= max) {
        return Err(Error::InvalidParameter(format!(
            "ER average degree must lie in (0, {max}], got {avg_degree_target}"
        )));
    }
    let p = avg_degree_target / max;
    if p >= 1.0 {
        let edges = (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)));
        return Graph::from_edges(n, edges);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_q = (1.0 - p).ln();
    let mut edges = Vec::with_capacity((p * n as f64 * max / 2.0 * 1.1) as usize + 16);
    let mut v: usize = 1;
    let mut w: i64 = -1;
    while v < n {
        let r: f64 = rng.gen();
        let skip = ((1.0 - r).ln() / log_q).floor();
        w += 1 + if skip > 1e15 { 1_000_000_000_000_000 } else { skip as i64 };
        while v < n && w >= v as i64 {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((v, w as usize));
        }
    }
    Graph::from_edges(n, edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ba_edge_count_is_k_times_n_minus_k() {
        for (n, k) in [(50, 1), (200, 3), (1000, 10)] {
            let g = generate_ba(n, k, 7).unwrap();
            assert_eq!(g.edge_count(), k * (n - k));
            assert_eq!(g.node_count(), n);
        }
    }

    #[test]
    fn ba_degenerate_size_is_star_of_core() {
        let g = generate_ba(11, 10, 1).unwrap();
        assert_eq!(g.edge_count(), 10);
        assert_eq!(g.neighbors(10), &(0..10).collect::<Vec<_>>()[..]);
    }

    #[test]
    fn ba_rejects_n_not_above_k() {
        assert!(generate_ba(5, 10, 0).is_err());
        assert!(generate_ba(10, 10, 0).is_err());
        assert!(generate_ba(10, 0, 0).is_err());
    }

    #[test]
    fn ba_is_deterministic() {
        assert_eq!(generate_ba(500, 4, 99).unwrap(), generate_ba(500, 4, 99).unwrap());
        assert_ne!(generate_ba(500, 4, 99).unwrap(), generate_ba(500, 4, 100).unwrap());
    }

    #[test]
    fn ba_min_degree_is_k() {
        let g = generate_ba(2000, 5, 3).unwrap();
        assert_eq!(g.min_degree(), 5);
    }

    #[test]
    fn er_full_probability_is_complete() {
        let g = generate_er(4, 3.0, 0).unwrap();
        assert_eq!(g.edge_count(), 6);
        assert!(g.degrees().all(|d| d == 3));
    }

    #[test]
    fn er_rejects_out_of_range() {
        assert!(generate_er(1, 0.5, 0).is_err());
        assert!(generate_er(10, 0.0, 0).is_err());
        assert!(generate_er(10, 9.5, 0).is_err());
        assert!(generate_er(10, f64::NAN, 0).is_err());
    }

    #[test]
    fn er_realized_average_near_target() {
        let g = generate_er(20_000, 8.0, 11).unwrap();
        assert!((g.avg_degree() - 8.0).abs() < 0.15, "avg {}", g.avg_degree());
    }
}
