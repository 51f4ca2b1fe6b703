//! Graph sources: a file on disk or an inline generator spec.

use anyhow::{bail, Context, Result};
use degrank::graph::{generate_ba, generate_er, read_graph_file};
use degrank::Graph;
use std::path::Path;

/// Loads `spec`, which is either a path (edge list or binary cache) or one of
/// `ba:N:K[:SEED]` and `er:N:AVG[:SEED]`. Generators without an explicit
/// seed use `default_seed`.
pub fn load_graph(spec: &str, default_seed: u64) -> Result<Graph> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts[0] {
        "ba" | "er" if parts.len() == 3 || parts.len() == 4 => {
            let n: usize = parts[1].parse().with_context(|| format!("bad node count in {spec:?}"))?;
            let seed = match parts.get(3) {
                Some(s) => s.parse().with_context(|| format!("bad seed in {spec:?}"))?,
                None => default_seed,
            };
            if parts[0] == "ba" {
                let k: usize = parts[2].parse().with_context(|| format!("bad k in {spec:?}"))?;
                Ok(generate_ba(n, k, seed)?)
            } else {
                let avg: f64 = parts[2].parse().with_context(|| format!("bad average degree in {spec:?}"))?;
                Ok(generate_er(n, avg, seed)?)
            }
        }
        "ba" | "er" => bail!("generator spec must be ba:N:K[:SEED] or er:N:AVG[:SEED], got {spec:?}"),
        _ => read_graph_file(Path::new(spec)).with_context(|| format!("reading graph {spec}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_specs() {
        let g = load_graph("ba:50:3", 1).unwrap();
        assert_eq!(g.edge_count(), 3 * 47);
        assert_eq!(load_graph("ba:50:3:9", 0).unwrap(), load_graph("ba:50:3", 9).unwrap());
        assert!(load_graph("er:100:4", 2).is_ok());
        assert!(load_graph("ba:50", 0).is_err());
        assert!(load_graph("ba:5:10", 0).is_err());
    }
}
