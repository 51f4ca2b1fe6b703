//! Immutable undirected simple graphs in compressed sparse row form, plus the
//! exact degree-rank table every estimator is measured against.

mod generate;
mod io;

pub use generate::{generate_ba, generate_er};
pub use io::{load_binary, load_edge_list, read_graph_file, write_binary, write_edge_list};

use crate::error::{Error, Result};
use std::collections::VecDeque;

/// Undirected simple graph with dense node ids `0..node_count`.
///
/// Neighbor lists are sorted, symmetric, and free of self-loops and
/// duplicates. The graph never changes after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
    edge_count: usize,
    max_degree: usize,
    min_degree: usize,
    original_ids: Option<Vec<u64>>,
}

impl Graph {
    /// Builds a graph on `node_count` nodes. Self-loops and repeated edges
    /// (in either orientation) are dropped.
    pub fn from_edges<I>(node_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        if node_count == 0 {
            return Err(Error::InvalidParameter("graph must have at least one node".into()));
        }
        if node_count > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!("node count {node_count} exceeds the supported maximum")));
        }
        // Each directed arc packed as (source << 32 | target) so one sort groups
        // and orders every adjacency list.
        let mut arcs: Vec<u64> = Vec::new();
        for (u, v) in edges {
            if u >= node_count || v >= node_count {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u}, {v}) references a node outside 0..{node_count}"
                )));
            }
            if u == v {
                continue;
            }
            arcs.push(((u as u64) << 32) | v as u64);
            arcs.push(((v as u64) << 32) | u as u64);
        }
        arcs.sort_unstable();
        arcs.dedup();

        let mut offsets = vec![0usize; node_count + 1];
        for &arc in &arcs {
            offsets[(arc >> 32) as usize + 1] += 1;
        }
        for i in 0..node_count {
            offsets[i + 1] += offsets[i];
        }
        let targets: Vec<usize> = arcs.iter().map(|&a| (a & 0xFFFF_FFFF) as usize).collect();
        Ok(Self::from_csr(offsets, targets, None))
    }

    fn from_csr(offsets: Vec<usize>, targets: Vec<usize>, original_ids: Option<Vec<u64>>) -> Self {
        let n = offsets.len() - 1;
        let (mut max_degree, mut min_degree) = (0, usize::MAX);
        for u in 0..n {
            let d = offsets[u + 1] - offsets[u];
            max_degree = max_degree.max(d);
            min_degree = min_degree.min(d);
        }
        Self { edge_count: targets.len() / 2, offsets, targets, max_degree, min_degree, original_ids }
    }

    pub(crate) fn with_original_ids(mut self, ids: Vec<u64>) -> Self {
        debug_assert_eq!(ids.len(), self.node_count());
        self.original_ids = Some(ids);
        self
    }

    pub fn node_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.offsets.windows(2).map(|w| w[1] - w[0])
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    pub fn min_degree(&self) -> usize {
        self.min_degree
    }

    /// `2m / n`.
    pub fn avg_degree(&self) -> f64 {
        2.0 * self.edge_count as f64 / self.node_count() as f64
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.node_count())
            .flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Id of `u` in the source file, when the graph was loaded from one.
    pub fn original_id(&self, u: usize) -> u64 {
        match &self.original_ids {
            Some(ids) => ids[u],
            None => u as u64,
        }
    }

    /// Dense index of the node with original id `id`.
    pub fn node_index(&self, id: u64) -> Option<usize> {
        match &self.original_ids {
            Some(ids) => ids.binary_search(&id).ok(),
            None => usize::try_from(id).ok().filter(|&u| u < self.node_count()),
        }
    }

    pub fn original_ids(&self) -> Option<&[u64]> {
        self.original_ids.as_deref()
    }

    /// `hist[j]` is the number of nodes with degree `j`.
    pub fn degree_histogram(&self) -> Vec<usize> {
        let mut hist = vec![0usize; self.max_degree + 1];
        for d in self.degrees() {
            hist[d] += 1;
        }
        hist
    }

    /// Distinct degree values present in the graph, ascending.
    pub fn distinct_degrees(&self) -> Vec<usize> {
        self.degree_histogram().iter().enumerate().filter(|(_, &c)| c > 0).map(|(d, _)| d).collect()
    }

    /// Nodes of the largest connected component, ascending. Ties go to the
    /// component containing the smallest node id.
    pub fn largest_component(&self) -> Vec<usize> {
        let n = self.node_count();
        let mut label = vec![usize::MAX; n];
        let mut best = (0usize, 0usize);
        let mut queue = VecDeque::new();
        for root in 0..n {
            if label[root] != usize::MAX {
                continue;
            }
            label[root] = root;
            queue.push_back(root);
            let mut size = 0;
            while let Some(u) = queue.pop_front() {
                size += 1;
                for &v in self.neighbors(u) {
                    if label[v] == usize::MAX {
                        label[v] = root;
                        queue.push_back(v);
                    }
                }
            }
            if size > best.1 {
                best = (root, size);
            }
        }
        (0..n).filter(|&u| label[u] == best.0).collect()
    }

    pub(crate) fn csr(&self) -> (&[usize], &[usize]) {
        (&self.offsets, &self.targets)
    }
}

/// Exact degree ranks: `rank_of(u) = 1 + |{v : d_v > d_u}|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankTable {
    rank_of: Vec<usize>,
    nodes_above: Vec<usize>,
}

impl RankTable {
    pub fn rank_of(&self, u: usize) -> usize {
        self.rank_of[u]
    }

    pub fn ranks(&self) -> &[usize] {
        &self.rank_of
    }

    /// Number of nodes whose degree is strictly greater than `degree`.
    pub fn nodes_above(&self, degree: usize) -> usize {
        self.nodes_above.get(degree).copied().unwrap_or(0)
    }

    /// Rank any node of this degree would have; defined for absent degrees too.
    pub fn rank_for_degree(&self, degree: usize) -> usize {
        self.nodes_above(degree) + 1
    }

    pub fn node_count(&self) -> usize {
        self.rank_of.len()
    }
}

/// Computes exact ranks from the degree histogram and its suffix sums.
pub fn exact_degree_ranks(g: &Graph) -> RankTable {
    let hist = g.degree_histogram();
    let mut nodes_above = vec![0usize; hist.len()];
    let mut above = 0;
    for d in (0..hist.len()).rev() {
        nodes_above[d] = above;
        above += hist[d];
    }
    let rank_of = g.degrees().map(|d| nodes_above[d] + 1).collect();
    RankTable { rank_of, nodes_above }
}
