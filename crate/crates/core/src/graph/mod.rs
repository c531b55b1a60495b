//! Undirected simple graphs in compressed adjacency form, plus the ways to
//! build them: file readers, the RMAT generator, and a few fixed families.

mod generators;
mod io;
mod partition;
mod rmat;

pub use generators::{complete, complete_bipartite, cycle, gnp, path, petersen, star};
pub use io::{
    load_edge_list, load_matrix_market, load_partition_file, write_edge_list,
    write_matrix_market, write_partition_file, ParseError,
};
pub use partition::{block_partition, build_rank_views, GhostNeighbor, Partition, PartitionError, RankView};
pub use rmat::{generate_rmat, generate_rmat_with_cap, RmatError, RmatParams, DEFAULT_RMAT_MEMORY_CAP};

/// Vertex identifier, 0-based.
pub type VertexId = usize;

/// Compressed adjacency structure for an undirected simple graph.
///
/// Every neighbor list is strictly sorted, contains no self-loop, and the
/// adjacency relation is symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<VertexId>,
}

impl Graph {
    /// Builds a graph on `n` vertices from an arbitrary edge list.
    ///
    /// Edges are symmetrized; self-loops and duplicates are dropped.
    /// Panics if an endpoint is `>= n`.
    pub fn from_edges<I>(n: usize, edges: I) -> Self
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut degree = vec![0usize; n];
        let mut pairs = Vec::new();
        for (u, v) in edges {
            assert!(u < n && v < n, "edge ({u}, {v}) out of range for n={n}");
            if u == v {
                continue;
            }
            pairs.push((u, v));
            degree[u] += 1;
            degree[v] += 1;
        }

        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0; *offsets.last().unwrap()];
        for (u, v) in pairs {
            targets[fill[u]] = v;
            fill[u] += 1;
            targets[fill[v]] = u;
            fill[v] += 1;
        }

        // sort + dedup each list, then compact
        let mut compact_offsets = Vec::with_capacity(n + 1);
        compact_offsets.push(0);
        let mut write = 0;
        for v in 0..n {
            let (lo, hi) = (offsets[v], offsets[v + 1]);
            targets[lo..hi].sort_unstable();
            let mut last = None;
            for i in lo..hi {
                let t = targets[i];
                if last != Some(t) {
                    targets[write] = t;
                    write += 1;
                    last = Some(t);
                }
            }
            compact_offsets.push(write);
        }
        targets.truncate(write);

        let g = Self {
            offsets: compact_offsets,
            targets,
        };
        debug_assert!(g.check_invariants().is_ok());
        g
    }

    pub fn num_vertices(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_edges(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    /// Maximum degree, 0 for an edgeless graph.
    pub fn max_degree(&self) -> usize {
        (0..self.num_vertices())
            .map(|v| self.degree(v))
            .max()
            .unwrap_or(0)
    }

    pub fn vertices(&self) -> std::ops::Range<VertexId> {
        0..self.num_vertices()
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices().flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .copied()
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Verifies symmetry, sortedness, and absence of self-loops.
    pub fn check_invariants(&self) -> Result<(), String> {
        let n = self.num_vertices();
        if self.targets.len() % 2 != 0 {
            return Err("odd adjacency length".into());
        }
        for v in 0..n {
            let adj = self.neighbors(v);
            for w in adj.windows(2) {
                if w[0] >= w[1] {
                    return Err(format!("adjacency of {v} not strictly sorted"));
                }
            }
            for &u in adj {
                if u >= n {
                    return Err(format!("neighbor {u} of {v} out of range"));
                }
                if u == v {
                    return Err(format!("self-loop at {v}"));
                }
                if !self.has_edge(u, v) {
                    return Err(format!("edge ({v}, {u}) not mirrored"));
                }
            }
        }
        Ok(())
    }
}
