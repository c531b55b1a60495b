use thiserror::Error;

use super::{Graph, VertexId};
use crate::{Color, UNCOLORED};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PartitionError {
    #[error("rank count {ranks} must be in [1, {vertices}]")]
    RankCount { ranks: usize, vertices: usize },
    #[error("vertex {vertex} assigned to rank {owner}, only {ranks} ranks")]
    OwnerOutOfRange {
        vertex: VertexId,
        owner: usize,
        ranks: usize,
    },
    #[error("partition covers {found} vertices, graph has {expected}")]
    Length { expected: usize, found: usize },
}

/// Vertex to rank ownership map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    owner: Vec<usize>,
    ranks: usize,
}

impl Partition {
    pub fn new(owner: Vec<usize>, ranks: usize) -> Result<Self, PartitionError> {
        if ranks == 0 {
            return Err(PartitionError::RankCount {
                ranks,
                vertices: owner.len(),
            });
        }
        if let Some((vertex, &o)) = owner.iter().enumerate().find(|(_, &o)| o >= ranks) {
            return Err(PartitionError::OwnerOutOfRange {
                vertex,
                owner: o,
                ranks,
            });
        }
        Ok(Self { owner, ranks })
    }

    pub fn owner(&self, v: VertexId) -> usize {
        self.owner[v]
    }

    pub fn owners(&self) -> &[usize] {
        &self.owner
    }

    pub fn num_ranks(&self) -> usize {
        self.ranks
    }

    pub fn num_vertices(&self) -> usize {
        self.owner.len()
    }
}

/// Contiguous id ranges; the first `n % p` ranks get one extra vertex.
pub fn block_partition(g: &Graph, ranks: usize) -> Result<Partition, PartitionError> {
    let n = g.num_vertices();
    if ranks < 1 || ranks > n {
        return Err(PartitionError::RankCount { ranks, vertices: n });
    }
    let (base, extra) = (n / ranks, n % ranks);
    let mut owner = Vec::with_capacity(n);
    for r in 0..ranks {
        let size = base + usize::from(r < extra);
        owner.extend(std::iter::repeat(r).take(size));
    }
    Partition::new(owner, ranks)
}

/// A remote neighbor of an owned vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GhostNeighbor {
    /// Index into the view's ghost table.
    pub slot: usize,
    pub vertex: VertexId,
    pub owner: usize,
}

/// What one rank knows: its owned vertices with their full adjacency,
/// split into owned and ghost neighbors, and the last known ghost colors.
#[derive(Clone, Debug)]
pub struct RankView {
    rank: usize,
    num_ranks: usize,
    owned: Vec<VertexId>,
    local_offsets: Vec<usize>,
    local_targets: Vec<usize>,
    ghost_offsets: Vec<usize>,
    ghost_targets: Vec<GhostNeighbor>,
    boundary: Vec<bool>,
    ghosts: Vec<VertexId>,
    ghost_owner: Vec<usize>,
    ghost_colors: Vec<Color>,
    neighbor_ranks: Vec<usize>,
}

impl RankView {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn num_ranks(&self) -> usize {
        self.num_ranks
    }

    /// Owned vertices in ascending id order; positions are local indices.
    pub fn owned(&self) -> &[VertexId] {
        &self.owned
    }

    pub fn num_owned(&self) -> usize {
        self.owned.len()
    }

    pub fn global(&self, local: usize) -> VertexId {
        self.owned[local]
    }

    pub fn local_of(&self, v: VertexId) -> Option<usize> {
        self.owned.binary_search(&v).ok()
    }

    /// Owned neighbors of a local vertex, as local indices.
    pub fn owned_neighbors(&self, local: usize) -> &[usize] {
        &self.local_targets[self.local_offsets[local]..self.local_offsets[local + 1]]
    }

    pub fn ghost_neighbors(&self, local: usize) -> &[GhostNeighbor] {
        &self.ghost_targets[self.ghost_offsets[local]..self.ghost_offsets[local + 1]]
    }

    /// Full degree, owned plus ghost neighbors.
    pub fn degree(&self, local: usize) -> usize {
        self.owned_neighbors(local).len() + self.ghost_neighbors(local).len()
    }

    pub fn is_boundary(&self, local: usize) -> bool {
        self.boundary[local]
    }

    pub fn num_boundary(&self) -> usize {
        self.boundary.iter().filter(|&&b| b).count()
    }

    pub fn num_internal(&self) -> usize {
        self.num_owned() - self.num_boundary()
    }

    /// Distinct ranks owning a ghost neighbor of `local`, ascending.
    pub fn ghost_ranks(&self, local: usize) -> Vec<usize> {
        let mut ranks: Vec<usize> = self.ghost_neighbors(local).iter().map(|g| g.owner).collect();
        ranks.sort_unstable();
        ranks.dedup();
        ranks
    }

    /// Ranks sharing at least one cross edge with this one, ascending.
    pub fn neighbor_ranks(&self) -> &[usize] {
        &self.neighbor_ranks
    }

    pub fn ghosts(&self) -> &[VertexId] {
        &self.ghosts
    }

    pub fn ghost_owner(&self, slot: usize) -> usize {
        self.ghost_owner[slot]
    }

    pub fn ghost_slot(&self, v: VertexId) -> Option<usize> {
        self.ghosts.binary_search(&v).ok()
    }

    pub fn ghost_color(&self, slot: usize) -> Option<Color> {
        match self.ghost_colors[slot] {
            UNCOLORED => None,
            c => Some(c),
        }
    }

    pub fn set_ghost_color(&mut self, slot: usize, color: Color) {
        self.ghost_colors[slot] = color;
    }

    /// Resets every ghost to uncolored.
    pub fn clear_ghost_colors(&mut self) {
        self.ghost_colors.fill(UNCOLORED);
    }
}

/// One view per rank. Ghost color tables start uncolored.
pub fn build_rank_views(g: &Graph, part: &Partition) -> Result<Vec<RankView>, PartitionError> {
    if part.num_vertices() != g.num_vertices() {
        return Err(PartitionError::Length {
            expected: g.num_vertices(),
            found: part.num_vertices(),
        });
    }
    let p = part.num_ranks();
    let mut owned: Vec<Vec<VertexId>> = vec![Vec::new(); p];
    for v in g.vertices() {
        owned[part.owner(v)].push(v);
    }

    let views = owned
        .into_iter()
        .enumerate()
        .map(|(rank, owned)| {
            let mut ghosts: Vec<VertexId> = owned
                .iter()
                .flat_map(|&v| g.neighbors(v).iter().copied())
                .filter(|&u| part.owner(u) != rank)
                .collect();
            ghosts.sort_unstable();
            ghosts.dedup();
            let ghost_owner: Vec<usize> = ghosts.iter().map(|&u| part.owner(u)).collect();
            let mut neighbor_ranks = ghost_owner.clone();
            neighbor_ranks.sort_unstable();
            neighbor_ranks.dedup();

            let mut local_offsets = vec![0];
            let mut local_targets = Vec::new();
            let mut ghost_offsets = vec![0];
            let mut ghost_targets = Vec::new();
            let mut boundary = Vec::with_capacity(owned.len());
            for &v in &owned {
                let mut is_boundary = false;
                for &u in g.neighbors(v) {
                    let o = part.owner(u);
                    if o == rank {
                        local_targets.push(owned.binary_search(&u).expect("owned neighbor"));
                    } else {
                        is_boundary = true;
                        ghost_targets.push(GhostNeighbor {
                            slot: ghosts.binary_search(&u).expect("ghost neighbor"),
                            vertex: u,
                            owner: o,
                        });
                    }
                }
                local_offsets.push(local_targets.len());
                ghost_offsets.push(ghost_targets.len());
                boundary.push(is_boundary);
            }

            RankView {
                rank,
                num_ranks: p,
                ghost_colors: vec![UNCOLORED; ghosts.len()],
                owned,
                local_offsets,
                local_targets,
                ghost_offsets,
                ghost_targets,
                boundary,
                ghosts,
                ghost_owner,
                neighbor_ranks,
            }
        })
        .collect();
    Ok(views)
}
