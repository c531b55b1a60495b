use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::Graph;

/// 8 GiB.
pub const DEFAULT_RMAT_MEMORY_CAP: usize = 8 << 30;

#[derive(Clone, Debug, PartialEq)]
pub struct RmatParams {
    /// log2 of the vertex count.
    pub scale: u32,
    /// Directed samples drawn per vertex.
    pub edge_factor: usize,
    /// Quadrant probabilities `(a, b, c, d)` for top-left, top-right,
    /// bottom-left and bottom-right.
    pub probabilities: [f64; 4],
    pub seed: u64,
}

impl RmatParams {
    pub const ER: [f64; 4] = [0.25, 0.25, 0.25, 0.25];
    pub const GOOD: [f64; 4] = [0.45, 0.15, 0.15, 0.25];
    pub const BAD: [f64; 4] = [0.55, 0.15, 0.15, 0.15];

    pub fn new(scale: u32, edge_factor: usize, probabilities: [f64; 4], seed: u64) -> Self {
        Self {
            scale,
            edge_factor,
            probabilities,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), RmatError> {
        if self.scale < 1 || self.scale > 40 {
            return Err(RmatError::Scale(self.scale));
        }
        if self.edge_factor < 1 {
            return Err(RmatError::EdgeFactor(self.edge_factor));
        }
        let sum: f64 = self.probabilities.iter().sum();
        if self.probabilities.iter().any(|p| !(*p >= 0.0)) || (sum - 1.0).abs() > 1e-9 {
            return Err(RmatError::Probabilities(self.probabilities));
        }
        Ok(())
    }

    fn estimated_bytes(&self) -> Option<usize> {
        let n = 1usize.checked_shl(self.scale)?;
        let samples = n.checked_mul(self.edge_factor)?;
        // sample buffer + both adjacency directions + offsets
        samples
            .checked_mul(4 * std::mem::size_of::<usize>())?
            .checked_add(n.checked_mul(2 * std::mem::size_of::<usize>())?)
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum RmatError {
    #[error("scale {0} outside [1, 40]")]
    Scale(u32),
    #[error("edge factor {0} must be at least 1")]
    EdgeFactor(usize),
    #[error("quadrant probabilities {0:?} must be non-negative and sum to 1")]
    Probabilities([f64; 4]),
    #[error("generation would need about {needed} bytes, cap is {cap}")]
    MemoryCap { needed: usize, cap: usize },
}

pub fn generate_rmat(params: &RmatParams) -> Result<Graph, RmatError> {
    generate_rmat_with_cap(params, DEFAULT_RMAT_MEMORY_CAP)
}

/// Draws `edge_factor * 2^scale` samples by recursive quadrant descent,
/// then symmetrizes and drops self-loops and duplicates.
pub fn generate_rmat_with_cap(params: &RmatParams, cap_bytes: usize) -> Result<Graph, RmatError> {
    params.validate()?;
    let needed = params.estimated_bytes().unwrap_or(usize::MAX);
    if needed > cap_bytes {
        return Err(RmatError::MemoryCap {
            needed,
            cap: cap_bytes,
        });
    }

    let n = 1usize << params.scale;
    let [a, b, c, _] = params.probabilities;
    let (ab, abc) = (a + b, a + b + c);
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let samples = n * params.edge_factor;
    let mut edges = Vec::with_capacity(samples);
    for _ in 0..samples {
        let (mut row, mut col) = (0usize, 0usize);
        for level in (0..params.scale).rev() {
            let r: f64 = rng.gen();
            let bit = 1usize << level;
            if r < a {
            } else if r < ab {
                col |= bit;
            } else if r < abc {
                row |= bit;
            } else {
                row |= bit;
                col |= bit;
            }
        }
        edges.push((row, col));
    }
    Ok(Graph::from_edges(n, edges))
}
