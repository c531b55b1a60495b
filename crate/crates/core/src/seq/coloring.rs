use serde::{Deserialize, Serialize};

use super::SeqError;
use crate::graph::{Graph, VertexId};
use crate::{Color, UNCOLORED};

/// Vertex to color map. Colors are positive; `0` marks an uncolored vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    colors: Vec<Color>,
}

impl Coloring {
    pub fn uncolored(n: usize) -> Self {
        Self {
            colors: vec![UNCOLORED; n],
        }
    }

    /// Wraps a raw color vector; zeros are uncolored vertices.
    pub fn from_raw(colors: Vec<Color>) -> Self {
        Self { colors }
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn get(&self, v: VertexId) -> Option<Color> {
        match self.colors[v] {
            UNCOLORED => None,
            c => Some(c),
        }
    }

    pub fn set(&mut self, v: VertexId, color: Color) {
        debug_assert!(color != UNCOLORED);
        self.colors[v] = color;
    }

    pub fn unset(&mut self, v: VertexId) {
        self.colors[v] = UNCOLORED;
    }

    pub fn as_raw(&self) -> &[Color] {
        &self.colors
    }

    pub fn is_complete(&self) -> bool {
        self.colors.iter().all(|&c| c != UNCOLORED)
    }

    /// Largest assigned color, 0 if nothing is colored.
    pub fn num_colors(&self) -> Color {
        self.colors.iter().copied().max().unwrap_or(UNCOLORED)
    }

    /// `sizes[c - 1]` = number of vertices with color `c`, for `c` in `1..=num_colors`.
    pub fn class_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.num_colors() as usize];
        for &c in &self.colors {
            if c != UNCOLORED {
                sizes[c as usize - 1] += 1;
            }
        }
        sizes
    }
}

/// Edges whose endpoints share a color. Empty iff the coloring is valid.
pub fn check_validity(g: &Graph, c: &Coloring) -> Result<Vec<(VertexId, VertexId)>, SeqError> {
    if c.len() != g.num_vertices() {
        return Err(SeqError::SizeMismatch {
            expected: g.num_vertices(),
            found: c.len(),
        });
    }
    if let Some(v) = c.as_raw().iter().position(|&x| x == UNCOLORED) {
        return Err(SeqError::Incomplete(v));
    }
    Ok(g.edges().filter(|&(u, v)| c.colors[u] == c.colors[v]).collect())
}
