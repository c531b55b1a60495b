//! Sequential greedy coloring: vertex orderings, color selection
//! strategies, validity checking, and an exact oracle for tiny graphs.

mod coloring;
mod greedy;
mod oracle;
mod order;
mod select;

use thiserror::Error;

pub use coloring::{check_validity, Coloring};
pub use greedy::greedy_color;
pub(crate) use greedy::check_permutation;
pub use oracle::{chromatic_oracle, chromatic_oracle_with_cap, DEFAULT_ORACLE_CAP};
pub use order::{local_order, order_vertices, OrderScope, OrderingKind};
pub use select::{
    pick_color, random_x_candidates, vertex_rng, ColorSelector, ForbiddenColors,
    SelectionContext, SelectionKind,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SeqError {
    #[error("visit order is not a permutation of the vertices")]
    NotPermutation,
    #[error("vertex {0} is uncolored")]
    Incomplete(usize),
    #[error("coloring has {found} entries, graph has {expected} vertices")]
    SizeMismatch { expected: usize, found: usize },
    #[error("exact oracle limited to {cap} vertices, graph has {vertices}")]
    OracleCap { vertices: usize, cap: usize },
    #[error("invalid selection: {0}")]
    InvalidSelection(String),
}
