//! Distributed-memory graph coloring on a simulated message-passing
//! cluster.
//!
//! * [`graph`]: graph storage, file formats, RMAT generation, partitions
//!   and per-rank views.
//! * [`seq`]: sequential greedy coloring with vertex orderings and color
//!   selection strategies (First Fit, Staggered First Fit, Least Used,
//!   Random-X Fit).
//! * [`dist`]: the round/superstep speculative protocol with conflict
//!   resolution, in synchronous and asynchronous flavors.
//! * [`recolor`]: iterated recoloring over permuted color classes, with a
//!   piggybacking planner that batches boundary updates.
//! * [`bench`]: normalization, geometric means, sweeps and result files.

pub mod bench;
pub mod dist;
pub mod graph;
mod metrics;
pub mod recolor;
pub mod seq;

pub use metrics::{RunMetrics, TrafficCounters, PAIR_BYTES};

/// Vertex color. Valid colors start at 1.
pub type Color = u32;

/// Marker for a vertex without a color.
pub const UNCOLORED: Color = 0;

pub type NormalizedRecordF64 = bench::NormalizedRecord<f64>;
pub type NormalizedRecordF32 = bench::NormalizedRecord<f32>;
