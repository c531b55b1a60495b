use std::time::Duration;

use serde::{Deserialize, Serialize};

/// Bytes charged per transmitted `(vertex, color)` pair: two 32-bit words.
pub const PAIR_BYTES: u64 = 8;

/// Message traffic counters. All fields only ever grow.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrafficCounters {
    pub messages: u64,
    pub nonempty_messages: u64,
    pub pairs: u64,
    pub bytes: u64,
}

impl TrafficCounters {
    pub fn record(&mut self, pairs: usize) {
        self.messages += 1;
        if pairs > 0 {
            self.nonempty_messages += 1;
        }
        self.pairs += pairs as u64;
        self.bytes += pairs as u64 * PAIR_BYTES;
    }

    pub fn empty_messages(&self) -> u64 {
        self.messages - self.nonempty_messages
    }

    pub fn add(&mut self, other: &TrafficCounters) {
        self.messages += other.messages;
        self.nonempty_messages += other.nonempty_messages;
        self.pairs += other.pairs;
        self.bytes += other.bytes;
    }
}

/// Measured outputs of one coloring or recoloring run.
///
/// `ticks` counts scheduler steps along the critical path and stands in for
/// runtime; `elapsed` is wall-clock and informative only.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunMetrics {
    pub num_colors: u32,
    pub rounds: u32,
    pub conflicts: u64,
    pub conflicts_per_round: Vec<u64>,
    pub supersteps: u64,
    pub traffic: TrafficCounters,
    /// Coordination messages sent before coloring steps: class-size
    /// reductions and piggyback schedule exchanges.
    pub precomm_messages: u64,
    /// Color count after each recoloring iteration, starting with the input.
    pub trajectory: Vec<u32>,
    pub ticks: u64,
    pub elapsed: Duration,
}

impl RunMetrics {
    pub fn messages(&self) -> u64 {
        self.traffic.messages
    }

    pub fn nonempty_messages(&self) -> u64 {
        self.traffic.nonempty_messages
    }

    pub fn empty_messages(&self) -> u64 {
        self.traffic.empty_messages()
    }

    /// Adds counters of a later phase. Color count and trajectory are left
    /// to the caller.
    pub fn absorb(&mut self, later: &RunMetrics) {
        self.rounds += later.rounds;
        self.conflicts += later.conflicts;
        self.conflicts_per_round
            .extend_from_slice(&later.conflicts_per_round);
        self.supersteps += later.supersteps;
        self.traffic.add(&later.traffic);
        self.precomm_messages += later.precomm_messages;
        self.ticks += later.ticks;
        self.elapsed += later.elapsed;
    }
}
