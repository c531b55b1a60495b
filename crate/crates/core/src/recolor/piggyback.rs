use std::collections::BTreeMap;

use super::permutation::ColorClassPermutation;
use crate::graph::{RankView, VertexId};
use crate::seq::Coloring;

/// When a buffered update is sent during one recoloring iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FlushPoint {
    /// At the end of the given 1-based color step.
    AfterStep(usize),
    /// After the last step; the receiver needs the colors only for the
    /// next iteration.
    EndOfIteration,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flush {
    pub at: FlushPoint,
    /// Sender-owned vertices whose new colors this flush carries, ascending.
    pub vertices: Vec<VertexId>,
}

/// Flush schedule for every directed channel `(sender, receiver)` that
/// carries at least one boundary vertex. Flushes per channel are strictly
/// increasing and never empty.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PiggybackPlan {
    channels: BTreeMap<(usize, usize), Vec<Flush>>,
    precomm_messages: u64,
}

impl PiggybackPlan {
    pub fn channel(&self, from: usize, to: usize) -> Option<&[Flush]> {
        self.channels.get(&(from, to)).map(Vec::as_slice)
    }

    pub fn channels(&self) -> impl Iterator<Item = ((usize, usize), &[Flush])> {
        self.channels.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    /// Messages `rank` will receive, as `(sender, flush point)`, learned
    /// through pre-communication.
    pub fn expected_by(&self, rank: usize) -> Vec<(usize, FlushPoint)> {
        let mut out: Vec<(usize, FlushPoint)> = self
            .channels
            .iter()
            .filter(|((_, to), _)| *to == rank)
            .flat_map(|(&(from, _), flushes)| flushes.iter().map(move |f| (from, f.at)))
            .collect();
        out.sort_by_key(|&(from, at)| (at, from));
        out
    }

    pub fn num_messages(&self) -> usize {
        self.channels.values().map(Vec::len).sum()
    }

    /// One schedule message per directed neighbor channel.
    pub fn precomm_messages(&self) -> u64 {
        self.precomm_messages
    }
}

/// Each sender buffers its boundary updates per receiver and ships the
/// whole buffer at the end of the step before the receiver first needs
/// any of it: the step just before the earliest later-colored ghost
/// neighbor there. Updates nobody needs within the iteration wait for the
/// end of it unless an earlier flush picks them up.
pub fn plan_piggyback(
    views: &[RankView],
    perm: &ColorClassPermutation,
    coloring: &Coloring,
) -> PiggybackPlan {
    // (own step, deadline, vertex) per directed channel
    let mut items: BTreeMap<(usize, usize), Vec<(usize, FlushPoint, VertexId)>> = BTreeMap::new();
    let mut precomm = 0u64;
    let step = |v: VertexId| perm.step_of(coloring.get(v).expect("coloring is complete"));

    for view in views {
        precomm += view.neighbor_ranks().len() as u64;
        for u in 0..view.num_owned() {
            if !view.is_boundary(u) {
                continue;
            }
            let b = view.global(u);
            let own_step = step(b);
            let mut deadline: BTreeMap<usize, FlushPoint> = BTreeMap::new();
            for g in view.ghost_neighbors(u) {
                let their_step = step(g.vertex);
                let point = if their_step > own_step {
                    FlushPoint::AfterStep(their_step - 1)
                } else {
                    FlushPoint::EndOfIteration
                };
                deadline
                    .entry(g.owner)
                    .and_modify(|p| *p = (*p).min(point))
                    .or_insert(point);
            }
            for (to, point) in deadline {
                items.entry((view.rank(), to)).or_default().push((own_step, point, b));
            }
        }
    }

    let channels = items
        .into_iter()
        .map(|(k, mut pending)| {
            pending.sort_unstable();
            let mut flushes = Vec::new();
            let mut buffer: Vec<(FlushPoint, VertexId)> = Vec::new();
            let mut next = pending.into_iter().peekable();
            for k_step in 1..=perm.num_steps() {
                while let Some(&(s, at, v)) = next.peek() {
                    if s != k_step {
                        break;
                    }
                    buffer.push((at, v));
                    next.next();
                }
                let at = FlushPoint::AfterStep(k_step);
                if buffer.iter().any(|&(d, _)| d == at) {
                    flushes.push(drain_flush(at, &mut buffer));
                }
            }
            debug_assert!(next.peek().is_none());
            if !buffer.is_empty() {
                flushes.push(drain_flush(FlushPoint::EndOfIteration, &mut buffer));
            }
            (k, flushes)
        })
        .collect();

    PiggybackPlan {
        channels,
        precomm_messages: precomm,
    }
}

fn drain_flush(at: FlushPoint, buffer: &mut Vec<(FlushPoint, VertexId)>) -> Flush {
    let mut vertices: Vec<VertexId> = buffer.drain(..).map(|(_, v)| v).collect();
    vertices.sort_unstable();
    Flush { at, vertices }
}
