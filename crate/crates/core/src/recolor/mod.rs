//! Iterated recoloring: every iteration walks the color classes of the
//! current coloring in a permuted order and recolors class members
//! greedily. With First Fit the color count never grows.

mod permutation;
mod piggyback;
mod schedule;
mod sync;

use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dist::{run_protocol_with_orders, ProtocolConfig, ProtocolError};
use crate::graph::{Graph, RankView};
use crate::metrics::RunMetrics;
use crate::seq::{Coloring, SelectionKind};
use crate::Color;

pub use permutation::{build_class_permutation, sizes_map, ColorClassPermutation, PermutationKind};
pub use piggyback::{plan_piggyback, Flush, FlushPoint, PiggybackPlan};
pub use schedule::{PermutationSchedule, RandomInjection};
pub use sync::{recolor_sync, RecolorOptions};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecolorError {
    #[error("class order is not a permutation of the colors")]
    NotAPermutation,
    #[error("no class size for color {0}")]
    MissingClassSize(Color),
    #[error("vertex {0} has no color")]
    Incomplete(usize),
    #[error("input coloring has {0} conflicting edges")]
    InvalidInput(usize),
    #[error("color {0} is not covered by the class permutation")]
    PermutationMismatch(Color),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub enum RecolorFlavor {
    /// Class-by-class steps with a barrier after each.
    #[default]
    Synchronous,
    /// The coloring protocol run with per-rank visit orders given by the
    /// class permutation.
    Asynchronous(ProtocolConfig),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RecolorConfig {
    pub schedule: PermutationSchedule,
    pub iterations: usize,
    pub selection: SelectionKind,
    pub piggyback: bool,
    pub seed: u64,
    pub flavor: RecolorFlavor,
}

impl Default for RecolorConfig {
    fn default() -> Self {
        Self {
            schedule: PermutationSchedule::fixed(PermutationKind::NonDecreasing),
            iterations: 1,
            selection: SelectionKind::FirstFit,
            piggyback: false,
            seed: 0,
            flavor: RecolorFlavor::Synchronous,
        }
    }
}

/// Global class sizes of `coloring` and the messages a reduction of the
/// per-rank counts costs: a gather to one rank and a broadcast back.
pub fn reduce_class_sizes(views: &[RankView], coloring: &Coloring) -> (Vec<usize>, u64) {
    let mut sizes = vec![0usize; coloring.num_colors() as usize];
    for view in views {
        for &v in view.owned() {
            if let Some(c) = coloring.get(v) {
                sizes[c as usize - 1] += 1;
            }
        }
    }
    let messages = 2 * views.len().saturating_sub(1) as u64;
    (sizes, messages)
}

/// Builds the permutation used at 1-based `iteration`, returning it with
/// the coordination messages spent on class sizes.
pub fn permutation_for_iteration(
    views: &[RankView],
    coloring: &Coloring,
    schedule: &PermutationSchedule,
    iteration: usize,
    seed: u64,
) -> Result<(ColorClassPermutation, u64), RecolorError> {
    let kind = schedule.kind_at(iteration);
    let (sizes, messages) = reduce_class_sizes(views, coloring);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (iteration as u64).wrapping_mul(0xA24B_AED4_963E_E407));
    let perm = build_class_permutation(&sizes_map(&sizes), kind, &mut rng)?;
    Ok((perm, if kind.needs_sizes() { messages } else { 0 }))
}

/// Recolors asynchronously: each rank visits its vertices by the step of
/// their current class, then by vertex id, under the coloring protocol
/// with conflict resolution.
pub fn recolor_async(
    g: &Graph,
    views: Vec<RankView>,
    coloring: &Coloring,
    perm: &ColorClassPermutation,
    cfg: &ProtocolConfig,
) -> Result<(Coloring, RunMetrics, Vec<RankView>), RecolorError> {
    sync::check_input(&views, coloring, perm)?;
    let orders = views
        .iter()
        .map(|view| {
            let mut locals: Vec<usize> = (0..view.num_owned()).collect();
            locals.sort_by_key(|&u| {
                let v = view.global(u);
                (perm.step_of(coloring.get(v).unwrap()), v)
            });
            locals
        })
        .collect();
    let (out, mut metrics, views) = run_protocol_with_orders(g, views, cfg, orders)?;
    metrics.trajectory = vec![coloring.num_colors(), out.num_colors()];
    Ok((out, metrics, views))
}

/// Runs `cfg.iterations` recoloring iterations. The trajectory in the
/// returned metrics starts with the input color count.
pub fn recolor_iterations(
    g: &Graph,
    mut views: Vec<RankView>,
    coloring: &Coloring,
    cfg: &RecolorConfig,
) -> Result<(Coloring, RunMetrics, Vec<RankView>), RecolorError> {
    let started = Instant::now();
    cfg.selection.validate().map_err(RecolorError::Config)?;
    let mut current = coloring.clone();
    let mut total = RunMetrics {
        num_colors: current.num_colors(),
        trajectory: vec![current.num_colors()],
        ..Default::default()
    };
    for i in 1..=cfg.iterations {
        let (perm, precomm) = permutation_for_iteration(&views, &current, &cfg.schedule, i, cfg.seed)?;
        let (next, mut m) = match &cfg.flavor {
            RecolorFlavor::Synchronous => {
                let opts = RecolorOptions {
                    selection: cfg.selection,
                    piggyback: cfg.piggyback,
                    seed: cfg.seed,
                    epoch: i as u64,
                };
                recolor_sync(&mut views, &current, &perm, &opts)?
            }
            RecolorFlavor::Asynchronous(protocol) => {
                let protocol = ProtocolConfig {
                    selection: cfg.selection,
                    seed: cfg.seed.wrapping_add(i as u64),
                    ..protocol.clone()
                };
                let (next, m, back) = recolor_async(g, views, &current, &perm, &protocol)?;
                views = back;
                (next, m)
            }
        };
        m.precomm_messages += precomm;
        total.absorb(&m);
        total.trajectory.push(next.num_colors());
        current = next;
    }
    total.num_colors = current.num_colors();
    total.elapsed = started.elapsed();
    Ok((current, total, views))
}
