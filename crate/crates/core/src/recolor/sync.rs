use std::time::Instant;

use super::permutation::ColorClassPermutation;
use super::piggyback::{plan_piggyback, FlushPoint, PiggybackPlan};
use super::RecolorError;
use crate::graph::{RankView, VertexId};
use crate::metrics::{RunMetrics, TrafficCounters};
use crate::seq::{ColorSelector, Coloring, SelectionKind};
use crate::{Color, UNCOLORED};

/// Options for one synchronous recoloring iteration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecolorOptions {
    pub selection: SelectionKind,
    pub piggyback: bool,
    pub seed: u64,
    /// Keys the random stream of Random-X selection.
    pub epoch: u64,
}

impl Default for RecolorOptions {
    fn default() -> Self {
        Self {
            selection: SelectionKind::FirstFit,
            piggyback: false,
            seed: 0,
            epoch: 0,
        }
    }
}

/// Checks that `coloring` is complete and proper on every view and that
/// `perm` covers all its colors.
pub(crate) fn check_input(
    views: &[RankView],
    coloring: &Coloring,
    perm: &ColorClassPermutation,
) -> Result<(), RecolorError> {
    let mut conflicts = 0usize;
    for view in views {
        for u in 0..view.num_owned() {
            let v = view.global(u);
            let c = coloring.get(v).ok_or(RecolorError::Incomplete(v))?;
            if !perm.covers(c) {
                return Err(RecolorError::PermutationMismatch(c));
            }
            conflicts += view
                .owned_neighbors(u)
                .iter()
                .filter(|&&w| view.global(w) > v && coloring.get(view.global(w)) == Some(c))
                .count();
            conflicts += view
                .ghost_neighbors(u)
                .iter()
                .filter(|g| g.vertex > v && coloring.get(g.vertex) == Some(c))
                .count();
        }
    }
    if conflicts > 0 {
        return Err(RecolorError::InvalidInput(conflicts));
    }
    Ok(())
}

/// Pending outgoing updates of one rank, per neighbor rank.
struct Outbox {
    buffers: Vec<Vec<(VertexId, Color)>>,
}

struct RankState {
    new_colors: Vec<Color>,
    /// Ghost colors received during this iteration.
    fresh: Vec<Color>,
    /// Owned locals per step, ascending vertex id.
    classes: Vec<Vec<usize>>,
    selector: ColorSelector,
    outbox: Outbox,
}

/// One recoloring iteration over the color classes in `perm` order. Every
/// rank recolors its members of class `perm.order()[k - 1]` at step `k`
/// against the new colors known so far, then exchanges boundary updates:
/// after every step on every neighbor channel, or only at the flush points
/// of a piggyback plan. Ghost tables of `views` are refreshed with the new
/// colors.
pub fn recolor_sync(
    views: &mut [RankView],
    coloring: &Coloring,
    perm: &ColorClassPermutation,
    opts: &RecolorOptions,
) -> Result<(Coloring, RunMetrics), RecolorError> {
    let started = Instant::now();
    check_input(views, coloring, perm)?;
    opts.selection
        .validate()
        .map_err(RecolorError::Config)?;
    let steps = perm.num_steps();
    let p = views.len();
    let max_degree = views
        .iter()
        .flat_map(|v| (0..v.num_owned()).map(move |u| v.degree(u)))
        .max()
        .unwrap_or(0);
    let plan = opts.piggyback.then(|| plan_piggyback(views, perm, coloring));

    let mut states: Vec<RankState> = views
        .iter()
        .map(|view| {
            let mut classes = vec![Vec::new(); steps + 1];
            for u in 0..view.num_owned() {
                let c = coloring.get(view.global(u)).unwrap();
                classes[perm.step_of(c)].push(u);
            }
            RankState {
                new_colors: vec![UNCOLORED; view.num_owned()],
                fresh: vec![UNCOLORED; view.ghosts().len()],
                classes,
                selector: ColorSelector::new(opts.selection, opts.seed, view.rank(), p, max_degree),
                outbox: Outbox {
                    buffers: vec![Vec::new(); p],
                },
            }
        })
        .collect();

    let mut traffic = TrafficCounters::default();
    for k in 1..=steps {
        for (view, st) in views.iter().zip(states.iter_mut()) {
            for i in 0..st.classes[k].len() {
                let u = st.classes[k][i];
                let forbidden = st.selector.start();
                for &w in view.owned_neighbors(u) {
                    if st.new_colors[w] != UNCOLORED {
                        forbidden.insert(st.new_colors[w]);
                    }
                }
                for g in view.ghost_neighbors(u) {
                    let earlier = perm.step_of(coloring.get(g.vertex).unwrap()) < k;
                    let known = st.fresh[g.slot] != UNCOLORED;
                    assert_eq!(
                        earlier, known,
                        "rank {} step {k}: ghost {} update out of step",
                        view.rank(),
                        g.vertex
                    );
                    if known {
                        forbidden.insert(st.fresh[g.slot]);
                    }
                }
                let v = view.global(u);
                let c = st.selector.choose(v, opts.epoch);
                st.new_colors[u] = c;
                for q in view.ghost_ranks(u) {
                    st.outbox.buffers[q].push((v, c));
                }
            }
        }

        match &plan {
            None => exchange(views, &mut states, &mut traffic, |_, _, buffer| {
                Some(std::mem::take(buffer))
            }),
            Some(plan) => exchange(views, &mut states, &mut traffic, |from, to, buffer| {
                take_flush(plan, from, to, FlushPoint::AfterStep(k), buffer)
            }),
        }
    }
    if let Some(plan) = &plan {
        exchange(views, &mut states, &mut traffic, |from, to, buffer| {
            take_flush(plan, from, to, FlushPoint::EndOfIteration, buffer)
        });
    }

    let mut out = Coloring::uncolored(coloring.len());
    for (view, st) in views.iter_mut().zip(&states) {
        for (u, &c) in st.new_colors.iter().enumerate() {
            out.set(view.global(u), c);
        }
        for (slot, &c) in st.fresh.iter().enumerate() {
            assert_ne!(c, UNCOLORED, "ghost slot {slot} never received its new color");
            view.set_ghost_color(slot, c);
        }
    }

    let metrics = RunMetrics {
        num_colors: out.num_colors(),
        rounds: 1,
        supersteps: steps as u64,
        traffic,
        precomm_messages: plan.as_ref().map_or(0, |p| p.precomm_messages()),
        trajectory: vec![coloring.num_colors(), out.num_colors()],
        ticks: steps as u64,
        elapsed: started.elapsed(),
        ..Default::default()
    };
    Ok((out, metrics))
}

/// Removes from `buffer` the updates the plan sends on `from -> to` at
/// `at`, if there is such a flush.
fn take_flush(
    plan: &PiggybackPlan,
    from: usize,
    to: usize,
    at: FlushPoint,
    buffer: &mut Vec<(VertexId, Color)>,
) -> Option<Vec<(VertexId, Color)>> {
    let flush = plan.channel(from, to)?.iter().find(|f| f.at == at)?;
    let (pairs, rest): (Vec<_>, Vec<_>) = buffer
        .drain(..)
        .partition(|(v, _)| flush.vertices.binary_search(v).is_ok());
    *buffer = rest;
    assert_eq!(
        pairs.len(),
        flush.vertices.len(),
        "flush {from}->{to} at {at:?} sent before its vertices were colored"
    );
    Some(pairs)
}

/// Sends, on every neighbor channel, the message `select` cuts from the
/// channel buffer, delivering it before the next step.
fn exchange(
    views: &[RankView],
    states: &mut [RankState],
    traffic: &mut TrafficCounters,
    mut select: impl FnMut(usize, usize, &mut Vec<(VertexId, Color)>) -> Option<Vec<(VertexId, Color)>>,
) {
    let mut in_flight = Vec::new();
    for (view, st) in views.iter().zip(states.iter_mut()) {
        for &q in view.neighbor_ranks() {
            if let Some(pairs) = select(view.rank(), q, &mut st.outbox.buffers[q]) {
                traffic.record(pairs.len());
                in_flight.push((q, pairs));
            }
        }
    }
    for (to, pairs) in in_flight {
        let view = &views[to];
        let st = &mut states[to];
        for (v, c) in pairs {
            let slot = view.ghost_slot(v).expect("update for a non-ghost vertex");
            st.fresh[slot] = c;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_rank_views, path, Graph, Partition};

    fn views(g: &Graph, owner: Vec<usize>, p: usize) -> Vec<RankView> {
        build_rank_views(g, &Partition::new(owner, p).unwrap()).unwrap()
    }

    #[test]
    fn reverse_on_path() {
        let g = path(3);
        let mut vs = views(&g, vec![0, 0, 1], 2);
        let input = Coloring::from_raw(vec![1, 2, 1]);
        let perm = ColorClassPermutation::from_order(vec![2, 1]).unwrap();
        let (out, m) = recolor_sync(&mut vs, &input, &perm, &RecolorOptions::default()).unwrap();
        assert_eq!(out.as_raw(), &[2, 1, 2]);
        assert_eq!(m.ticks, 2);
        assert_eq!(vs[1].ghost_color(vs[1].ghost_slot(1).unwrap()), Some(1));
    }

    #[test]
    fn empty_class_step_still_synchronizes() {
        // rank 1 owns no vertex of class 1 yet takes part in every step
        let g = path(2);
        let mut vs = views(&g, vec![0, 1], 2);
        let input = Coloring::from_raw(vec![1, 2]);
        let perm = ColorClassPermutation::identity(2);
        let (out, m) = recolor_sync(&mut vs, &input, &perm, &RecolorOptions::default()).unwrap();
        assert_eq!(out.as_raw(), &[1, 2]);
        // two steps, both ranks send to each other every step
        assert_eq!(m.messages(), 4);
        assert_eq!(m.empty_messages(), 2);
    }

    #[test]
    fn rejects_invalid_input() {
        let g = path(2);
        let mut vs = views(&g, vec![0, 1], 2);
        let perm = ColorClassPermutation::identity(1);
        let r = recolor_sync(&mut vs, &Coloring::from_raw(vec![1, 1]), &perm, &RecolorOptions::default());
        assert_eq!(r.unwrap_err(), RecolorError::InvalidInput(1));
        let r = recolor_sync(&mut vs, &Coloring::from_raw(vec![1, 0]), &perm, &RecolorOptions::default());
        assert_eq!(r.unwrap_err(), RecolorError::Incomplete(1));
        let r = recolor_sync(&mut vs, &Coloring::from_raw(vec![1, 2]), &perm, &RecolorOptions::default());
        assert_eq!(r.unwrap_err(), RecolorError::PermutationMismatch(2));
    }
}
