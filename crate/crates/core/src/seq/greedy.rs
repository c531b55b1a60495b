use super::{Coloring, ColorSelector, SelectionKind, SeqError};
use crate::graph::{Graph, VertexId};

/// Greedy coloring visiting `order`, which must be a permutation of the
/// vertices. Randomized selections draw from a per-vertex stream of `seed`.
pub fn greedy_color(
    g: &Graph,
    order: &[VertexId],
    kind: SelectionKind,
    seed: u64,
) -> Result<Coloring, SeqError> {
    let n = g.num_vertices();
    check_permutation(order, n)?;
    kind.validate().map_err(SeqError::InvalidSelection)?;

    let mut coloring = Coloring::uncolored(n);
    let mut selector = ColorSelector::new(kind, seed, 0, 1, g.max_degree());
    for &v in order {
        let forbidden = selector.start();
        for &w in g.neighbors(v) {
            if let Some(c) = coloring.get(w) {
                forbidden.insert(c);
            }
        }
        let c = selector.choose(v, 0);
        coloring.set(v, c);
    }
    Ok(coloring)
}

pub(crate) fn check_permutation(order: &[VertexId], n: usize) -> Result<(), SeqError> {
    if order.len() != n {
        return Err(SeqError::NotPermutation);
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(SeqError::NotPermutation);
        }
    }
    Ok(())
}
