use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, RankView, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderingKind {
    Natural,
    LargestFirst,
    SmallestLast,
    InternalFirst,
    BoundaryFirst,
}

impl OrderingKind {
    pub const ALL: [OrderingKind; 5] = [
        OrderingKind::Natural,
        OrderingKind::LargestFirst,
        OrderingKind::SmallestLast,
        OrderingKind::InternalFirst,
        OrderingKind::BoundaryFirst,
    ];

    pub fn short_name(self) -> &'static str {
        match self {
            OrderingKind::Natural => "N",
            OrderingKind::LargestFirst => "L",
            OrderingKind::SmallestLast => "S",
            OrderingKind::InternalFirst => "I",
            OrderingKind::BoundaryFirst => "B",
        }
    }
}

impl fmt::Display for OrderingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrderingKind::Natural => "natural",
            OrderingKind::LargestFirst => "lf",
            OrderingKind::SmallestLast => "sl",
            OrderingKind::InternalFirst => "if",
            OrderingKind::BoundaryFirst => "bf",
        };
        f.write_str(s)
    }
}

impl FromStr for OrderingKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "natural" | "nat" => Ok(OrderingKind::Natural),
            "lf" | "largest-first" => Ok(OrderingKind::LargestFirst),
            "sl" | "smallest-last" => Ok(OrderingKind::SmallestLast),
            "if" | "internal-first" => Ok(OrderingKind::InternalFirst),
            "bf" | "boundary-first" => Ok(OrderingKind::BoundaryFirst),
            other => Err(format!("unknown ordering {other:?}")),
        }
    }
}

/// The set of vertices an ordering is computed over, with the degree and
/// adjacency information locally available. Members are addressed by a
/// dense local index in storage order.
pub trait OrderScope {
    fn len(&self) -> usize;
    fn global(&self, local: usize) -> VertexId;
    /// Degree as seen by the scope owner, including edges leaving the scope.
    fn degree(&self, local: usize) -> usize;
    /// Neighbors inside the scope, as local indices.
    fn scope_neighbors(&self, local: usize) -> &[usize];
    fn is_boundary(&self, local: usize) -> bool;
}

impl OrderScope for Graph {
    fn len(&self) -> usize {
        self.num_vertices()
    }
    fn global(&self, local: usize) -> VertexId {
        local
    }
    fn degree(&self, local: usize) -> usize {
        Graph::degree(self, local)
    }
    fn scope_neighbors(&self, local: usize) -> &[usize] {
        self.neighbors(local)
    }
    fn is_boundary(&self, _local: usize) -> bool {
        false
    }
}

impl OrderScope for RankView {
    fn len(&self) -> usize {
        self.num_owned()
    }
    fn global(&self, local: usize) -> VertexId {
        RankView::global(self, local)
    }
    fn degree(&self, local: usize) -> usize {
        RankView::degree(self, local)
    }
    fn scope_neighbors(&self, local: usize) -> &[usize] {
        self.owned_neighbors(local)
    }
    fn is_boundary(&self, local: usize) -> bool {
        RankView::is_boundary(self, local)
    }
}

/// Visit order as global vertex ids.
pub fn order_vertices<S: OrderScope + ?Sized>(scope: &S, kind: OrderingKind) -> Vec<VertexId> {
    local_order(scope, kind)
        .into_iter()
        .map(|i| scope.global(i))
        .collect()
}

/// Visit order as local indices of `scope`.
pub fn local_order<S: OrderScope + ?Sized>(scope: &S, kind: OrderingKind) -> Vec<usize> {
    let n = scope.len();
    match kind {
        OrderingKind::Natural => (0..n).collect(),
        OrderingKind::LargestFirst => largest_first(scope),
        OrderingKind::SmallestLast => smallest_last(scope),
        OrderingKind::InternalFirst => {
            let (mut first, rest): (Vec<usize>, Vec<usize>) =
                (0..n).partition(|&i| !scope.is_boundary(i));
            first.extend(rest);
            first
        }
        OrderingKind::BoundaryFirst => {
            let (mut first, rest): (Vec<usize>, Vec<usize>) =
                (0..n).partition(|&i| scope.is_boundary(i));
            first.extend(rest);
            first
        }
    }
}

fn largest_first<S: OrderScope + ?Sized>(scope: &S) -> Vec<usize> {
    let n = scope.len();
    let max = (0..n).map(|i| scope.degree(i)).max().unwrap_or(0);
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); max + 1];
    for i in 0..n {
        buckets[scope.degree(i)].push(i);
    }
    buckets.into_iter().rev().flatten().collect()
}

const NIL: usize = usize::MAX;

/// Degree buckets as FIFO doubly linked lists.
struct Buckets {
    head: Vec<usize>,
    tail: Vec<usize>,
    next: Vec<usize>,
    prev: Vec<usize>,
}

impl Buckets {
    fn new(buckets: usize, items: usize) -> Self {
        Self {
            head: vec![NIL; buckets],
            tail: vec![NIL; buckets],
            next: vec![NIL; items],
            prev: vec![NIL; items],
        }
    }

    fn push_back(&mut self, b: usize, i: usize) {
        self.prev[i] = self.tail[b];
        self.next[i] = NIL;
        if self.tail[b] == NIL {
            self.head[b] = i;
        } else {
            self.next[self.tail[b]] = i;
        }
        self.tail[b] = i;
    }

    fn remove(&mut self, b: usize, i: usize) {
        let (p, n) = (self.prev[i], self.next[i]);
        if p == NIL {
            self.head[b] = n;
        } else {
            self.next[p] = n;
        }
        if n == NIL {
            self.tail[b] = p;
        } else {
            self.prev[n] = p;
        }
    }
}

/// Repeatedly removes a minimum-degree vertex; the visit order is the
/// reverse of the removal order. Buckets are filled in ascending index
/// order and a vertex whose degree drops moves to the back of its new
/// bucket, so ties go to the vertex that has waited longest at that degree.
fn smallest_last<S: OrderScope + ?Sized>(scope: &S) -> Vec<usize> {
    let n = scope.len();
    let mut degree: Vec<usize> = (0..n).map(|i| scope.degree(i)).collect();
    let max = degree.iter().copied().max().unwrap_or(0);
    let mut buckets = Buckets::new(max + 1, n);
    for (i, &d) in degree.iter().enumerate() {
        buckets.push_back(d, i);
    }

    let mut removed = vec![false; n];
    let mut removal = Vec::with_capacity(n);
    let mut cur = 0;
    while removal.len() < n {
        while buckets.head[cur] == NIL {
            cur += 1;
        }
        let v = buckets.head[cur];
        buckets.remove(cur, v);
        removed[v] = true;
        removal.push(v);
        for &u in scope.scope_neighbors(v) {
            if removed[u] {
                continue;
            }
            buckets.remove(degree[u], u);
            degree[u] -= 1;
            buckets.push_back(degree[u], u);
            cur = cur.min(degree[u]);
        }
    }
    removal.reverse();
    removal
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{build_rank_views, path, star, Partition};

    #[test]
    fn natural_is_identity() {
        let g = crate::graph::petersen();
        assert_eq!(order_vertices(&g, OrderingKind::Natural), (0..10).collect::<Vec<_>>());
    }

    #[test]
    fn largest_first_star() {
        let g = star(4);
        assert_eq!(order_vertices(&g, OrderingKind::LargestFirst), vec![0, 1, 2, 3, 4]);
        // center placed last in storage order
        let g = Graph::from_edges(5, (0..4).map(|v| (v, 4)));
        assert_eq!(order_vertices(&g, OrderingKind::LargestFirst), vec![4, 0, 1, 2, 3]);
    }

    #[test]
    fn smallest_last_path() {
        // removal 0, 2, 1 -> visit 1, 2, 0
        assert_eq!(order_vertices(&path(3), OrderingKind::SmallestLast), vec![1, 2, 0]);
    }

    #[test]
    fn smallest_last_star_center_first() {
        let order = order_vertices(&star(5), OrderingKind::SmallestLast);
        assert_eq!(order[0], 0);
    }

    #[test]
    fn internal_and_boundary_first() {
        let g = path(4);
        let part = Partition::new(vec![0, 0, 1, 1], 2).unwrap();
        let views = build_rank_views(&g, &part).unwrap();
        assert_eq!(order_vertices(&views[0], OrderingKind::InternalFirst), vec![0, 1]);
        assert_eq!(order_vertices(&views[0], OrderingKind::BoundaryFirst), vec![1, 0]);
        assert_eq!(order_vertices(&views[1], OrderingKind::InternalFirst), vec![3, 2]);
        // whole graph scope has no boundary
        assert_eq!(order_vertices(&g, OrderingKind::BoundaryFirst), vec![0, 1, 2, 3]);
    }

    #[test]
    fn parse_round_trip() {
        for k in OrderingKind::ALL {
            assert_eq!(k.to_string().parse::<OrderingKind>().unwrap(), k);
        }
        assert!("xyz".parse::<OrderingKind>().is_err());
    }
}
