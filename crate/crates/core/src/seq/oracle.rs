use super::SeqError;
use crate::graph::Graph;

pub const DEFAULT_ORACLE_CAP: usize = 12;

/// Exact chromatic number by exhaustive search, for graphs with at most
/// [`DEFAULT_ORACLE_CAP`] vertices.
pub fn chromatic_oracle(g: &Graph) -> Result<u32, SeqError> {
    chromatic_oracle_with_cap(g, DEFAULT_ORACLE_CAP)
}

pub fn chromatic_oracle_with_cap(g: &Graph, cap: usize) -> Result<u32, SeqError> {
    let n = g.num_vertices();
    if n > cap {
        return Err(SeqError::OracleCap { vertices: n, cap });
    }
    if n == 0 {
        return Ok(0);
    }
    let mut colors = vec![0u32; n];
    for k in 1..=n as u32 {
        if extend(g, &mut colors, 0, k, 0) {
            return Ok(k);
        }
    }
    unreachable!("n colors always suffice")
}

/// Tries every assignment of colors `1..=k` to vertices `v..`, where each
/// vertex may open at most one new color beyond those already used.
fn extend(g: &Graph, colors: &mut [u32], v: usize, k: u32, used: u32) -> bool {
    if v == colors.len() {
        return true;
    }
    for c in 1..=k.min(used + 1) {
        if g.neighbors(v).iter().any(|&w| w < v && colors[w] == c) {
            continue;
        }
        colors[v] = c;
        if extend(g, colors, v + 1, k, used.max(c)) {
            return true;
        }
    }
    colors[v] = 0;
    false
}
