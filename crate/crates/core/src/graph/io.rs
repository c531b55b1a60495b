use std::io::{self, BufRead, Write};

use thiserror::Error;

use super::{Graph, Partition, VertexId};

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("unsupported MatrixMarket variant: {0}")]
    Unsupported(String),
    #[error("line {line}: {msg}")]
    MalformedLine { line: usize, msg: String },
    #[error("line {line}: index {index} outside [1, {bound}]")]
    IndexOutOfBounds {
        line: usize,
        index: usize,
        bound: usize,
    },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("partition has {found} entries, graph has {expected} vertices")]
    PartitionLength { expected: usize, found: usize },
    #[error("line {line}: owner {owner} outside [0, {ranks})")]
    OwnerOutOfRange {
        line: usize,
        owner: usize,
        ranks: usize,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Reads a MatrixMarket coordinate file as an undirected simple graph.
///
/// Values (real/integer) are ignored. `general` matrices are symmetrized,
/// `symmetric` ones mirrored; the diagonal is dropped and duplicates merged.
pub fn load_matrix_market<R: BufRead>(reader: R) -> Result<Graph, ParseError> {
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| ParseError::MalformedHeader("empty input".into()))?;
    let header = header?;
    let tokens: Vec<String> = header
        .split_whitespace()
        .map(|t| t.to_ascii_lowercase())
        .collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(ParseError::MalformedHeader(header));
    }
    if tokens[2] != "coordinate" {
        return Err(ParseError::Unsupported(tokens[2].clone()));
    }
    match tokens[3].as_str() {
        "pattern" | "real" | "integer" => {}
        other => return Err(ParseError::Unsupported(other.to_string())),
    }
    // general and symmetric yield the same graph once mirrored
    match tokens[4].as_str() {
        "general" | "symmetric" => {}
        other => return Err(ParseError::Unsupported(other.to_string())),
    }

    let mut size: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    let mut entries = 0usize;
    for (idx, line) in lines {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        match size {
            None => {
                let mut dims = [0usize; 3];
                for d in dims.iter_mut() {
                    *d = parse_field(fields.next(), lineno, "size line")?;
                }
                if dims[0] != dims[1] {
                    return Err(ParseError::MalformedHeader(format!(
                        "matrix is {}x{}, expected square",
                        dims[0], dims[1]
                    )));
                }
                if dims[0] == 0 {
                    return Err(ParseError::EmptyGraph);
                }
                size = Some((dims[0], dims[1], dims[2]));
                edges.reserve(dims[2]);
            }
            Some((n, _, _)) => {
                let i: usize = parse_field(fields.next(), lineno, "row index")?;
                let j: usize = parse_field(fields.next(), lineno, "column index")?;
                for index in [i, j] {
                    if index == 0 || index > n {
                        return Err(ParseError::IndexOutOfBounds {
                            line: lineno,
                            index,
                            bound: n,
                        });
                    }
                }
                edges.push((i - 1, j - 1));
                entries += 1;
            }
        }
    }

    let (n, _, nnz) = size.ok_or_else(|| ParseError::MalformedHeader("missing size line".into()))?;
    if entries != nnz {
        return Err(ParseError::MalformedLine {
            line: 0,
            msg: format!("declared {nnz} entries, found {entries}"),
        });
    }
    Ok(Graph::from_edges(n, edges))
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, ParseError> {
    let raw = field.ok_or_else(|| ParseError::MalformedLine {
        line,
        msg: format!("missing {what}"),
    })?;
    raw.parse().map_err(|_| ParseError::MalformedLine {
        line,
        msg: format!("bad {what} {raw:?}"),
    })
}

/// Writes the graph as a symmetric pattern MatrixMarket file (lower triangle).
pub fn write_matrix_market<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    writeln!(out, "%%MatrixMarket matrix coordinate pattern symmetric")?;
    let n = g.num_vertices();
    writeln!(out, "{n} {n} {}", g.num_edges())?;
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", v + 1, u + 1)?;
    }
    Ok(())
}

/// Reads `u v` lines with 0-based ids. Lines starting with `#` or `%` are
/// comments. The vertex count is one past the largest id seen.
pub fn load_edge_list<R: BufRead>(reader: R) -> Result<Graph, ParseError> {
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    let mut n = 0;
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let u: usize = parse_field(fields.next(), lineno, "source")?;
        let v: usize = parse_field(fields.next(), lineno, "target")?;
        n = n.max(u + 1).max(v + 1);
        edges.push((u, v));
    }
    if n == 0 {
        return Err(ParseError::EmptyGraph);
    }
    Ok(Graph::from_edges(n, edges))
}

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> io::Result<()> {
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    Ok(())
}

/// Reads one owner rank per line, line `i` giving the owner of vertex `i`.
pub fn load_partition_file<R: BufRead>(
    reader: R,
    g: &Graph,
    ranks: usize,
) -> Result<Partition, ParseError> {
    let mut owner = Vec::with_capacity(g.num_vertices());
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        for token in line.split_whitespace() {
            let r: usize = parse_field(Some(token), lineno, "owner")?;
            if r >= ranks {
                return Err(ParseError::OwnerOutOfRange {
                    line: lineno,
                    owner: r,
                    ranks,
                });
            }
            owner.push(r);
        }
    }
    if owner.len() != g.num_vertices() {
        return Err(ParseError::PartitionLength {
            expected: g.num_vertices(),
            found: owner.len(),
        });
    }
    Partition::new(owner, ranks).map_err(|e| ParseError::MalformedLine {
        line: 0,
        msg: e.to_string(),
    })
}

pub fn write_partition_file<W: Write>(part: &Partition, mut out: W) -> io::Result<()> {
    for &r in part.owners() {
        writeln!(out, "{r}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::path;

    fn mtx(text: &str) -> Result<Graph, ParseError> {
        load_matrix_market(text.as_bytes())
    }

    #[test]
    fn symmetric_pattern_path() {
        let g = mtx("%%MatrixMarket matrix coordinate pattern symmetric\n% comment\n3 3 2\n2 1\n3 2\n")
            .unwrap();
        assert_eq!(g, path(3));
    }

    #[test]
    fn diagonal_dropped() {
        let g = mtx("%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 4.0\n2 1 -1.0\n").unwrap();
        assert_eq!(g.num_edges(), 1);
        assert!(g.check_invariants().is_ok());
    }

    #[test]
    fn general_duplicate_pair_merges() {
        let g = mtx("%%MatrixMarket matrix coordinate integer general\n2 2 2\n1 2 3\n2 1 3\n").unwrap();
        assert_eq!(g.num_edges(), 1);
    }

    #[test]
    fn errors_are_distinct() {
        assert!(matches!(
            mtx("%%MatrixMarket matrix array real general\n"),
            Err(ParseError::Unsupported(_))
        ));
        assert!(matches!(mtx("hello\n"), Err(ParseError::MalformedHeader(_))));
        assert!(matches!(
            mtx("%%MatrixMarket matrix coordinate pattern general\n3 3 1\n4 1\n"),
            Err(ParseError::IndexOutOfBounds { index: 4, .. })
        ));
        assert!(matches!(
            mtx("%%MatrixMarket matrix coordinate pattern general\n0 0 0\n"),
            Err(ParseError::EmptyGraph)
        ));
        assert!(matches!(
            mtx("%%MatrixMarket matrix coordinate pattern general\n3 3 2\n2 1\n"),
            Err(ParseError::MalformedLine { .. })
        ));
    }

    #[test]
    fn matrix_market_write_then_read() {
        let g = crate::graph::petersen();
        let mut buf = Vec::new();
        write_matrix_market(&g, &mut buf).unwrap();
        assert_eq!(mtx(std::str::from_utf8(&buf).unwrap()).unwrap(), g);
    }

    #[test]
    fn edge_list() {
        let g = load_edge_list("# P3\n0 1\n1 2\n".as_bytes()).unwrap();
        assert_eq!(g, path(3));
        assert!(matches!(
            load_edge_list("0 x\n".as_bytes()),
            Err(ParseError::MalformedLine { line: 1, .. })
        ));
    }

    #[test]
    fn partition_file() {
        let g = path(4);
        let p = load_partition_file("0\n0\n1\n1\n".as_bytes(), &g, 2).unwrap();
        assert_eq!(p.owners(), &[0, 0, 1, 1]);

        let err = load_partition_file("0\n5\n1\n1\n".as_bytes(), &g, 2).unwrap_err();
        assert!(matches!(err, ParseError::OwnerOutOfRange { owner: 5, .. }));

        let err = load_partition_file("0\n0\n1\n".as_bytes(), &g, 2).unwrap_err();
        assert!(matches!(
            err,
            ParseError::PartitionLength {
                expected: 4,
                found: 3
            }
        ));
    }
}
