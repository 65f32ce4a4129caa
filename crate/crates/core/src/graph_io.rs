//! Text form of weighted graphs.
//!
//! ```text
//! # orientation=similarity
//! # format=edges        (optional: edges | matrix)
//! # n=4                 (optional for edges; absent pairs weigh 0)
//! 0,1,2.5
//! 2,3,1
//! ```
//!
//! Without a `format` line, rows of width 3 are edges unless there are
//! exactly three of them forming a symmetric zero-diagonal matrix.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::graph::{DenseMatrix, Orientation, WeightedGraph};

/// Upper bound on vertices accepted from text, keeping the dense matrix in memory.
pub const MAX_PARSED_VERTICES: usize = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Edges,
    Matrix,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "edges" => Ok(GraphFormat::Edges),
            "matrix" => Ok(GraphFormat::Matrix),
            other => Err(Error::pre(format!("unknown graph format `{other}`"))),
        }
    }
}

pub fn load_graph(path: &Path) -> Result<WeightedGraph> {
    parse_graph(&std::fs::read_to_string(path)?)
}

pub fn parse_graph(text: &str) -> Result<WeightedGraph> {
    let mut orientation: Option<Orientation> = None;
    let mut format: Option<GraphFormat> = None;
    let mut declared_n: Option<usize> = None;
    let mut rows: Vec<(usize, Vec<f64>)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            let Some((key, value)) = rest.split_once('=') else {
                continue;
            };
            let value = value.trim();
            let bad = |e: Error| Error::parse(line_no, e.to_string());
            match key.trim() {
                "orientation" => orientation = Some(value.parse().map_err(bad)?),
                "format" => format = Some(value.parse().map_err(bad)?),
                "n" => {
                    let n: usize = value
                        .parse()
                        .map_err(|_| Error::parse(line_no, format!("bad vertex count `{value}`")))?;
                    check_size(n, line_no)?;
                    declared_n = Some(n);
                }
                _ => {}
            }
            continue;
        }
        let cells = line
            .split(',')
            .map(|c| {
                let c = c.trim();
                c.parse::<f64>()
                    .map_err(|_| Error::parse(line_no, format!("`{c}` is not a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(&(first_line, ref first)) = rows.first() {
            if format != Some(GraphFormat::Edges) && cells.len() != first.len() {
                return Err(Error::parse(
                    line_no,
                    format!("row has {} fields, line {first_line} has {}", cells.len(), first.len()),
                ));
            }
        }
        rows.push((line_no, cells));
    }

    let orientation =
        orientation.ok_or_else(|| Error::parse(1, "missing `# orientation=similarity|dissimilarity` header"))?;
    if rows.is_empty() {
        // An edge list may be empty when the vertex count is declared.
        return match (format, declared_n) {
            (Some(GraphFormat::Edges), Some(n)) => Ok(WeightedGraph::new(DenseMatrix::zeros(n), orientation)?),
            _ => Err(Error::parse(text.lines().count().max(1), "no data rows")),
        };
    }
    let format = format.unwrap_or_else(|| guess_format(&rows));
    let weights = match format {
        GraphFormat::Matrix => matrix_rows(&rows, declared_n)?,
        GraphFormat::Edges => edge_rows(&rows, declared_n)?,
    };
    let last = rows.last().map_or(1, |r| r.0);
    WeightedGraph::new(weights, orientation).map_err(|e| Error::parse(last, e.to_string()))
}

fn check_size(n: usize, line_no: usize) -> Result<()> {
    if n == 0 || n > MAX_PARSED_VERTICES {
        return Err(Error::parse(
            line_no,
            format!("vertex count {n} outside 1..={MAX_PARSED_VERTICES}"),
        ));
    }
    Ok(())
}

fn guess_format(rows: &[(usize, Vec<f64>)]) -> GraphFormat {
    let width = rows[0].1.len();
    if width != 3 {
        return GraphFormat::Matrix;
    }
    if rows.len() != 3 {
        return GraphFormat::Edges;
    }
    let symmetric = (0..3).all(|i| rows[i].1[i] == 0.0 && (0..3).all(|j| rows[i].1[j] == rows[j].1[i]));
    if symmetric {
        GraphFormat::Matrix
    } else {
        GraphFormat::Edges
    }
}

fn matrix_rows(rows: &[(usize, Vec<f64>)], declared_n: Option<usize>) -> Result<DenseMatrix> {
    let n = rows.len();
    check_size(n, rows[0].0)?;
    if let Some(d) = declared_n {
        if d != n {
            return Err(Error::parse(rows[n - 1].0, format!("header says n={d}, matrix has {n} rows")));
        }
    }
    for (line_no, r) in rows {
        if r.len() != n {
            return Err(Error::parse(*line_no, format!("matrix row has {} entries, expected {n}", r.len())));
        }
    }
    let plain: Vec<Vec<f64>> = rows.iter().map(|r| r.1.clone()).collect();
    DenseMatrix::from_rows(&plain).map_err(|e| Error::parse(rows[0].0, e.to_string()))
}

fn edge_rows(rows: &[(usize, Vec<f64>)], declared_n: Option<usize>) -> Result<DenseMatrix> {
    let mut edges = Vec::with_capacity(rows.len());
    let mut seen = HashSet::with_capacity(rows.len());
    let mut max_vertex = 0usize;
    for (line_no, r) in rows {
        let line_no = *line_no;
        if r.len() != 3 {
            return Err(Error::parse(line_no, format!("edge row needs `u,v,weight`, found {} fields", r.len())));
        }
        let vertex = |x: f64| -> Result<usize> {
            if x.fract() != 0.0 || x < 0.0 || x >= MAX_PARSED_VERTICES as f64 {
                return Err(Error::parse(line_no, format!("`{x}` is not a vertex id")));
            }
            Ok(x as usize)
        };
        let (u, v, w) = (vertex(r[0])?, vertex(r[1])?, r[2]);
        if u == v {
            return Err(Error::parse(line_no, format!("self-loop on vertex {u}")));
        }
        if !w.is_finite() || w < 0.0 {
            return Err(Error::parse(line_no, format!("weight {w} must be finite and non-negative")));
        }
        let key = (u.min(v), u.max(v));
        if !seen.insert(key) {
            return Err(Error::parse(line_no, format!("duplicate edge {}-{}", key.0, key.1)));
        }
        max_vertex = max_vertex.max(key.1);
        edges.push((key, w));
    }
    let n = match declared_n {
        Some(d) if max_vertex >= d => {
            return Err(Error::parse(
                rows[rows.len() - 1].0,
                format!("vertex {max_vertex} is out of range for n={d}"),
            ))
        }
        Some(d) => d,
        None => max_vertex + 1,
    };
    check_size(n, rows[0].0)?;
    let mut m = DenseMatrix::zeros(n);
    for ((u, v), w) in edges {
        m.set(u, v, w);
    }
    Ok(m)
}

/// Serializes `g` so that [`parse_graph`] reproduces it exactly.
pub fn write_graph(g: &WeightedGraph, format: GraphFormat) -> String {
    let n = g.n();
    let mut s = format!("# orientation={}\n", g.orientation());
    match format {
        GraphFormat::Edges => {
            let _ = writeln!(s, "# format=edges\n# n={n}");
            for i in 0..n {
                for j in (i + 1)..n {
                    let w = g.weight(i, j);
                    if w != 0.0 {
                        let _ = writeln!(s, "{i},{j},{w}");
                    }
                }
            }
        }
        GraphFormat::Matrix => {
            s.push_str("# format=matrix\n");
            for i in 0..n {
                let row: Vec<String> = g.weights().row(i).iter().map(f64::to_string).collect();
                s.push_str(&row.join(","));
                s.push('\n');
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_fills_missing_pairs_with_zero() {
        let g = parse_graph("# orientation=similarity\n0,1,2\n2,3,1.5\n").unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.weight(1, 0), 2.0);
        assert_eq!(g.weight(0, 3), 0.0);
        assert_eq!(g.orientation(), Orientation::Similarity);
    }

    #[test]
    fn declared_size_adds_isolated_vertices() {
        let g = parse_graph("# orientation=dissimilarity\n# n=6\n0,1,1\n").unwrap();
        assert_eq!(g.n(), 6);
        assert!(parse_graph("# orientation=dissimilarity\n# n=2\n0,2,1\n").is_err());
    }

    #[test]
    fn three_by_three_matrix_is_recognized() {
        let g = parse_graph("# orientation=similarity\n0,1,2\n1,0,3\n2,3,0\n").unwrap();
        assert_eq!((g.n(), g.weight(1, 2)), (3, 3.0));
        let e = parse_graph("# orientation=similarity\n0,1,2\n1,2,3\n0,2,4\n").unwrap();
        assert_eq!((e.n(), e.weight(0, 2)), (3, 4.0));
    }

    #[test]
    fn rejects_bad_edges() {
        for (text, line) in [
            ("# orientation=similarity\n0,1,1\n1,0,2\n", 3),
            ("# orientation=similarity\n0,0,1\n", 2),
            ("# orientation=similarity\n0,1,-1\n", 2),
            ("# orientation=similarity\n0,1,inf\n", 2),
            ("# orientation=similarity\n0,1.5,1\n", 2),
            ("# orientation=similarity\n0,x,1\n", 2),
        ] {
            match parse_graph(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text}"),
                other => panic!("{text}: {other:?}"),
            }
        }
    }

    #[test]
    fn empty_edge_list_needs_declared_size() {
        let g = parse_graph("# orientation=similarity\n# format=edges\n# n=3\n").unwrap();
        assert_eq!((g.n(), g.total_weight()), (3, 0.0));
        assert!(parse_graph("# orientation=similarity\n# n=3\n").is_err());
    }

    #[test]
    fn orientation_header_is_required() {
        assert!(parse_graph("0,1,1\n").is_err());
        assert!(parse_graph("# orientation=sideways\n0,1,1\n").is_err());
    }

    #[test]
    fn asymmetric_matrix_is_rejected() {
        assert!(parse_graph("# orientation=similarity\n# format=matrix\n0,1\n2,0\n").is_err());
        assert!(parse_graph("# orientation=similarity\n0,1,1,1\n1,0,1,1\n").is_err());
    }

    #[test]
    fn round_trips() {
        let g = WeightedGraph::from_fn(5, Orientation::Dissimilarity, |i, j| (i * 7 + j) as f64 / 3.0).unwrap();
        for f in [GraphFormat::Edges, GraphFormat::Matrix] {
            assert_eq!(parse_graph(&write_graph(&g, f)).unwrap(), g);
        }
    }
}

#[cfg(test)]
mod props {
    use proptest::prelude::*;

    use super::*;
    use crate::testgen::int_graph;

    proptest! {
        #[test]
        fn both_formats_round_trip(g in int_graph(1..=15, Orientation::Dissimilarity), scale in 0.01f64..100.0) {
            let g = g.scaled(scale).unwrap();
            for f in [GraphFormat::Edges, GraphFormat::Matrix] {
                prop_assert_eq!(parse_graph(&write_graph(&g, f)).unwrap(), g.clone());
            }
        }

        #[test]
        fn parser_never_panics(text in "(# (orientation|format|n)=[a-z0-9]{0,14}\n)?([0-9.e-]{0,4}(,[0-9.e-]{0,4}){0,4}\n){0,6}") {
            let _ = parse_graph(&text);
        }
    }
}
