//! Plain-text edge lists: a header line `n m`, then `m` lines `u v w`.
//!
//! Blank lines and lines starting with `#` are ignored. The writer emits edges
//! sorted by `(u, v)` with `u < v` and renders weights in their shortest
//! round-trip decimal form, so writing is byte-stable.

use std::fmt::Write as _;

use super::{Graph, GraphBuilder};
use crate::error::GraphError;

pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or(GraphError::Parse {
        line: 1,
        message: "missing header line \"n m\"".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(GraphError::Parse {
            line: header_line,
            message: format!("expected \"n m\", found {header:?}"),
        });
    }
    let n: usize = parse_field(fields[0], header_line, "vertex count")?;
    let m: usize = parse_field(fields[1], header_line, "edge count")?;

    let mut builder = GraphBuilder::new(n);
    for (line, body) in lines {
        let fields: Vec<&str> = body.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(GraphError::Parse {
                line,
                message: format!("expected \"u v w\", found {body:?}"),
            });
        }
        let u: u64 = parse_field(fields[0], line, "vertex")?;
        let v: u64 = parse_field(fields[1], line, "vertex")?;
        let w: f64 = parse_field(fields[2], line, "weight")?;
        builder
            .add_edge(u, v, w)
            .map_err(|source| GraphError::Edge { line, source })?;
    }
    if builder.edge_count() != m {
        return Err(GraphError::EdgeCountMismatch {
            declared: m,
            found: builder.edge_count(),
        });
    }
    Ok(builder.build())
}

fn parse_field<T: std::str::FromStr>(s: &str, line: usize, what: &str) -> Result<T, GraphError> {
    s.parse().map_err(|_| GraphError::Parse {
        line,
        message: format!("invalid {what} {s:?}"),
    })
}

pub fn write_graph(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * (g.m() + 1));
    writeln!(out, "{} {}", g.n(), g.m()).unwrap();
    for (u, v, w) in g.edges() {
        writeln!(out, "{u} {v} {w}").unwrap();
    }
    out
}
