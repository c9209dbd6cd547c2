//! Plain-text edge lists.
//!
//! One edge per line as `u v w` (0-based ids, decimal weight). Lines starting
//! with `#` are comments. An optional `n <count>` line fixes the vertex
//! count; otherwise it is one more than the largest id seen.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

pub fn parse_edge_list(text: &str) -> Result<WeightedGraph> {
    let mut declared_n: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut edge_lines = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields[0] == "n" {
            if fields.len() != 2 {
                return Err(err("header must be `n <count>`".into()));
            }
            if declared_n.is_some() {
                return Err(err("duplicate `n` header".into()));
            }
            let n = fields[1]
                .parse::<usize>()
                .map_err(|e| err(format!("bad vertex count {:?}: {e}", fields[1])))?;
            declared_n = Some((n, line_no));
            continue;
        }
        if fields.len() != 3 {
            return Err(err(format!(
                "expected `u v w`, found {} fields",
                fields.len()
            )));
        }
        let id = |s: &str| {
            s.parse::<usize>()
                .map_err(|e| err(format!("bad vertex id {s:?}: {e}")))
        };
        let u = id(fields[0])?;
        let v = id(fields[1])?;
        let w = fields[2]
            .parse::<f64>()
            .map_err(|e| err(format!("bad weight {:?}: {e}", fields[2])))?;
        edges.push((u, v, w));
        edge_lines.push(line_no);
    }

    let inferred = edges
        .iter()
        .map(|&(u, v, _)| u.max(v) + 1)
        .max()
        .unwrap_or(0);
    let n = match declared_n {
        Some((n, line)) if n < inferred => {
            return Err(Error::Parse {
                line,
                message: format!(
                    "declared n = {n} but edges reference vertex {}",
                    inferred - 1
                ),
            })
        }
        Some((n, _)) => n,
        None => inferred,
    };
    WeightedGraph::from_edges(n, &edges).map_err(|e| match e {
        Error::InvalidWeight { index, weight } => Error::Parse {
            line: edge_lines[index],
            message: format!("weight {weight} must be positive and finite"),
        },
        other => other,
    })
}

/// Serializes `g` as an edge list. The `n` header is written only when the
/// vertex count cannot be inferred from the edges.
pub fn write_edge_list(g: &WeightedGraph) -> String {
    let mut out = String::new();
    let inferred = g.edges().map(|(_, v, _)| v + 1).max().unwrap_or(0);
    if inferred != g.n() {
        writeln!(out, "n {}", g.n()).unwrap();
    }
    for (u, v, w) in g.edges() {
        writeln!(out, "{u} {v} {w}").unwrap();
    }
    out
}
