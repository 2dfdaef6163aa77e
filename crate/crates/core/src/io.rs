//! Plain edge-list and DIMACS readers and writers.

use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::{Graph, GraphError, Normalization};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: vertex id {id} is out of range")]
    BadVertex { line: usize, id: usize },
    #[error("missing `p edge N M` header")]
    MissingHeader,
}

/// A parsed graph with what was dropped or noticed on the way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Parsed {
    pub graph: Graph,
    pub normalization: Normalization,
    pub warnings: Vec<String>,
}

fn malformed(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        message: message.into(),
    }
}

fn parse_id(tok: &str, line: usize) -> Result<usize, ParseError> {
    let id: usize = tok
        .parse()
        .map_err(|_| malformed(line, format!("expected a vertex id, found `{tok}`")))?;
    if id == 0 {
        return Err(ParseError::BadVertex { line, id });
    }
    Ok(id)
}

fn build(n: usize, edges: Vec<(usize, usize, usize)>) -> Result<(Graph, Normalization), ParseError> {
    if let Some(&(u, v, line)) = edges.iter().find(|&&(u, v, _)| u > n || v > n) {
        return Err(ParseError::BadVertex { line, id: u.max(v) });
    }
    Graph::from_edges(n, edges.into_iter().map(|(u, v, _)| (u, v))).map_err(|e| match e {
        GraphError::VertexOutOfRange { vertex, .. } => ParseError::BadVertex { line: 0, id: vertex },
    })
}

/// Lines `u v`; `#` starts a comment; an optional `n N` line fixes the
/// vertex count, otherwise it is the largest id seen.
pub fn parse_edge_list(text: &str) -> Result<Parsed, ParseError> {
    let mut declared = None;
    let mut edges = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        match toks.as_slice() {
            ["n", count] => {
                let n = count
                    .parse()
                    .map_err(|_| malformed(line, format!("bad vertex count `{count}`")))?;
                if declared.replace(n).is_some() {
                    return Err(malformed(line, "duplicate `n` header"));
                }
            }
            [u, v] => edges.push((parse_id(u, line)?, parse_id(v, line)?, line)),
            _ => return Err(malformed(line, "expected `u v` or `n N`")),
        }
    }
    let n = declared.unwrap_or_else(|| edges.iter().map(|&(u, v, _)| u.max(v)).max().unwrap_or(0));
    let (graph, normalization) = build(n, edges)?;
    Ok(Parsed {
        graph,
        normalization,
        warnings: Vec::new(),
    })
}

/// DIMACS `p edge N M` with `e u v` lines and `c` comments. A declared
/// edge count that disagrees with the file only produces a warning.
pub fn parse_dimacs(text: &str) -> Result<Parsed, ParseError> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut edges = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let toks: Vec<&str> = raw.split_whitespace().collect();
        match toks.as_slice() {
            [] => {}
            ["c", ..] => {}
            ["p", kind, n, m] if *kind == "edge" || *kind == "col" => {
                if header.is_some() {
                    return Err(malformed(line, "duplicate problem line"));
                }
                let n = n.parse().map_err(|_| malformed(line, "bad vertex count"))?;
                let m = m.parse().map_err(|_| malformed(line, "bad edge count"))?;
                header = Some((n, m, line));
            }
            ["p", ..] => return Err(malformed(line, "expected `p edge N M`")),
            ["e", u, v] => {
                if header.is_none() {
                    return Err(ParseError::MissingHeader);
                }
                edges.push((parse_id(u, line)?, parse_id(v, line)?, line));
            }
            _ => return Err(malformed(line, format!("unrecognized line `{}`", raw.trim()))),
        }
    }
    let (n, m, _) = header.ok_or(ParseError::MissingHeader)?;
    let mut warnings = Vec::new();
    if m != edges.len() {
        warnings.push(format!("header declares {m} edges, found {}", edges.len()));
    }
    let (graph, normalization) = build(n, edges)?;
    Ok(Parsed {
        graph,
        normalization,
        warnings,
    })
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.n());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "e {u} {v}");
    }
    out
}
