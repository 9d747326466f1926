//! Readers and writers for the DIMACS shortest-path text formats (`.gr`
//! arc lists and `.co` coordinate tables).

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::{Coordinates, Distance, Graph, VertexId, INFINITY};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

/// Parses a `.gr` file. Vertex ids in the file are 1-based; the returned graph
/// uses `id - 1` internally and keeps the original ids as external ids.
pub fn parse_dimacs_gr<R: BufRead>(reader: R) -> Result<Graph> {
    let mut header: Option<(usize, usize, usize)> = None;
    let mut arcs: Vec<(VertexId, VertexId, Distance)> = Vec::new();
    let mut last_line = 0;
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let line = line?;
        let mut toks = line.split_ascii_whitespace();
        match toks.next() {
            None | Some("c") => continue,
            Some("p") => {
                if header.is_some() {
                    return Err(parse_err(lineno, "duplicate problem line"));
                }
                let kind: String = field(toks.next(), lineno, "problem type")?;
                if kind != "sp" {
                    return Err(parse_err(
                        lineno,
                        format!("expected `p sp`, found `p {kind}`"),
                    ));
                }
                let n: usize = field(toks.next(), lineno, "vertex count")?;
                let m: usize = field(toks.next(), lineno, "arc count")?;
                if n > VertexId::MAX as usize {
                    return Err(parse_err(
                        lineno,
                        format!("{n} vertices exceed the 32-bit id space"),
                    ));
                }
                arcs.reserve(m);
                header = Some((n, m, lineno));
            }
            Some("a") => {
                let (n, _, _) =
                    header.ok_or_else(|| parse_err(lineno, "arc before problem line"))?;
                let u: i64 = field(toks.next(), lineno, "tail id")?;
                let v: i64 = field(toks.next(), lineno, "head id")?;
                let w: i64 = field(toks.next(), lineno, "weight")?;
                for id in [u, v] {
                    if id < 1 || id as u64 > n as u64 {
                        return Err(parse_err(
                            lineno,
                            format!("vertex id {id} outside [1, {n}]"),
                        ));
                    }
                }
                if w < 0 {
                    return Err(parse_err(lineno, format!("negative weight {w}")));
                }
                if w > u32::MAX as i64 {
                    return Err(parse_err(lineno, format!("weight {w} exceeds 32 bits")));
                }
                arcs.push(((u - 1) as VertexId, (v - 1) as VertexId, w as Distance));
            }
            Some(other) => {
                return Err(parse_err(lineno, format!("unknown line type `{other}`")));
            }
        }
    }
    let (n, m, _) = header.ok_or_else(|| parse_err(last_line.max(1), "missing problem line"))?;
    if arcs.len() != m {
        return Err(parse_err(
            last_line,
            format!("problem line declares {m} arcs, found {}", arcs.len()),
        ));
    }
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    Graph::from_arcs(n, arcs)
}

/// Parses a `.co` file for a graph with `n` vertices. Vertices without a
/// `v` line are left flagged as missing.
pub fn parse_dimacs_co<R: BufRead>(reader: R, n: usize) -> Result<Coordinates> {
    let mut coords = Coordinates::new(n);
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let mut toks = line.split_ascii_whitespace();
        match toks.next() {
            None | Some("c") | Some("p") => continue,
            Some("v") => {
                let id: u64 = field(toks.next(), lineno, "vertex id")?;
                let x: i32 = field(toks.next(), lineno, "x coordinate")?;
                let y: i32 = field(toks.next(), lineno, "y coordinate")?;
                if id < 1 || id > n as u64 {
                    return Err(parse_err(
                        lineno,
                        format!("vertex id {id} outside [1, {n}]"),
                    ));
                }
                let v = (id - 1) as VertexId;
                if coords.get(v).is_some() {
                    return Err(parse_err(
                        lineno,
                        format!("duplicate coordinate for vertex {id}"),
                    ));
                }
                coords.set(v, x, y);
            }
            Some(other) => {
                return Err(parse_err(lineno, format!("unknown line type `{other}`")));
            }
        }
    }
    Ok(coords)
}

/// Writes the graph as a `.gr` file with both arc directions per edge.
/// Edges with infinite weight are omitted.
pub fn write_dimacs_gr<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    let edges: Vec<_> = graph.edges().filter(|e| e.2 != INFINITY).collect();
    writeln!(out, "p sp {} {}", graph.num_vertices(), 2 * edges.len())?;
    for (u, v, w) in edges {
        let (eu, ev) = (graph.external_id(u), graph.external_id(v));
        writeln!(out, "a {eu} {ev} {w}")?;
        writeln!(out, "a {ev} {eu} {w}")?;
    }
    Ok(())
}

pub fn write_dimacs_co<W: Write>(coords: &Coordinates, mut out: W) -> Result<()> {
    writeln!(out, "p aux sp co {}", coords.len())?;
    for v in 0..coords.len() as VertexId {
        if let Some((x, y)) = coords.get(v) {
            writeln!(out, "v {} {x} {y}", v + 1)?;
        }
    }
    Ok(())
}
