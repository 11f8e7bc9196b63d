//! Graph text formats: edge list, graph6 and DIMACS.
//!
//! graph6 is the canonical interchange format; the edge list is the
//! human-facing one; DIMACS `.col` files are accepted for colouring
//! benchmarks. `parse(emit(g, f), f)` is the identity on labelled graphs
//! for every format.

use crate::graph::Graph;
use thiserror::Error;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Graph6,
    Dimacs,
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "edgelist" | "edges" | "el" => Ok(Format::EdgeList),
            "graph6" | "g6" => Ok(Format::Graph6),
            "dimacs" | "col" => Ok(Format::Dimacs),
            other => Err(format!("unknown format: {other}")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at line {line}, byte {byte}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub byte: usize,
    pub msg: String,
}

impl ParseError {
    fn new(line: usize, byte: usize, msg: impl Into<String>) -> ParseError {
        ParseError { line, byte, msg: msg.into() }
    }
}

pub fn parse(text: &str, format: Format) -> Result<Graph, ParseError> {
    match format {
        Format::EdgeList => parse_edgelist(text),
        Format::Graph6 => parse_graph6(text),
        Format::Dimacs => parse_dimacs(text),
    }
}

pub fn emit(g: &Graph, format: Format) -> String {
    match format {
        Format::EdgeList => emit_edgelist(g),
        Format::Graph6 => emit_graph6(g),
        Format::Dimacs => emit_dimacs(g),
    }
}

/// Guesses the format from content: a `p edge` header means DIMACS, a line
/// of digit pairs means edge list, otherwise graph6.
pub fn sniff_format(text: &str) -> Format {
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('c') && t[1..].starts_with([' ', '\t']) {
            continue;
        }
        if t.starts_with("p ") || t.starts_with("p\t") {
            return Format::Dimacs;
        }
        if t.starts_with(">>graph6<<") {
            return Format::Graph6;
        }
        let mut it = t.split_whitespace();
        if let (Some(a), Some(b)) = (it.next(), it.next()) {
            if a.chars().all(|c| c.is_ascii_digit()) && b.chars().all(|c| c.is_ascii_digit()) {
                return Format::EdgeList;
            }
        }
        return Format::Graph6;
    }
    Format::EdgeList
}

// ---------------------------------------------------------------------------
// edge list
// ---------------------------------------------------------------------------

// "u v" per line, '#' comments, blank lines ignored. The emitter writes a
// "# vertices: n" comment so isolated trailing vertices survive the round
// trip; the parser honours that comment when present.
fn parse_edgelist(text: &str) -> Result<Graph, ParseError> {
    let mut edges = Vec::new();
    let mut max_id: Option<u32> = None;
    let mut declared_n: Option<usize> = None;
    let mut offset = 0;
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let t = line.trim();
        if let Some(rest) = t.strip_prefix('#') {
            if let Some(ns) = rest.trim().strip_prefix("vertices:") {
                declared_n = ns.trim().parse().ok();
            }
        } else if !t.is_empty() {
            let mut it = t.split_whitespace();
            let (a, b) = (it.next(), it.next());
            match (a, b) {
                (Some(a), Some(b)) if it.next().is_none() => {
                    let u: u32 = a.parse().map_err(|_| {
                        ParseError::new(lineno, offset, format!("bad vertex id {a:?}"))
                    })?;
                    let v: u32 = b.parse().map_err(|_| {
                        ParseError::new(lineno, offset, format!("bad vertex id {b:?}"))
                    })?;
                    if u == v {
                        return Err(ParseError::new(lineno, offset, format!("self-loop at {u}")));
                    }
                    max_id = Some(max_id.map_or(u.max(v), |m| m.max(u).max(v)));
                    edges.push((u, v));
                }
                _ => {
                    return Err(ParseError::new(
                        lineno,
                        offset,
                        "expected \"u v\" pair".to_string(),
                    ))
                }
            }
        }
        offset += line.len() + 1;
    }
    let n = declared_n.unwrap_or(0).max(max_id.map_or(0, |m| m as usize + 1));
    Graph::from_edges(n, &edges).map_err(|e| ParseError::new(0, 0, e.to_string()))
}

fn emit_edgelist(g: &Graph) -> String {
    let mut out = format!("# vertices: {}\n", g.vertex_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

// ---------------------------------------------------------------------------
// graph6
// ---------------------------------------------------------------------------

// Standard graph6: N(n) then the upper triangle x_{0,1} x_{0,2} x_{1,2}
// x_{0,3} ... packed big-endian six bits per byte, each byte offset by 63.
// Accepts the short (n <= 62) and the 4-byte extended length header.
fn parse_graph6(text: &str) -> Result<Graph, ParseError> {
    let line = text
        .lines()
        .map(str::trim)
        .find(|l| !l.is_empty())
        .ok_or_else(|| ParseError::new(1, 0, "empty graph6 input"))?;
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let bytes = line.as_bytes();
    let pos;
    let n: usize = if bytes.is_empty() {
        return Err(ParseError::new(1, 0, "empty graph6 input"));
    } else if bytes[0] == 126 {
        // '~': extended header
        if bytes.len() >= 2 && bytes[1] == 126 {
            return Err(ParseError::new(1, 1, "graph6 8-byte sizes not supported"));
        }
        if bytes.len() < 4 {
            return Err(ParseError::new(1, 1, "truncated graph6 size"));
        }
        let mut n = 0usize;
        for (i, &b) in bytes[1..4].iter().enumerate() {
            if !(63..=126).contains(&b) {
                return Err(ParseError::new(1, 1 + i, format!("bad size byte {b}")));
            }
            n = (n << 6) | (b as usize - 63);
        }
        pos = 4;
        n
    } else {
        if !(63..=125).contains(&bytes[0]) {
            return Err(ParseError::new(1, 0, format!("bad size byte {}", bytes[0])));
        }
        pos = 1;
        (bytes[0] - 63) as usize
    };

    let nbits = n * n.saturating_sub(1) / 2;
    let need = nbits.div_ceil(6);
    if bytes.len() < pos + need {
        return Err(ParseError::new(1, bytes.len(), "truncated graph6 body"));
    }
    let mut edges = Vec::new();
    let mut bit = 0usize;
    'outer: for col in 1..n as u32 {
        for row in 0..col {
            if bit >= nbits {
                break 'outer;
            }
            let byte = bytes[pos + bit / 6];
            if !(63..=126).contains(&byte) {
                return Err(ParseError::new(1, pos + bit / 6, format!("bad body byte {byte}")));
            }
            let six = byte - 63;
            if (six >> (5 - bit % 6)) & 1 == 1 {
                edges.push((row, col));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, &edges).map_err(|e| ParseError::new(1, pos, e.to_string()))
}

fn emit_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        assert!(n <= 258_047, "graph6 supports at most 258047 vertices");
        out.push(126);
        out.push(((n >> 12) & 63) as u8 + 63);
        out.push(((n >> 6) & 63) as u8 + 63);
        out.push((n & 63) as u8 + 63);
    }
    let mut six = 0u8;
    let mut used = 0;
    for col in 1..n as u32 {
        for row in 0..col {
            six <<= 1;
            if g.has_edge(row, col) {
                six |= 1;
            }
            used += 1;
            if used == 6 {
                out.push(six + 63);
                six = 0;
                used = 0;
            }
        }
    }
    if used > 0 {
        six <<= 6 - used;
        out.push(six + 63);
    }
    String::from_utf8(out).unwrap()
}

// ---------------------------------------------------------------------------
// DIMACS
// ---------------------------------------------------------------------------

// "p edge n m" header, "e u v" with 1-based vertex ids, "c" comments.
fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut offset = 0;
    for (lineno, line) in text.lines().enumerate() {
        let lineno = lineno + 1;
        let t = line.trim();
        let mut it = t.split_whitespace();
        match it.next() {
            None | Some("c") => {}
            Some("p") => {
                if n.is_some() {
                    return Err(ParseError::new(lineno, offset, "duplicate p line"));
                }
                let kind = it.next().unwrap_or("");
                if kind != "edge" && kind != "edges" && kind != "col" {
                    return Err(ParseError::new(
                        lineno,
                        offset,
                        format!("expected \"p edge\", got \"p {kind}\""),
                    ));
                }
                let nv: usize = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| ParseError::new(lineno, offset, "bad vertex count"))?;
                n = Some(nv);
            }
            Some("e") => {
                let n = n.ok_or_else(|| ParseError::new(lineno, offset, "e line before p line"))?;
                let u: usize = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| ParseError::new(lineno, offset, "bad edge endpoint"))?;
                let v: usize = it
                    .next()
                    .and_then(|s| s.parse().ok())
                    .ok_or_else(|| ParseError::new(lineno, offset, "bad edge endpoint"))?;
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(ParseError::new(
                        lineno,
                        offset,
                        format!("endpoint out of 1..={n}"),
                    ));
                }
                if u == v {
                    return Err(ParseError::new(lineno, offset, format!("self-loop at {u}")));
                }
                edges.push((u as u32 - 1, v as u32 - 1));
            }
            Some(other) => {
                return Err(ParseError::new(
                    lineno,
                    offset,
                    format!("unexpected line kind {other:?}"),
                ));
            }
        }
        offset += line.len() + 1;
    }
    let n = n.ok_or_else(|| ParseError::new(0, 0, "missing p line"))?;
    Graph::from_edges(n, &edges).map_err(|e| ParseError::new(0, 0, e.to_string()))
}

fn emit_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap()
    }

    #[test]
    fn edgelist_parses_path() {
        let g = parse("0 1\n1 2\n", Format::EdgeList).unwrap();
        assert_eq!(g, path3());
    }

    #[test]
    fn edgelist_comments_and_blanks() {
        let g = parse("# a comment\n\n0 1\n\n1 2\n", Format::EdgeList).unwrap();
        assert_eq!(g, path3());
    }

    #[test]
    fn edgelist_roundtrip_keeps_isolated_vertices() {
        let g = Graph::from_edges(6, &[(0, 1)]).unwrap();
        let back = parse(&emit(&g, Format::EdgeList), Format::EdgeList).unwrap();
        assert_eq!(back, g);
    }

    #[test]
    fn edgelist_error_position() {
        let err = parse("0 1\nnope\n", Format::EdgeList).unwrap_err();
        assert_eq!(err.line, 2);
        assert_eq!(err.byte, 4);
    }

    #[test]
    fn dimacs_parses_path() {
        let g = parse("c demo\np edge 3 2\ne 1 2\ne 2 3\n", Format::Dimacs).unwrap();
        assert_eq!(g, path3());
    }

    #[test]
    fn dimacs_rejects_range() {
        assert!(parse("p edge 2 1\ne 1 3\n", Format::Dimacs).is_err());
    }

    #[test]
    fn graph6_known_values() {
        // K4 and P3 in canonical graph6 per the format spec.
        let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert_eq!(emit(&k4, Format::Graph6), "C~");
        assert_eq!(parse("C~", Format::Graph6).unwrap(), k4);
        assert_eq!(parse(&emit(&path3(), Format::Graph6), Format::Graph6).unwrap(), path3());
    }

    #[test]
    fn graph6_header_prefix_accepted() {
        let k4 = parse(">>graph6<<C~", Format::Graph6).unwrap();
        assert_eq!(k4.edge_count(), 6);
    }

    #[test]
    fn graph6_large_n_roundtrip() {
        let g = Graph::from_edges(100, &[(0, 99), (40, 41)]).unwrap();
        let s = emit(&g, Format::Graph6);
        assert_eq!(parse(&s, Format::Graph6).unwrap(), g);
    }

    #[test]
    fn sniffing() {
        assert_eq!(sniff_format("p edge 3 2\ne 1 2\n"), Format::Dimacs);
        assert_eq!(sniff_format("0 1\n"), Format::EdgeList);
        assert_eq!(sniff_format("C~\n"), Format::Graph6);
    }
}
