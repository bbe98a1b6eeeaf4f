//! Graph interchange: graph6 words and a plain edge-list text format.
//!
//! The edge-list format is a vertex count on the first line followed by one
//! `u v` pair per line. Blank lines are ignored and duplicate edges collapse.

use crate::error::GraphError;
use crate::graph::{Graph, MAX_VERTICES};

const HEADER: &str = ">>graph6<<";

fn g6_err(offset: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Graph6 {
        offset,
        reason: reason.into(),
    }
}

/// Column-major upper-triangle pair order used by graph6: (0,1), (0,2),
/// (1,2), (0,3), ...
pub fn pair_order(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).flat_map(|j| (0..j).map(move |i| (i, j)))
}

pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let trimmed_start = text.len() - text.trim_start().len();
    let mut body = text.trim();
    let mut base = trimmed_start;
    if let Some(rest) = body.strip_prefix(HEADER) {
        body = rest;
        base += HEADER.len();
    }
    let bytes = body.as_bytes();
    for (i, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(g6_err(
                base + i,
                format!("byte {b:#04x} outside the graph6 range 63..=126"),
            ));
        }
    }
    let (n, header_len) = match bytes {
        [] => return Err(g6_err(base, "empty graph6 word")),
        [126, 126, ..] => {
            return Err(g6_err(
                base,
                "8-byte size header implies more than 64 vertices",
            ))
        }
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(g6_err(base + bytes.len(), "truncated 4-byte size header"));
            }
            let n = rest[..3]
                .iter()
                .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
            if n < 63 {
                return Err(g6_err(
                    base,
                    format!("non-canonical 4-byte header for n = {n}"),
                ));
            }
            (n, 4)
        }
        [b, ..] => ((b - 63) as usize, 1),
    };
    if n > MAX_VERTICES {
        return Err(g6_err(
            base,
            format!("{n} vertices exceeds the cap of {MAX_VERTICES}"),
        ));
    }
    let pairs = n * n.saturating_sub(1) / 2;
    let data_len = pairs.div_ceil(6);
    let data = &bytes[header_len..];
    if data.len() < data_len {
        return Err(g6_err(
            base + bytes.len(),
            format!(
                "expected {data_len} data bytes for n = {n}, found {}",
                data.len()
            ),
        ));
    }
    if data.len() > data_len {
        return Err(g6_err(
            base + header_len + data_len,
            "trailing bytes after graph6 word",
        ));
    }
    let mut g = Graph::empty(n);
    for (k, (i, j)) in pair_order(n).enumerate() {
        let byte = data[k / 6] - 63;
        if byte >> (5 - k % 6) & 1 == 1 {
            g.add_edge(i, j);
        }
    }
    if pairs % 6 != 0 {
        let last = data[data_len - 1] - 63;
        let pad = 6 - pairs % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(g6_err(
                base + header_len + data_len - 1,
                "nonzero padding bits",
            ));
        }
    }
    Ok(g)
}

pub fn emit_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(4 + (n * n / 12) + 1);
    if n <= 62 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for (i, j) in pair_order(n) {
        acc = (acc << 1) | g.has_edge(i, j) as u8;
        filled += 1;
        if filled == 6 {
            out.push(acc + 63);
            acc = 0;
            filled = 0;
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

pub fn parse_edge_list(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (line_no, first) = lines.next().ok_or(GraphError::EdgeList {
        line: 1,
        reason: "missing vertex count".into(),
    })?;
    let n: usize = first.parse().map_err(|_| GraphError::EdgeList {
        line: line_no,
        reason: format!("vertex count {first:?} is not a non-negative integer"),
    })?;
    if n > MAX_VERTICES {
        return Err(GraphError::TooManyVertices(n));
    }
    let mut g = Graph::empty(n);
    for (line, l) in lines {
        let err = |reason: String| GraphError::EdgeList { line, reason };
        let mut toks = l.split_whitespace();
        let mut endpoint = || -> Result<usize, GraphError> {
            let tok = toks
                .next()
                .ok_or_else(|| err("expected two vertices".into()))?;
            tok.parse::<usize>()
                .map_err(|_| err(format!("{tok:?} is not a vertex label")))
        };
        let (u, v) = (endpoint()?, endpoint()?);
        if toks.next().is_some() {
            return Err(err("more than two tokens".into()));
        }
        if u >= n || v >= n {
            return Err(err(format!("vertex {} out of range 0..{n}", u.max(v))));
        }
        if u == v {
            return Err(err(format!("self-loop at {u}")));
        }
        g.add_edge(u, v);
    }
    Ok(g)
}

pub fn emit_edge_list(g: &Graph) -> String {
    let mut s = format!("{}\n", g.n());
    for (u, v) in g.edges() {
        s.push_str(&format!("{u} {v}\n"));
    }
    s
}
