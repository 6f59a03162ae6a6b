//! Edge-list and graph6 readers and writers.
//!
//! Edge lists: a `n m` header followed by `m` lines `u v` (0-based). Anything
//! after `#` on a line is a comment. graph6 follows the standard encoding of
//! the upper triangle, column by column, six bits per printable byte.

use std::fmt::Write as _;

use super::Graph;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    EdgeList,
    Graph6,
}

const GRAPH6_HEADER: &str = ">>graph6<<";

/// Guesses the format from the first meaningful line.
pub fn detect_format(text: &str) -> Option<Format> {
    let line = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .or_else(|| text.lines().map(str::trim).find(|l| l.starts_with(GRAPH6_HEADER)))?;
    if line.starts_with(GRAPH6_HEADER) {
        return Some(Format::Graph6);
    }
    let mut fields = line.split_whitespace();
    let numeric = fields.next().is_some_and(|f| f.parse::<usize>().is_ok())
        && fields.next().is_some_and(|f| f.parse::<usize>().is_ok());
    if numeric {
        Some(Format::EdgeList)
    } else if line.bytes().all(|b| (63..=126).contains(&b)) {
        Some(Format::Graph6)
    } else {
        None
    }
}

/// Parses every graph in `text`.
pub fn parse_all(text: &str, format: Option<Format>) -> Result<Vec<Graph>> {
    let format = match format {
        Some(f) => f,
        None => detect_format(text).ok_or(Error::Parse {
            line: 1,
            msg: "cannot recognise graph format".into(),
        })?,
    };
    match format {
        Format::EdgeList => parse_edge_lists(text),
        Format::Graph6 => text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| from_graph6(l.trim()).map_err(|e| relocate(e, i + 1)))
            .collect(),
    }
}

/// Parses the first graph in `text`.
pub fn parse(text: &str, format: Option<Format>) -> Result<Graph> {
    parse_all(text, format)?.into_iter().next().ok_or(Error::Parse {
        line: 1,
        msg: "no graph found".into(),
    })
}

fn relocate(e: Error, line: usize) -> Error {
    match e {
        Error::Parse { msg, .. } => Error::Parse { line, msg },
        other => Error::Parse { line, msg: other.to_string() },
    }
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    parse(text, Some(Format::EdgeList))
}

fn parse_edge_lists(text: &str) -> Result<Vec<Graph>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());
    let mut out = Vec::new();
    while let Some((line, header)) = lines.next() {
        let (n, m) = two_numbers(header, line)?;
        let mut edges = Vec::with_capacity(m);
        for _ in 0..m {
            let (line, l) = lines.next().ok_or(Error::Parse {
                line,
                msg: format!("expected {m} edges, found {}", edges.len()),
            })?;
            edges.push((line, two_numbers(l, line)?));
        }
        let mut g = Graph::empty(n).map_err(|e| relocate(e, line))?;
        for (line, (u, v)) in edges {
            if u >= n || v >= n {
                return Err(Error::Parse {
                    line,
                    msg: format!("vertex out of range for n = {n}"),
                });
            }
            if u == v {
                return Err(Error::Parse { line, msg: format!("self-loop at {u}") });
            }
            if g.has_edge(u, v) {
                return Err(Error::Parse { line, msg: format!("duplicate edge {u} {v}") });
            }
            g.link(u, v);
        }
        out.push(g);
    }
    Ok(out)
}

fn two_numbers(l: &str, line: usize) -> Result<(usize, usize)> {
    let fields: Vec<&str> = l.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(Error::Parse {
            line,
            msg: format!("expected two integers, found `{l}`"),
        });
    }
    let parse = |s: &str| {
        s.parse::<usize>().map_err(|_| Error::Parse {
            line,
            msg: format!("`{s}` is not a nonnegative integer"),
        })
    };
    Ok((parse(fields[0])?, parse(fields[1])?))
}

pub fn to_edge_list(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::new();
    if n < 63 {
        out.push(n as u8 + 63);
    } else {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut acc = 0u8;
    let mut bits = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            bits += 1;
            if bits == 6 {
                out.push(acc + 63);
                acc = 0;
                bits = 0;
            }
        }
    }
    if bits > 0 {
        out.push((acc << (6 - bits)) + 63);
    }
    String::from_utf8(out).expect("graph6 is ASCII")
}

pub fn from_graph6(s: &str) -> Result<Graph> {
    let s = s.strip_prefix(GRAPH6_HEADER).unwrap_or(s).trim_end();
    let bytes = s.as_bytes();
    let err = |msg: String| Error::Parse { line: 1, msg };
    if let Some(&b) = bytes.iter().find(|b| !(63..=126).contains(*b)) {
        return Err(err(format!("byte {b} outside the graph6 range")));
    }
    let (n, body) = match bytes {
        [] => return Err(err("empty graph6 string".into())),
        [126, 126, ..] => return Err(err("graph6 orders above 258047 are not supported".into())),
        [126, rest @ ..] => {
            if rest.len() < 3 {
                return Err(err("truncated graph6 size field".into()));
            }
            let n = rest[..3].iter().fold(0usize, |a, &b| a << 6 | (b - 63) as usize);
            (n, &rest[3..])
        }
        [first, rest @ ..] => ((first - 63) as usize, rest),
    };
    let pairs = n * n.saturating_sub(1) / 2;
    let need = pairs.div_ceil(6);
    if body.len() != need {
        return Err(err(format!("expected {need} data bytes for n = {n}, found {}", body.len())));
    }
    let mut g = Graph::empty(n).map_err(|e| err(e.to_string()))?;
    let mut bit = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = body[bit / 6] - 63;
            if byte >> (5 - bit % 6) & 1 == 1 {
                g.link(i, j);
            }
            bit += 1;
        }
    }
    if pairs % 6 != 0 {
        let last = body[need - 1] - 63;
        let pad = 6 - pairs % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(err("nonzero padding bits".into()));
        }
    }
    Ok(g)
}
