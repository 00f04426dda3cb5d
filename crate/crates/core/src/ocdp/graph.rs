use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};

/// Directed graph with vertices `0..n_vertices` and an ordered edge list.
///
/// Edge order matters: edge `j` becomes optimizer action `j` in the reduction.
/// Text formats and labels are 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n_vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl DirectedGraph {
    /// Builds a graph from 0-indexed edges, rejecting self-loops, out-of-range
    /// endpoints and duplicates.
    pub fn new(n_vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if n_vertices == 0 {
            return Err(Error::Invalid("graph needs at least one vertex".into()));
        }
        let mut seen = HashSet::new();
        for &(u, v) in &edges {
            if u >= n_vertices || v >= n_vertices {
                return Err(Error::Invalid(format!(
                    "edge ({}, {}) references a vertex outside 1..={n_vertices}",
                    u + 1,
                    v + 1
                )));
            }
            if u == v {
                return Err(Error::Invalid(format!("self-loop at vertex {}", u + 1)));
            }
            if !seen.insert((u, v)) {
                return Err(Error::Invalid(format!("duplicate edge ({}, {})", u + 1, v + 1)));
            }
        }
        Ok(DirectedGraph { n_vertices, edges })
    }

    /// Same as [`DirectedGraph::new`] with 1-indexed endpoints.
    pub fn from_one_indexed(n_vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u == 0 || v == 0) {
            return Err(Error::Invalid(format!("vertex ids are 1-indexed, got edge ({u}, {v})")));
        }
        DirectedGraph::new(n_vertices, edges.iter().map(|&(u, v)| (u - 1, v - 1)).collect())
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_index(&self, from: usize, to: usize) -> Option<usize> {
        self.edges.iter().position(|&e| e == (from, to))
    }

    pub fn without_edge(&self, index: usize) -> Result<Self> {
        let mut edges = self.edges.clone();
        if index >= edges.len() {
            return Err(Error::Invalid(format!("no edge {}", index + 1)));
        }
        edges.remove(index);
        DirectedGraph::new(self.n_vertices, edges)
    }

    /// Parses either the edge-list format (first line `n_vertices`, then one
    /// `from to` pair per line) or a `digraph { … }` DOT subset.
    pub fn parse(text: &str) -> Result<Self> {
        let first = text
            .lines()
            .map(strip_comment)
            .find(|l| !l.trim().is_empty())
            .unwrap_or("");
        if first.trim_start().starts_with("digraph") {
            parse_dot(text)
        } else {
            parse_edge_list(text)
        }
    }

    /// Edge-list text, the inverse of [`DirectedGraph::parse`].
    pub fn to_edge_list(&self) -> String {
        let mut s = format!("{}\n", self.n_vertices);
        for &(u, v) in &self.edges {
            s.push_str(&format!("{} {}\n", u + 1, v + 1));
        }
        s
    }
}

impl fmt::Display for DirectedGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(n={}; ", self.n_vertices)?;
        for (j, &(u, v)) in self.edges.iter().enumerate() {
            if j > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", u + 1, v + 1)?;
        }
        write!(f, ")")
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

fn parse_edge_list(text: &str) -> Result<DirectedGraph> {
    let mut n_vertices: Option<usize> = None;
    let mut edges = Vec::new();
    for (ln, raw) in text.lines().enumerate() {
        let line = strip_comment(raw);
        let mut fields = Vec::new();
        let mut col = 0;
        for tok in line.split_whitespace() {
            col = line[col..].find(tok).map(|p| p + col).unwrap_or(col);
            fields.push((col + 1, tok));
            col += tok.len();
        }
        if fields.is_empty() {
            continue;
        }
        let num = |(c, t): (usize, &str)| -> Result<usize> {
            t.parse::<usize>()
                .map_err(|_| parse_err(ln + 1, c, format!("expected a non-negative integer, found {t:?}")))
        };
        match n_vertices {
            None => {
                if fields.len() != 1 {
                    return Err(parse_err(ln + 1, fields[1].0, "first line must hold only the vertex count"));
                }
                n_vertices = Some(num(fields[0])?);
            }
            Some(n) => {
                if fields.len() != 2 {
                    return Err(parse_err(ln + 1, fields[0].0, "expected \"from to\""));
                }
                let (u, v) = (num(fields[0])?, num(fields[1])?);
                for (c, x) in [(fields[0].0, u), (fields[1].0, v)] {
                    if x == 0 || x > n {
                        return Err(parse_err(ln + 1, c, format!("vertex {x} outside 1..={n}")));
                    }
                }
                edges.push((u, v));
            }
        }
    }
    let n = n_vertices.ok_or_else(|| parse_err(1, 1, "empty graph file"))?;
    DirectedGraph::from_one_indexed(n, &edges)
}

/// `digraph name? { a -> b -> c; d; }` with positive integer node ids.
fn parse_dot(text: &str) -> Result<DirectedGraph> {
    let open = text.find('{').ok_or_else(|| parse_err(1, 1, "missing '{' in digraph"))?;
    let close = text.rfind('}').ok_or_else(|| parse_err(1, 1, "missing '}' in digraph"))?;
    let body_start = open + 1;
    let mut max_id = 0;
    let mut edges = Vec::new();
    let mut offset = body_start;
    for stmt in text[body_start..close].split([';', '\n']) {
        let here = offset;
        offset += stmt.len() + 1;
        let stmt = strip_comment(stmt).trim();
        if stmt.is_empty() {
            continue;
        }
        let (line, column) = line_col(text, here + text[here..].find(stmt).unwrap_or(0));
        let ids = stmt
            .split("->")
            .map(|t| {
                let t = t.trim();
                t.parse::<usize>()
                    .ok()
                    .filter(|&v| v > 0)
                    .ok_or_else(|| parse_err(line, column, format!("expected a positive node id, found {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        max_id = ids.iter().copied().fold(max_id, usize::max);
        edges.extend(ids.windows(2).map(|w| (w[0], w[1])));
    }
    DirectedGraph::from_one_indexed(max_id, &edges)
}

fn line_col(text: &str, pos: usize) -> (usize, usize) {
    let before = &text[..pos];
    let line = before.matches('\n').count() + 1;
    let column = pos - before.rfind('\n').map(|i| i + 1).unwrap_or(0) + 1;
    (line, column)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_round_trip() {
        let g = DirectedGraph::parse("# comment\n3\n1 2\n2 3  # trailing\n\n3 1\n").unwrap();
        assert_eq!(g.n_vertices(), 3);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(DirectedGraph::parse(&g.to_edge_list()).unwrap(), g);
    }

    #[test]
    fn dot_subset() {
        let g = DirectedGraph::parse("digraph G {\n  1 -> 2 -> 3;\n  3 -> 1\n  5;\n}\n").unwrap();
        assert_eq!(g.n_vertices(), 5);
        assert_eq!(g.edges(), &[(0, 1), (1, 2), (2, 0)]);
    }

    #[test]
    fn rejects_bad_graphs() {
        assert!(DirectedGraph::parse("2\n1 1\n").is_err());
        assert!(DirectedGraph::parse("2\n1 2\n1 2\n").is_err());
        match DirectedGraph::parse("2\n1 3\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        match DirectedGraph::parse("3\n1 x\n") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        match DirectedGraph::parse("digraph {\n 1 -> a;\n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(DirectedGraph::parse("").is_err());
    }
}
