//! The labeled text format:
//!
//! ```text
//! n m
//! [props: p q ...]
//! id [p1,p2,...]      (n node lines)
//! u v                 (m edge lines)
//! [root: id]          (patterns only)
//! ```
//!
//! Without a `props:` line the universe is every proposition in order of
//! first appearance. Lines starting with `#` are ignored.

use crate::error::{Error, Result};
use crate::graph::{Graph, PointedGraph, Universe};

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Text { line, msg: msg.into() }
}

struct Lines<'a> {
    inner: std::iter::Peekable<Box<dyn Iterator<Item = (usize, &'a str)> + 'a>>,
    last: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        let it: Box<dyn Iterator<Item = (usize, &'a str)>> = Box::new(
            text.lines()
                .enumerate()
                .map(|(i, l)| (i + 1, l.trim()))
                .filter(|(_, l)| !l.starts_with('#')),
        );
        Lines { inner: it.peekable(), last: 0 }
    }

    fn next(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.inner.next() {
            Some((i, l)) => {
                self.last = i;
                Ok((i, l))
            }
            None => Err(err(self.last + 1, format!("unexpected end of input, expected {what}"))),
        }
    }

    fn peek(&mut self) -> Option<&'a str> {
        self.inner.peek().map(|&(_, l)| l)
    }

    fn rest_nonblank(&mut self) -> Option<(usize, &'a str)> {
        self.inner.by_ref().find(|(_, l)| !l.is_empty())
    }
}

fn parse_num(line: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse().map_err(|_| err(line, format!("invalid {what} `{tok}`")))
}

fn parse_body(lines: &mut Lines<'_>) -> Result<Graph> {
    let (ln, header) = lines.next("header `n m`")?;
    let toks: Vec<&str> = header.split_whitespace().collect();
    let [n, m] = toks[..] else {
        return Err(err(ln, "header must be `n m`"));
    };
    let n = parse_num(ln, n, "node count")?;
    let m = parse_num(ln, m, "edge count")?;

    let mut declared = None;
    if let Some(l) = lines.peek() {
        if let Some(rest) = l.strip_prefix("props:") {
            let (ln, _) = lines.next("props")?;
            let names: Vec<&str> = rest.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
            declared = Some(Universe::new(names).map_err(|e| err(ln, e.to_string()))?);
        }
    }

    let mut names: Vec<String> = declared.as_ref().map(|u| u.names().iter().map(|s| s.to_string()).collect()).unwrap_or_default();
    let mut node_labels: Vec<Option<Vec<usize>>> = vec![None; n];
    for _ in 0..n {
        let (ln, l) = lines.next("node line")?;
        let mut parts = l.splitn(2, char::is_whitespace);
        let id = parse_num(ln, parts.next().unwrap_or(""), "node id")?;
        if id >= n {
            return Err(err(ln, format!("node id {id} out of range")));
        }
        if node_labels[id].is_some() {
            return Err(err(ln, format!("node {id} listed twice")));
        }
        let mut ls = Vec::new();
        for p in parts.next().unwrap_or("").split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()) {
            let idx = match names.iter().position(|q| q == p) {
                Some(i) => i,
                None if declared.is_some() => return Err(err(ln, format!("unknown proposition `{p}`"))),
                None => {
                    names.push(p.to_string());
                    names.len() - 1
                }
            };
            ls.push(idx);
        }
        node_labels[id] = Some(ls);
    }
    let universe = match declared {
        Some(u) => u,
        None => Universe::new(&names).expect("names deduplicated"),
    };
    let mut g = Graph::edgeless(n, universe);
    for (v, ls) in node_labels.into_iter().enumerate() {
        g.set_labels(v, &ls.expect("all nodes listed"))?;
    }
    for _ in 0..m {
        let (ln, l) = lines.next("edge line")?;
        let toks: Vec<&str> = l.split_whitespace().collect();
        let [u, v] = toks[..] else {
            return Err(err(ln, "edge line must be `u v`"));
        };
        let u = parse_num(ln, u, "node id")?;
        let v = parse_num(ln, v, "node id")?;
        if u >= n || v >= n {
            return Err(err(ln, format!("node id {} out of range", u.max(v))));
        }
        if u == v {
            return Err(err(ln, format!("self-loop at {u}")));
        }
        if g.has_edge(u, v) {
            return Err(err(ln, format!("duplicate edge {u} {v}")));
        }
        g.add_edge(u, v)?;
    }
    Ok(g)
}

/// Parses the labeled text format.
pub fn parse_labeled_text(text: &str) -> Result<Graph> {
    let mut lines = Lines::new(text);
    let g = parse_body(&mut lines)?;
    if let Some((ln, _)) = lines.rest_nonblank() {
        return Err(err(ln, "trailing content"));
    }
    Ok(g)
}

/// Parses a rooted pattern: a labeled text graph followed by `root: id`.
pub fn parse_pattern(text: &str) -> Result<PointedGraph> {
    let mut lines = Lines::new(text);
    let g = parse_body(&mut lines)?;
    let Some((ln, l)) = lines.rest_nonblank() else {
        return Err(err(lines.last + 1, "missing `root: id` trailer"));
    };
    let root = l.strip_prefix("root:").ok_or_else(|| err(ln, "expected `root: id`"))?;
    let root = parse_num(ln, root.trim(), "root")?;
    if root >= g.n() {
        return Err(err(ln, format!("root {root} out of range")));
    }
    if let Some((ln, _)) = lines.rest_nonblank() {
        return Err(err(ln, "trailing content"));
    }
    Ok(PointedGraph { graph: g, point: root })
}

fn inferred_universe(g: &Graph) -> Vec<usize> {
    let mut seen = Vec::new();
    for v in 0..g.n() {
        for &p in g.labels(v) {
            if !seen.contains(&(p as usize)) {
                seen.push(p as usize);
            }
        }
    }
    seen
}

/// Writes the labeled text format. A `props:` line is emitted only when the
/// universe could not be recovered from the node lines alone.
pub fn serialize_labeled_text(g: &Graph) -> String {
    use std::fmt::Write;
    let mut s = String::new();
    writeln!(s, "{} {}", g.n(), g.edge_count()).unwrap();
    let u = g.universe();
    if inferred_universe(g) != (0..u.len()).collect::<Vec<_>>() {
        let names: Vec<&str> = u.names().iter().map(|n| &**n).collect();
        writeln!(s, "props: {}", names.join(" ")).unwrap();
    }
    for v in 0..g.n() {
        let names: Vec<&str> = g.labels(v).iter().map(|&p| u.name(p as usize)).collect();
        if names.is_empty() {
            writeln!(s, "{v}").unwrap();
        } else {
            writeln!(s, "{v} {}", names.join(",")).unwrap();
        }
    }
    for (a, b) in g.edges() {
        writeln!(s, "{a} {b}").unwrap();
    }
    s
}

pub fn serialize_pattern(p: &PointedGraph) -> String {
    format!("{}root: {}\n", serialize_labeled_text(&p.graph), p.point)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_record() {
        let g = parse_labeled_text("2 1\n0 p\n1\n0 1\n").unwrap();
        assert_eq!(g.n(), 2);
        assert!(g.has_label_named(0, "p"));
        assert!(!g.has_label_named(1, "p"));
        assert!(g.has_edge(0, 1));
        assert_eq!(serialize_labeled_text(&g), "2 1\n0 p\n1\n0 1\n");
    }

    #[test]
    fn edgeless() {
        let g = parse_labeled_text("3 0\n0\n1\n2\n").unwrap();
        assert_eq!(g.edge_count(), 0);
        assert_eq!(serialize_labeled_text(&Graph::empty(1)), "1 0\n0\n");
    }

    #[test]
    fn errors_name_lines() {
        let cases = [
            ("2 1\n0\n1\n0 0\n", 4, "self-loop"),
            ("2 2\n0\n1\n0 1\n1 0\n", 5, "duplicate"),
            ("2 1\nprops: p\n0 q\n1\n0 1\n", 3, "unknown proposition"),
            ("2 1\n0\n1\n0 2\n", 4, "out of range"),
            ("2 0\n0\n5\n", 3, "out of range"),
        ];
        for (text, line, needle) in cases {
            match parse_labeled_text(text) {
                Err(Error::Text { line: l, msg }) => {
                    assert_eq!(l, line, "{text:?}");
                    assert!(msg.contains(needle), "{msg}");
                }
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn unused_propositions_survive() {
        let mut g = Graph::edgeless(2, Universe::new(["a", "b"]).unwrap());
        g.add_label(1, "b").unwrap();
        let s = serialize_labeled_text(&g);
        assert!(s.contains("props: a b"));
        assert_eq!(parse_labeled_text(&s).unwrap(), g);
    }

    #[test]
    fn patterns() {
        let p = parse_pattern("3 3\n0\n1\n2\n0 1\n0 2\n1 2\nroot: 2\n").unwrap();
        assert_eq!(p.point, 2);
        assert_eq!(parse_pattern(&serialize_pattern(&p)).unwrap(), p);
        assert!(parse_pattern("1 0\n0\n").is_err());
    }
}
