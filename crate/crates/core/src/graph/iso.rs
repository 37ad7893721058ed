use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{Graph, PointedGraph};

/// Largest graph the exhaustive oracle accepts.
pub const ISO_GUARD: usize = 10;

fn guard(a: &Graph, b: &Graph) -> Result<()> {
    let got = a.n().max(b.n());
    if got > ISO_GUARD {
        return Err(Error::Guard { what: "isomorphism oracle input", got, limit: ISO_GUARD });
    }
    Ok(())
}

struct Search<'a> {
    a: &'a Graph,
    b: &'a Graph,
    la: Vec<Vec<Arc<str>>>,
    lb: Vec<Vec<Arc<str>>>,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn compatible(&self, u: usize, v: usize) -> bool {
        if self.used[v] || self.a.degree(u) != self.b.degree(v) || self.la[u] != self.lb[v] {
            return false;
        }
        (0..self.a.n()).all(|w| match self.map[w] {
            Some(x) => self.a.has_edge(u, w) == self.b.has_edge(v, x),
            None => true,
        })
    }

    fn extend(&mut self, u: usize) -> bool {
        if u == self.a.n() {
            return true;
        }
        if self.map[u].is_some() {
            return self.extend(u + 1);
        }
        for v in 0..self.b.n() {
            if self.compatible(u, v) {
                self.map[u] = Some(v);
                self.used[v] = true;
                if self.extend(u + 1) {
                    return true;
                }
                self.map[u] = None;
                self.used[v] = false;
            }
        }
        false
    }
}

fn search(a: &Graph, b: &Graph, fixed: Option<(usize, usize)>) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut s = Search {
        a,
        b,
        la: (0..a.n()).map(|v| a.label_names(v)).collect(),
        lb: (0..b.n()).map(|v| b.label_names(v)).collect(),
        map: vec![None; a.n()],
        used: vec![false; b.n()],
    };
    if let Some((u, v)) = fixed {
        if !s.compatible(u, v) {
            return false;
        }
        s.map[u] = Some(v);
        s.used[v] = true;
    }
    s.extend(0)
}

/// Exhaustive label- and edge-preserving bijection search. Labels are
/// compared by proposition name.
pub fn brute_force_isomorphic(a: &Graph, b: &Graph) -> Result<bool> {
    guard(a, b)?;
    Ok(search(a, b, None))
}

/// As [`brute_force_isomorphic`], additionally mapping point to point.
pub fn brute_force_isomorphic_pointed(a: &PointedGraph, b: &PointedGraph) -> Result<bool> {
    guard(&a.graph, &b.graph)?;
    Ok(search(&a.graph, &b.graph, Some((a.point, b.point))))
}
