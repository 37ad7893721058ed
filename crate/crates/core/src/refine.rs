//! Weisfeiler-Leman color refinement.

use std::collections::HashMap;

use crate::color::{Color, Histogram};
use crate::graph::{Graph, PointedGraph};

/// One color per node.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Coloring(Vec<Color>);

impl Coloring {
    pub fn new(colors: Vec<Color>) -> Self {
        Coloring(colors)
    }

    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    pub fn get(&self, v: usize) -> &Color {
        &self.0[v]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn histogram(&self) -> Histogram {
        Histogram::of(&self.0)
    }

    pub fn class_count(&self) -> usize {
        self.partition().iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_discrete(&self) -> bool {
        self.class_count() == self.len()
    }

    /// Class index of each node, numbered by first appearance.
    pub fn partition(&self) -> Vec<usize> {
        let mut ids: HashMap<&Color, usize> = HashMap::new();
        self.0
            .iter()
            .map(|c| {
                let next = ids.len();
                *ids.entry(c).or_insert(next)
            })
            .collect()
    }
}

/// Color of every node is its label set.
pub fn initial_coloring(g: &Graph) -> Coloring {
    Coloring((0..g.n()).map(|v| Color::labels(g.label_names(v))).collect())
}

pub fn refine_step(g: &Graph, col: &Coloring) -> Coloring {
    assert_eq!(col.len(), g.n(), "coloring does not fit the graph");
    Coloring(
        (0..g.n())
            .map(|v| Color::refined(col.get(v), g.neighbors(v).iter().map(|&w| col.get(w).clone()).collect()))
            .collect(),
    )
}

/// `t` refinement steps starting from `col`.
pub fn wl(g: &Graph, col: &Coloring, t: usize) -> Coloring {
    let mut cur = col.clone();
    for _ in 0..t {
        cur = refine_step(g, &cur);
    }
    cur
}

pub fn histogram(col: &Coloring) -> Histogram {
    col.histogram()
}

/// Points get the same color after `max(|a|, |b|)` steps.
pub fn node_equiv_wl(a: &PointedGraph, b: &PointedGraph) -> bool {
    let t = a.graph.n().max(b.graph.n());
    let ca = wl(&a.graph, &initial_coloring(&a.graph), t);
    let cb = wl(&b.graph, &initial_coloring(&b.graph), t);
    ca.get(a.point) == cb.get(b.point)
}

/// Color histograms agree after `max(|a|, |b|)` steps.
pub fn graph_equiv_wl(a: &Graph, b: &Graph) -> bool {
    let t = a.n().max(b.n());
    wl(a, &initial_coloring(a), t).histogram() == wl(b, &initial_coloring(b), t).histogram()
}
