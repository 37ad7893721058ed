//! Hierarchical ego refinement: the hash-based counterpart of HE-GNNs
//! (unbounded radius) and HES-GNNs (bounded radius).

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::color::Color;
use crate::error::{Error, Result};
use crate::graph::{Graph, PointedGraph};
use crate::refine::{initial_coloring, wl, Coloring};

/// Ego radius: a positive integer, or unbounded (the whole graph).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Radius {
    Bounded(usize),
    Unbounded,
}

impl Radius {
    pub fn as_option(self) -> Option<usize> {
        match self {
            Radius::Bounded(r) => Some(r),
            Radius::Unbounded => None,
        }
    }
}

impl From<Option<usize>> for Radius {
    fn from(r: Option<usize>) -> Self {
        r.map_or(Radius::Unbounded, Radius::Bounded)
    }
}

impl fmt::Display for Radius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Radius::Bounded(r) => write!(f, "{r}"),
            Radius::Unbounded => f.write_str("inf"),
        }
    }
}

impl FromStr for Radius {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "inf" | "∞" | "unbounded" => Ok(Radius::Unbounded),
            _ => match s.parse::<usize>() {
                Ok(r) if r >= 1 => Ok(Radius::Bounded(r)),
                _ => Err(Error::BadParam { name: "radius".into(), msg: format!("`{s}` is not a positive integer or `inf`") }),
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HeParams {
    pub depth: usize,
    pub radius: Radius,
    /// Refinement steps at every nesting level. `None` means the node count
    /// of the graph, or of the larger graph in a comparison.
    pub iters: Option<usize>,
}

impl HeParams {
    pub fn new(depth: usize, radius: Radius) -> Self {
        HeParams { depth, radius, iters: None }
    }

    pub fn with_iters(self, iters: usize) -> Self {
        HeParams { iters: Some(iters), ..self }
    }
}

fn run(g: &Graph, depth: usize, radius: Radius, t: usize) -> Coloring {
    if depth == 0 {
        return wl(g, &initial_coloring(g), t);
    }
    let inner: Vec<Color> = (0..g.n())
        .into_par_iter()
        .map(|u| {
            let (h, pu) = match radius {
                Radius::Unbounded => (g.mark(u), u),
                Radius::Bounded(r) => {
                    let (sub, remap) = g.ego_subgraph(u, r);
                    let pu = remap.get(u).expect("center survives");
                    (sub.mark(pu), pu)
                }
            };
            run(&h, depth - 1, radius, t).get(pu).clone()
        })
        .collect();
    let init = Coloring::new((0..g.n()).map(|v| Color::nested(&Color::labels(g.label_names(v)), &inner[v])).collect());
    wl(g, &init, t)
}

/// Depth-`d` signature of every node.
pub fn he_signatures(g: &Graph, p: HeParams) -> Coloring {
    run(g, p.depth, p.radius, p.iters.unwrap_or(g.n()))
}

fn resolve(p: HeParams, a: &Graph, b: &Graph) -> HeParams {
    HeParams { iters: Some(p.iters.unwrap_or(a.n().max(b.n()))), ..p }
}

pub fn node_equiv_he(a: &PointedGraph, b: &PointedGraph, p: HeParams) -> bool {
    let p = resolve(p, &a.graph, &b.graph);
    he_signatures(&a.graph, p).get(a.point) == he_signatures(&b.graph, p).get(b.point)
}

/// Signature multisets agree.
pub fn graph_equiv_he(a: &Graph, b: &Graph, p: HeParams) -> bool {
    let p = resolve(p, a, b);
    a.n() == b.n() && he_signatures(a, p).histogram() == he_signatures(b, p).histogram()
}

/// Largest depth [`min_distinguishing_depth`] accepts.
pub const MAX_DEPTH_GUARD: usize = 3;

/// Smallest `d <= max_d` at which the graphs are told apart.
pub fn min_distinguishing_depth(a: &Graph, b: &Graph, max_d: usize, radius: Radius) -> Result<Option<usize>> {
    if max_d > MAX_DEPTH_GUARD {
        return Err(Error::Guard { what: "nesting depth", got: max_d, limit: MAX_DEPTH_GUARD });
    }
    Ok((0..=max_d).find(|&d| !graph_equiv_he(a, b, HeParams::new(d, radius))))
}
