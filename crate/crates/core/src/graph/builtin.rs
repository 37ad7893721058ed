//! Named graphs used throughout the tests and the CLI.

use crate::error::{Error, Result};
use crate::graph::{Graph, PointedGraph};

/// A built-in is either a single graph or a pair meant for comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Builtin {
    Single(PointedGraph),
    Pair(PointedGraph, PointedGraph),
}

impl Builtin {
    pub fn graphs(&self) -> Vec<&PointedGraph> {
        match self {
            Builtin::Single(g) => vec![g],
            Builtin::Pair(a, b) => vec![a, b],
        }
    }
}

fn g(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges).expect("builtin edges are valid")
}

pub fn cycle(n: usize) -> Graph {
    let mut out = Graph::empty(n);
    if n >= 3 {
        for i in 0..n {
            out.add_edge(i, (i + 1) % n).unwrap();
        }
    } else if n == 2 {
        out.add_edge(0, 1).unwrap();
    }
    out
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    g(n, &edges)
}

pub fn complete(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    g(n, &edges)
}

/// Triangular prism: triangles {0,1,2} and {3,4,5} joined by a matching.
pub fn prism() -> Graph {
    g(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])
}

/// K3,3 with sides {0,1,2} and {3,4,5}.
pub fn k33() -> Graph {
    let edges: Vec<_> = (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect();
    g(6, &edges)
}

/// (C_{4r+6}, C_{2r+3} ⊎ C_{2r+3}).
pub fn cycle_pair(r: usize) -> (Graph, Graph) {
    let half = cycle(2 * r + 3);
    (cycle(4 * r + 6), Graph::disjoint_union(&half, &half).unwrap())
}

/// Rooted 2×n grid. Nodes `0..n` are the top row `u_1..u_n`, nodes `n..2n`
/// the bottom row `v_1..v_n`; the root is `u_1 = 0`.
pub fn grid2xn(n: usize) -> Graph {
    let mut out = Graph::empty(2 * n);
    for i in 0..n {
        out.add_edge(i, n + i).unwrap();
        if i + 1 < n {
            out.add_edge(i, i + 1).unwrap();
            out.add_edge(n + i, n + i + 1).unwrap();
        }
    }
    out
}

/// Central square 0-1-2-3 with every node joined to six extra nodes: two
/// triangles for the nodes in `triangles`, one 6-cycle for the others.
fn square_with_gadgets(triangles: [usize; 2]) -> Graph {
    let mut out = Graph::empty(28);
    for i in 0..4 {
        out.add_edge(i, (i + 1) % 4).unwrap();
    }
    let mut next = 4;
    for hub in 0..4 {
        let block: Vec<usize> = (next..next + 6).collect();
        next += 6;
        for &w in &block {
            out.add_edge(hub, w).unwrap();
        }
        if triangles.contains(&hub) {
            for t in block.chunks(3) {
                out.add_edge(t[0], t[1]).unwrap();
                out.add_edge(t[1], t[2]).unwrap();
                out.add_edge(t[0], t[2]).unwrap();
            }
        } else {
            for i in 0..6 {
                out.add_edge(block[i], block[(i + 1) % 6]).unwrap();
            }
        }
    }
    out
}

/// The two 28-node graphs separating depth-1 hierarchical ego refinement
/// from depth-1 WL-IR. In the first, opposite square nodes 0 and 2 carry the
/// triangles; in the second, adjacent nodes 0 and 1 do.
pub fn rs_pair() -> (Graph, Graph) {
    (square_with_gadgets([0, 2]), square_with_gadgets([0, 1]))
}

/// Cayley graph on Z4×Z4 with connection set ±(1,0), ±(0,1), ±(1,1).
pub fn shrikhande() -> Graph {
    let id = |a: usize, b: usize| 4 * (a % 4) + b % 4;
    let mut out = Graph::empty(16);
    for a in 0..4 {
        for b in 0..4 {
            for (da, db) in [(1, 0), (0, 1), (1, 1)] {
                out.add_edge(id(a, b), id(a + da, b + db)).unwrap();
            }
        }
    }
    out
}

/// K4 □ K4: cells of a 4×4 board, adjacent when sharing a row or column.
pub fn rook4x4() -> Graph {
    let mut out = Graph::empty(16);
    for u in 0..16 {
        for v in u + 1..16 {
            if u / 4 == v / 4 || u % 4 == v % 4 {
                out.add_edge(u, v).unwrap();
            }
        }
    }
    out
}

/// Names accepted by [`builtin`], with parameter placeholders.
pub fn builtin_names() -> &'static [&'static str] {
    &[
        "fig1-pair",
        "cycle-pair(r)",
        "rs-pair",
        "grid2xn(n)",
        "cycle(n)",
        "shrikhande",
        "rook4x4",
        "srg-pair",
        "complete(n)",
        "path(n)",
    ]
}

fn split_name(spec: &str) -> Result<(&str, Option<usize>)> {
    let bad = |msg: &str| Error::BadParam { name: spec.to_string(), msg: msg.to_string() };
    let (name, arg) = if let Some(open) = spec.find('(') {
        let inner = spec[open + 1..].strip_suffix(')').ok_or_else(|| bad("missing `)`"))?;
        (&spec[..open], Some(inner))
    } else if let Some((n, a)) = spec.split_once(':') {
        (n, Some(a))
    } else {
        (spec, None)
    };
    let arg = arg.map(|a| a.trim().parse::<usize>().map_err(|_| bad("parameter must be a non-negative integer"))).transpose()?;
    Ok((name, arg))
}

fn pointed(graph: Graph) -> PointedGraph {
    PointedGraph { graph, point: 0 }
}

/// Looks up a built-in by name, e.g. `fig1-pair`, `cycle-pair(2)` or
/// `cycle:7`. Every graph is rooted at node 0.
pub fn builtin(spec: &str) -> Result<Builtin> {
    let (name, arg) = split_name(spec)?;
    let need = |min: usize| -> Result<usize> {
        match arg {
            Some(a) if a >= min => Ok(a),
            Some(_) => Err(Error::BadParam { name: name.into(), msg: format!("parameter must be at least {min}") }),
            None => Err(Error::BadParam { name: name.into(), msg: "missing parameter".into() }),
        }
    };
    let none = || -> Result<()> {
        match arg {
            None => Ok(()),
            Some(_) => Err(Error::BadParam { name: name.into(), msg: "takes no parameter".into() }),
        }
    };
    Ok(match name {
        "fig1-pair" => {
            none()?;
            Builtin::Pair(pointed(prism()), pointed(k33()))
        }
        "cycle-pair" => {
            let (a, b) = cycle_pair(need(0)?);
            Builtin::Pair(pointed(a), pointed(b))
        }
        "rs-pair" => {
            none()?;
            let (a, b) = rs_pair();
            Builtin::Pair(pointed(a), pointed(b))
        }
        "grid2xn" => Builtin::Single(pointed(grid2xn(need(1)?))),
        "cycle" => Builtin::Single(pointed(cycle(need(3)?))),
        "complete" => Builtin::Single(pointed(complete(need(1)?))),
        "path" => Builtin::Single(pointed(path(need(1)?))),
        "shrikhande" => {
            none()?;
            Builtin::Single(pointed(shrikhande()))
        }
        "rook4x4" => {
            none()?;
            Builtin::Single(pointed(rook4x4()))
        }
        "srg-pair" => {
            none()?;
            Builtin::Pair(pointed(shrikhande()), pointed(rook4x4()))
        }
        _ => return Err(Error::UnknownBuiltin(spec.to_string())),
    })
}

/// Pair built-ins used as the comparison corpus.
pub const CORPUS_PAIRS: &[&str] = &["fig1-pair", "cycle-pair(1)", "cycle-pair(2)", "rs-pair", "srg-pair"];

/// Every corpus pair as `(name, left, right)`.
pub fn corpus_pairs() -> Vec<(String, Graph, Graph)> {
    CORPUS_PAIRS
        .iter()
        .map(|name| match builtin(name).expect("corpus names are valid") {
            Builtin::Pair(a, b) => (name.to_string(), a.graph, b.graph),
            Builtin::Single(_) => unreachable!("corpus entries are pairs"),
        })
        .collect()
}

/// Named graphs: both sides of every corpus pair, a few small shapes and
/// one labeled graph.
pub fn corpus() -> Vec<(String, Graph)> {
    let mut out = Vec::new();
    for (name, a, b) in corpus_pairs() {
        out.push((format!("{name}/0"), a));
        out.push((format!("{name}/1"), b));
    }
    for name in ["grid2xn(3)", "cycle(6)", "complete(4)", "path(5)"] {
        if let Ok(Builtin::Single(p)) = builtin(name) {
            out.push((name.to_string(), p.graph));
        }
    }
    let mut lab = cycle(5).with_universe(crate::graph::Universe::new(["p", "q"]).expect("distinct")).expect("fresh");
    for (v, p) in [(0, "p"), (2, "p"), (3, "q"), (3, "p")] {
        lab.add_label(v, p).expect("known");
    }
    lab.add_edge(0, 2).expect("new edge");
    out.push(("labeled-c5".to_string(), lab));
    out
}
