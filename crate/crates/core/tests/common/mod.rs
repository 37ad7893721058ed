//! Random instance generators shared by the property tests and the
//! acceptance harness.
#![allow(dead_code)]

use ego_refine::graph::{Graph, Universe};
use ego_refine::hom::RootedPattern;
use ego_refine::logic::Formula;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

pub const PROPS: [&str; 2] = ["p", "q"];

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// `G(n, p)` with `n` in `1..=max_n`; with `labeled`, each node gets a
/// random subset of [`PROPS`].
pub fn graph(rng: &mut StdRng, max_n: usize, labeled: bool) -> Graph {
    let n = rng.gen_range(1..=max_n);
    let p = rng.gen_range(0.15..0.65);
    let universe = if labeled { Universe::new(PROPS).unwrap() } else { Universe::empty() };
    let mut g = Graph::edgeless(n, universe);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    if labeled {
        for v in 0..n {
            for name in PROPS {
                if rng.gen_bool(0.4) {
                    g.add_label(v, name).unwrap();
                }
            }
        }
    }
    g
}

pub fn permutation(rng: &mut StdRng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

/// A pair that is isomorphic about half the time: a permuted copy, with
/// one edge toggled in the other half.
pub fn pair(rng: &mut StdRng, max_n: usize, labeled: bool) -> (Graph, Graph) {
    let a = graph(rng, max_n, labeled);
    let mut b = a.permute(&permutation(rng, a.n()));
    if a.n() >= 2 && rng.gen_bool(0.5) {
        let u = rng.gen_range(0..a.n());
        let v = (u + rng.gen_range(1..a.n())) % a.n();
        let edges: Vec<(usize, usize)> = b.edges().filter(|&e| e != (u.min(v), u.max(v))).collect();
        let mut c = Graph::edgeless(b.n(), b.universe().clone());
        for (x, y) in edges {
            c.add_edge(x, y).unwrap();
        }
        if !b.has_edge(u, v) {
            c.add_edge(u, v).unwrap();
        }
        for w in 0..b.n() {
            for name in b.label_names(w) {
                c.add_label(w, &name).unwrap();
            }
        }
        b = c;
    }
    (a, b)
}

/// Random labeled tree on `n` nodes (node `i > 0` attaches below `0..i`).
pub fn tree(rng: &mut StdRng, n: usize) -> Graph {
    let mut g = Graph::edgeless(n, Universe::new(PROPS).unwrap());
    for i in 1..n {
        let j = rng.gen_range(0..i);
        g.add_edge(i, j).unwrap();
    }
    for v in 0..n {
        if rng.gen_bool(0.2) {
            g.add_label(v, PROPS[rng.gen_range(0..2)]).unwrap();
        }
    }
    g
}

pub fn tree_pattern(rng: &mut StdRng, max_n: usize) -> RootedPattern {
    let n = rng.gen_range(1..=max_n);
    let g = tree(rng, n);
    let root = rng.gen_range(0..n);
    RootedPattern::new(g, root).unwrap()
}

/// A tree plus extra edges at the root, so every cycle passes through it.
/// With `cyclic`, at least one such edge is added (needs `max_n >= 3`).
pub fn cacyclic_pattern(rng: &mut StdRng, max_n: usize, cyclic: bool) -> RootedPattern {
    loop {
        let n = rng.gen_range(if cyclic { 3 } else { 1 }..=max_n);
        let mut g = tree(rng, n);
        let root = rng.gen_range(0..n);
        for v in 0..n {
            if v != root && !g.has_edge(root, v) && rng.gen_bool(0.5) {
                g.add_edge(root, v).unwrap();
            }
        }
        let f = RootedPattern::new(g, root).unwrap();
        if !cyclic || !f.pattern.is_forest() {
            return f;
        }
    }
}

/// Connected pattern with arbitrary cycles.
pub fn pattern(rng: &mut StdRng, max_n: usize) -> RootedPattern {
    let n = rng.gen_range(1..=max_n);
    let mut g = tree(rng, n);
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && rng.gen_bool(0.25) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    let root = rng.gen_range(0..n);
    RootedPattern::new(g, root).unwrap()
}

/// Graded modal formula over [`PROPS`] (plus one proposition no graph has).
pub fn gml(rng: &mut StdRng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.25) {
        return match rng.gen_range(0..4) {
            0 => Formula::Top,
            1 => Formula::prop("p"),
            2 => Formula::prop("q"),
            _ => Formula::prop("r"),
        };
    }
    match rng.gen_range(0..5) {
        0 => Formula::not(gml(rng, depth - 1)),
        1 => Formula::and(gml(rng, depth - 1), gml(rng, depth - 1)),
        2 => Formula::or(gml(rng, depth - 1), gml(rng, depth - 1)),
        3 => Formula::dia(rng.gen_range(1..=3), gml(rng, depth - 1)),
        _ => Formula::boxed(gml(rng, depth - 1)),
    }
}

/// Which hybrid operators [`hybrid`] may use.
#[derive(Clone, Copy, Debug)]
pub struct Ops {
    /// Every binder is followed by `W^r` with this radius; `None` means
    /// plain binders.
    pub radius: Option<u32>,
    /// `W` may appear anywhere (not only after a binder).
    pub free_within: bool,
    pub at: bool,
    pub max_binders: usize,
}

/// Sentence mixing modal operators with binders over the given operators.
pub fn hybrid(rng: &mut StdRng, depth: usize, ops: Ops) -> Formula {
    fn go(rng: &mut StdRng, depth: usize, ops: Ops, scope: &mut Vec<String>, binders: usize) -> Formula {
        if depth == 0 || rng.gen_bool(0.2) {
            if !scope.is_empty() && rng.gen_bool(0.5) {
                return Formula::var(scope[rng.gen_range(0..scope.len())].clone());
            }
            return match rng.gen_range(0..3) {
                0 => Formula::Top,
                1 => Formula::prop("p"),
                _ => Formula::prop("q"),
            };
        }
        let d = depth - 1;
        match rng.gen_range(0..9) {
            0 => Formula::not(go(rng, d, ops, scope, binders)),
            1 | 2 => Formula::and(go(rng, d, ops, scope, binders), go(rng, d, ops, scope, binders)),
            3 => Formula::or(go(rng, d, ops, scope, binders), go(rng, d, ops, scope, binders)),
            4 | 5 => Formula::dia(rng.gen_range(1..=2), go(rng, d, ops, scope, binders)),
            6 => Formula::boxed(go(rng, d, ops, scope, binders)),
            7 if binders < ops.max_binders => {
                // Reuse names sometimes so shadowing is exercised.
                let x = ["x", "y", "z"][rng.gen_range(0..3)].to_string();
                scope.push(x.clone());
                let body = go(rng, d, ops, scope, binders + 1);
                scope.pop();
                match ops.radius {
                    Some(r) => Formula::down(x, Formula::within(r, body)),
                    None => Formula::down(x, body),
                }
            }
            8 if ops.at && !scope.is_empty() => {
                let x = scope[rng.gen_range(0..scope.len())].clone();
                Formula::at(x, go(rng, d, ops, scope, binders))
            }
            8 if ops.free_within => Formula::within(rng.gen_range(1..=3), go(rng, d, ops, scope, binders)),
            _ => Formula::dia(1, go(rng, d, ops, scope, binders)),
        }
    }
    go(rng, depth, ops, &mut Vec::new(), 0)
}
