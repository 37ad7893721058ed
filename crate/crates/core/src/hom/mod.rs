//! Homomorphism counts from rooted patterns, and ego-rank.

mod rank;

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::graph::{Graph, PointedGraph};

pub use rank::{ego_rank, ego_rank_literal, verify_dep, DepAssignment, DepCheck, EGO_RANK_GUARD};

/// Largest pattern accepted by the brute-force counters.
pub const HOM_BRUTE_GUARD: usize = 12;

/// A pattern graph with a root from which every node is reachable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootedPattern {
    pub pattern: Graph,
    pub root: usize,
}

impl RootedPattern {
    pub fn new(pattern: Graph, root: usize) -> Result<Self> {
        if root >= pattern.n() {
            return Err(Error::NodeOutOfRange(root));
        }
        if pattern.distances(root).iter().any(Option::is_none) {
            return Err(Error::BadParam { name: "pattern".into(), msg: "not every node is reachable from the root".into() });
        }
        Ok(RootedPattern { pattern, root })
    }

    pub fn n(&self) -> usize {
        self.pattern.n()
    }
}

impl TryFrom<PointedGraph> for RootedPattern {
    type Error = Error;

    fn try_from(p: PointedGraph) -> Result<Self> {
        RootedPattern::new(p.graph, p.point)
    }
}

/// True iff the pattern has no cycle.
pub fn is_acyclic(f: &RootedPattern) -> bool {
    f.pattern.is_forest()
}

/// True iff every cycle passes through the root.
pub fn is_cacyclic(f: &RootedPattern) -> bool {
    let rest: Vec<usize> = (0..f.n()).filter(|&w| w != f.root).collect();
    f.pattern.induced(&rest).0.is_forest()
}

/// `fits[w][x]`: pattern node `w`'s labels are all present at `x`.
fn label_fits(f: &Graph, g: &Graph) -> Vec<Vec<bool>> {
    (0..f.n())
        .map(|w| {
            let names = f.label_names(w);
            (0..g.n()).map(|x| names.iter().all(|p| g.has_label_named(x, p))).collect()
        })
        .collect()
}

fn brute_guard(f: &Graph) -> Result<()> {
    if f.n() > HOM_BRUTE_GUARD {
        return Err(Error::Guard { what: "pattern nodes", got: f.n(), limit: HOM_BRUTE_GUARD });
    }
    Ok(())
}

/// Number of homomorphisms `f → g` extending `fixed`.
fn extend(f: &Graph, g: &Graph, fixed: &[Option<usize>]) -> Result<u64> {
    let fits = label_fits(f, g);
    for w in 0..f.n() {
        if let Some(x) = fixed[w] {
            if !fits[w][x] {
                return Ok(0);
            }
            for &w2 in f.neighbors(w) {
                if fixed[w2].is_some_and(|x2| !g.has_edge(x, x2)) {
                    return Ok(0);
                }
            }
        }
    }
    // BFS order from the fixed nodes, then from each remaining component.
    let mut order = Vec::new();
    let mut seen: Vec<bool> = fixed.iter().map(Option::is_some).collect();
    let mut queue: VecDeque<usize> = (0..f.n()).filter(|&w| seen[w]).collect();
    loop {
        while let Some(w) = queue.pop_front() {
            for &w2 in f.neighbors(w) {
                if !seen[w2] {
                    seen[w2] = true;
                    order.push(w2);
                    queue.push_back(w2);
                }
            }
        }
        match (0..f.n()).find(|&w| !seen[w]) {
            Some(w) => {
                seen[w] = true;
                order.push(w);
                queue.push_back(w);
            }
            None => break,
        }
    }
    let mut map = fixed.to_vec();
    let all: Vec<usize> = (0..g.n()).collect();
    fn go(i: usize, order: &[usize], f: &Graph, g: &Graph, fits: &[Vec<bool>], map: &mut [Option<usize>], all: &[usize]) -> Result<u64> {
        let Some(&w) = order.get(i) else { return Ok(1) };
        let anchor = f.neighbors(w).iter().find_map(|&w2| map[w2]);
        let candidates = anchor.map_or(all, |x| g.neighbors(x));
        let mut total = 0u64;
        for &x in candidates {
            if !fits[w][x] || f.neighbors(w).iter().any(|&w2| map[w2].is_some_and(|x2| !g.has_edge(x, x2))) {
                continue;
            }
            map[w] = Some(x);
            let sub = go(i + 1, order, f, g, fits, map, all)?;
            map[w] = None;
            total = total.checked_add(sub).ok_or(Error::Overflow)?;
        }
        Ok(total)
    }
    go(0, &order, f, g, &fits, &mut map, &all)
}

/// Counts homomorphisms `(F, root) → (G, point)` by backtracking.
pub fn hom_brute(f: &RootedPattern, g: &PointedGraph) -> Result<u64> {
    brute_guard(&f.pattern)?;
    let mut fixed = vec![None; f.n()];
    fixed[f.root] = Some(g.point);
    extend(&f.pattern, &g.graph, &fixed)
}

/// Counts homomorphisms `f → g` that extend the partial map `h`
/// (pairs of pattern node, target node).
pub fn hom_partial_brute(f: &Graph, g: &Graph, h: &[(usize, usize)]) -> Result<u64> {
    brute_guard(f)?;
    let mut fixed = vec![None; f.n()];
    for &(w, x) in h {
        if w >= f.n() {
            return Err(Error::NodeOutOfRange(w));
        }
        if x >= g.n() {
            return Err(Error::NodeOutOfRange(x));
        }
        if fixed[w].is_some_and(|y| y != x) {
            return Err(Error::BadParam { name: "h".into(), msg: format!("node {w} mapped twice") });
        }
        fixed[w] = Some(x);
    }
    extend(f, g, &fixed)
}

/// Tree DP over `component` (a tree in `f` avoiding `skip`), rooted at
/// `top`: `table[w][x]` counts maps of `w`'s subtree with `w ↦ x`.
/// `allowed[w][x]` filters the image of each node.
fn tree_table(f: &Graph, g: &Graph, top: usize, skip: Option<usize>, allowed: &dyn Fn(usize, usize) -> bool) -> Result<Vec<Option<Vec<u64>>>> {
    let mut parent = vec![usize::MAX; f.n()];
    let mut order = vec![top];
    parent[top] = top;
    let mut i = 0;
    while i < order.len() {
        let w = order[i];
        i += 1;
        for &c in f.neighbors(w) {
            if Some(c) != skip && parent[c] == usize::MAX {
                parent[c] = w;
                order.push(c);
            }
        }
    }
    let mut table: Vec<Option<Vec<u64>>> = vec![None; f.n()];
    for &w in order.iter().rev() {
        let mut row: Vec<u64> = (0..g.n()).map(|x| allowed(w, x) as u64).collect();
        for &c in f.neighbors(w) {
            if Some(c) == skip || parent[c] != w || c == top {
                continue;
            }
            let child = table[c].as_ref().expect("children first");
            for (x, cell) in row.iter_mut().enumerate() {
                if *cell == 0 {
                    continue;
                }
                let mut s = 0u64;
                for &y in g.neighbors(x) {
                    s = s.checked_add(child[y]).ok_or(Error::Overflow)?;
                }
                *cell = cell.checked_mul(s).ok_or(Error::Overflow)?;
            }
        }
        table[w] = Some(row);
    }
    Ok(table)
}

/// Counts homomorphisms from an acyclic rooted pattern by the subtree
/// product recursion.
pub fn hom_tree(f: &RootedPattern, g: &PointedGraph) -> Result<u64> {
    if !is_acyclic(f) {
        return Err(Error::Fragment("pattern has a cycle".into()));
    }
    let fits = label_fits(&f.pattern, &g.graph);
    let table = tree_table(&f.pattern, &g.graph, f.root, None, &|w, x| fits[w][x])?;
    Ok(table[f.root].as_ref().expect("root")[g.point])
}

/// Counts homomorphisms from a c-acyclic rooted pattern: the root is fixed
/// to the point, and every tree of `F - root` is counted by tree DP with
/// root-neighbors restricted to neighbors of the point.
pub fn hom_cacyclic(f: &RootedPattern, g: &PointedGraph) -> Result<u64> {
    if !is_cacyclic(f) {
        return Err(Error::Fragment("pattern has a cycle avoiding the root".into()));
    }
    let (fp, gg) = (&f.pattern, &g.graph);
    let fits = label_fits(fp, gg);
    if !fits[f.root][g.point] {
        return Ok(0);
    }
    let allowed = |w: usize, x: usize| fits[w][x] && (!fp.has_edge(w, f.root) || gg.has_edge(x, g.point));
    let mut done = vec![false; fp.n()];
    done[f.root] = true;
    let mut total = 1u64;
    for top in 0..fp.n() {
        if done[top] {
            continue;
        }
        let table = tree_table(fp, gg, top, Some(f.root), &allowed)?;
        for (w, row) in table.iter().enumerate() {
            if row.is_some() {
                done[w] = true;
            }
        }
        let sum = table[top].as_ref().expect("top").iter().try_fold(0u64, |a, &b| a.checked_add(b)).ok_or(Error::Overflow)?;
        total = total.checked_mul(sum).ok_or(Error::Overflow)?;
    }
    Ok(total)
}

/// Counts for every pattern, using the cheapest applicable counter.
pub fn hom_vector(patterns: &[RootedPattern], g: &PointedGraph) -> Result<Vec<u64>> {
    patterns
        .iter()
        .map(|f| {
            if is_acyclic(f) {
                hom_tree(f, g)
            } else if is_cacyclic(f) {
                hom_cacyclic(f, g)
            } else {
                hom_brute(f, g)
            }
        })
        .collect()
}
