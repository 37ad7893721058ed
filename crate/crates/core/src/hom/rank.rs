use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hom::RootedPattern;

/// Largest pattern accepted by [`ego_rank`].
pub const EGO_RANK_GUARD: usize = 9;

/// `dep[u]`: the node `u` depends on, or `None` for ⊥.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepAssignment {
    pub dep: Vec<Option<usize>>,
}

impl DepAssignment {
    /// `dep(u), dep(dep(u)), ...` until ⊥ or a repeat.
    pub fn deps(&self, u: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.dep.get(u).copied().flatten();
        while let Some(w) = cur {
            if out.contains(&w) || w >= self.dep.len() {
                break;
            }
            out.push(w);
            cur = self.dep[w];
        }
        out
    }

    pub fn rank(&self, u: usize) -> usize {
        self.deps(u).len()
    }
}

/// Outcome of [`verify_dep`]; `violation` names the first failed rule.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DepCheck {
    pub valid: bool,
    /// Every connected piece of a fiber `dep⁻¹(v)` contains a neighbor of `v`.
    pub normal_form: bool,
    pub max_rank: usize,
    pub violation: Option<String>,
}

fn acyclic_on(f: &RootedPattern, nodes: &[usize]) -> bool {
    f.pattern.induced(nodes).0.is_forest()
}

/// Checks `dep(root) = ⊥`, the edge rule, acyclic fibers and
/// well-foundedness.
pub fn verify_dep(f: &RootedPattern, d: &DepAssignment) -> DepCheck {
    let max_rank = (0..d.dep.len()).map(|u| d.rank(u)).max().unwrap_or(0);
    let fail = |msg: String| DepCheck { valid: false, normal_form: false, max_rank, violation: Some(msg) };
    let n = f.n();
    if d.dep.len() != n {
        return fail(format!("assignment covers {} nodes, pattern has {n}", d.dep.len()));
    }
    if let Some((u, w)) = d.dep.iter().enumerate().find_map(|(u, w)| w.filter(|&w| w >= n).map(|w| (u, w))) {
        return fail(format!("dep({u}) = {w} is out of range"));
    }
    if d.dep[f.root].is_some() {
        return fail("the root must depend on nothing".into());
    }
    for u in 0..n {
        let mut cur = d.dep[u];
        for _ in 0..n {
            cur = match cur {
                Some(w) => d.dep[w],
                None => break,
            };
        }
        if cur.is_some() {
            return fail(format!("node {u} reaches a dependency cycle"));
        }
    }
    for (a, b) in f.pattern.edges() {
        if !(d.dep[a] == d.dep[b] || d.deps(a).contains(&b) || d.deps(b).contains(&a)) {
            return fail(format!("edge {a}-{b} breaks the dependency rule"));
        }
    }
    let mut fibers: HashMap<Option<usize>, Vec<usize>> = HashMap::new();
    for u in 0..n {
        fibers.entry(d.dep[u]).or_default().push(u);
    }
    let mut keys: Vec<_> = fibers.keys().copied().collect();
    keys.sort();
    for k in keys {
        if !acyclic_on(f, &fibers[&k]) {
            let name = k.map_or("⊥".to_string(), |w| w.to_string());
            return fail(format!("nodes depending on {name} contain a cycle"));
        }
    }
    let normal_form = fibers.iter().all(|(k, nodes)| {
        let Some(v) = *k else { return true };
        let (sub, remap) = f.pattern.induced(nodes);
        let touches: Vec<bool> = (0..sub.n()).map(|i| f.pattern.has_edge(remap.original(i), v)).collect();
        (0..sub.n()).all(|i| sub.distances(i).iter().enumerate().any(|(j, d)| d.is_some() && touches[j]))
    });
    DepCheck { valid: true, normal_form, max_rank, violation: None }
}

struct Search {
    n: usize,
    adj: Vec<u32>,
    normal: bool,
    memo: HashMap<(u32, u32), (usize, u32)>,
}

impl Search {
    fn acyclic(&self, s: u32) -> bool {
        let edges: u32 = (0..self.n).filter(|&i| s >> i & 1 == 1).map(|i| (self.adj[i] & s).count_ones()).sum::<u32>() / 2;
        edges as usize + self.components(s).len() == s.count_ones() as usize
    }

    fn components(&self, mut s: u32) -> Vec<u32> {
        let mut out = Vec::new();
        while s != 0 {
            let mut comp = s & s.wrapping_neg();
            loop {
                let grow = (0..self.n).filter(|&i| comp >> i & 1 == 1).fold(comp, |m, i| m | (self.adj[i] & s));
                if grow == comp {
                    break;
                }
                comp = grow;
            }
            out.push(comp);
            s &= !comp;
        }
        out
    }

    fn neighbors(&self, s: u32) -> u32 {
        (0..self.n).filter(|&i| s >> i & 1 == 1).fold(0, |m, i| m | self.adj[i])
    }

    /// Least max depth for the connected set `x` hanging below the node set
    /// `par` (empty at the top), whose top fiber must contain `required`.
    /// Returns the value and the chosen top fiber.
    fn best(&mut self, x: u32, required: u32, par: u32) -> (usize, u32) {
        if required == 0 {
            if let Some(&hit) = self.memo.get(&(x, par)) {
                return hit;
            }
        }
        let mut best = (usize::MAX, 0);
        let mut s = x;
        while s != 0 {
            if s & required == required && self.acyclic(s) && (!self.normal || par == 0 || self.components(s).iter().all(|&c| self.neighbors(c) & par != 0)) {
                let rest = x & !s;
                if rest == 0 {
                    best = (0, s);
                    break;
                }
                let mut worst = 0;
                let mut ok = true;
                for c in self.components(rest) {
                    if (self.neighbors(c) & s).count_ones() != 1 {
                        ok = false;
                        break;
                    }
                    let p = self.neighbors(c) & s;
                    worst = worst.max(1 + self.best(c, 0, p).0);
                    if worst >= best.0 {
                        break;
                    }
                }
                if ok && worst < best.0 {
                    best = (worst, s);
                }
            }
            s = (s - 1) & x;
        }
        if required == 0 {
            self.memo.insert((x, par), best);
        }
        best
    }

    fn assign(&mut self, x: u32, required: u32, parent: Option<usize>, dep: &mut [Option<usize>]) {
        let par = parent.map_or(0, |p| 1u32 << p);
        let (_, s) = self.best(x, required, par);
        for (i, slot) in dep.iter_mut().enumerate() {
            if s >> i & 1 == 1 {
                *slot = parent;
            }
        }
        for c in self.components(x & !s) {
            let p = (self.neighbors(c) & s).trailing_zeros() as usize;
            self.assign(c, 0, Some(p), dep);
        }
    }
}

fn search(f: &RootedPattern, normal: bool) -> Result<(usize, DepAssignment)> {
    let n = f.n();
    if n > EGO_RANK_GUARD {
        return Err(Error::Guard { what: "pattern nodes", got: n, limit: EGO_RANK_GUARD });
    }
    let adj = (0..n).map(|u| f.pattern.neighbors(u).iter().fold(0u32, |m, &w| m | 1 << w)).collect();
    let mut search = Search { n, adj, normal, memo: HashMap::new() };
    let all = (1u32 << n) - 1;
    let root = 1u32 << f.root;
    let (rank, _) = search.best(all, root, 0);
    let mut dep = vec![None; n];
    search.assign(all, root, None, &mut dep);
    Ok((rank, DepAssignment { dep }))
}

/// Exact ego-rank with a witnessing assignment.
///
/// The minimum runs over well-founded assignments in normal form (see
/// [`DepCheck::normal_form`]). Such an assignment is a forest whose
/// ⊥-fiber contains the root; each connected piece left after removing a
/// fiber hangs below exactly one of its nodes. The search minimizes over
/// these shapes by dynamic programming on connected node subsets.
pub fn ego_rank(f: &RootedPattern) -> Result<(usize, DepAssignment)> {
    search(f, true)
}

/// As [`ego_rank`] but over every assignment passing the three rules,
/// normal form or not. Can be smaller: the 4x2 grid rooted at a corner
/// gets 2 here and 3 from [`ego_rank`].
pub fn ego_rank_literal(f: &RootedPattern) -> Result<(usize, DepAssignment)> {
    search(f, false)
}
