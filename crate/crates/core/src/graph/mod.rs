//! Labeled undirected simple graphs and the constructions the rest of the
//! crate is built on.

mod builtin;
mod graph6;
mod iso;
mod text;

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

pub use builtin::{
    builtin, builtin_names, complete, corpus, corpus_pairs, cycle, cycle_pair, grid2xn, k33, path, prism,
    rook4x4, rs_pair, shrikhande, Builtin, CORPUS_PAIRS,
};
pub use graph6::{parse_graph6, to_graph6};
pub use iso::{brute_force_isomorphic, brute_force_isomorphic_pointed, ISO_GUARD};
pub use text::{parse_labeled_text, parse_pattern, serialize_labeled_text, serialize_pattern};

/// Ordered list of unique proposition names. Position `i` is coordinate `i`
/// of the multi-hot encoding.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Universe(Arc<[Arc<str>]>);

impl Universe {
    pub fn empty() -> Self {
        Universe(Arc::from(Vec::new()))
    }

    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut out: Vec<Arc<str>> = Vec::new();
        for n in names {
            let n = n.as_ref();
            if out.iter().any(|m| &**m == n) {
                return Err(Error::BadParam {
                    name: "universe".into(),
                    msg: format!("duplicate proposition `{n}`"),
                });
            }
            out.push(Arc::from(n));
        }
        Ok(Universe(Arc::from(out)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn names(&self) -> &[Arc<str>] {
        &self.0
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| &**n == name)
    }

    /// First name of the form `^k` not already present.
    pub fn fresh_name(&self) -> String {
        (1..)
            .map(|k| format!("^{k}"))
            .find(|c| self.index_of(c).is_none())
            .expect("unbounded search")
    }

    /// A copy with `name` appended.
    pub fn with(&self, name: &str) -> Self {
        let mut v: Vec<Arc<str>> = self.0.to_vec();
        v.push(Arc::from(name));
        Universe(Arc::from(v))
    }
}

impl fmt::Debug for Universe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.0.iter()).finish()
    }
}

/// A labeled undirected loop-free graph on nodes `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    universe: Universe,
    adj: Vec<Vec<usize>>,
    labels: Vec<Vec<u32>>,
}

impl Graph {
    /// `n` isolated unlabeled nodes over an empty universe.
    pub fn empty(n: usize) -> Self {
        Graph::edgeless(n, Universe::empty())
    }

    pub fn edgeless(n: usize, universe: Universe) -> Self {
        Graph { universe, adj: vec![Vec::new(); n], labels: vec![Vec::new(); n] }
    }

    /// Unlabeled graph from an edge list.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Adds `{u, v}`. Adding an existing edge is a no-op; loops are rejected.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let n = self.n();
        if u >= n {
            return Err(Error::NodeOutOfRange(u));
        }
        if v >= n {
            return Err(Error::NodeOutOfRange(v));
        }
        if u == v {
            return Err(Error::BadParam { name: "edge".into(), msg: format!("self-loop at {u}") });
        }
        if let Err(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].insert(pos, v);
            let pos = self.adj[v].binary_search(&u).unwrap_err();
            self.adj[v].insert(pos, u);
        }
        Ok(())
    }

    /// Replaces the label set of `v` with the propositions at `props`.
    pub fn set_labels(&mut self, v: usize, props: &[usize]) -> Result<()> {
        if v >= self.n() {
            return Err(Error::NodeOutOfRange(v));
        }
        let mut ls = Vec::with_capacity(props.len());
        for &p in props {
            if p >= self.universe.len() {
                return Err(Error::BadParam {
                    name: "label".into(),
                    msg: format!("proposition index {p} outside universe"),
                });
            }
            ls.push(p as u32);
        }
        ls.sort_unstable();
        ls.dedup();
        self.labels[v] = ls;
        Ok(())
    }

    /// Adds the proposition called `name` to node `v`.
    pub fn add_label(&mut self, v: usize, name: &str) -> Result<()> {
        let p = self.universe.index_of(name).ok_or_else(|| Error::BadParam {
            name: "label".into(),
            msg: format!("unknown proposition `{name}`"),
        })?;
        let mut cur: Vec<usize> = self.labels[v].iter().map(|&x| x as usize).collect();
        cur.push(p);
        self.set_labels(v, &cur)
    }

    /// Same graph over a larger universe that extends the current one.
    pub fn with_universe(&self, universe: Universe) -> Result<Self> {
        let map: Vec<u32> = self
            .universe
            .names()
            .iter()
            .map(|n| universe.index_of(n).map(|i| i as u32).ok_or(Error::UniverseMismatch))
            .collect::<Result<_>>()?;
        let labels = self
            .labels
            .iter()
            .map(|ls| {
                let mut v: Vec<u32> = ls.iter().map(|&p| map[p as usize]).collect();
                v.sort_unstable();
                v
            })
            .collect();
        Ok(Graph { universe, adj: self.adj.clone(), labels })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    /// Proposition indices true at `v`, ascending.
    pub fn labels(&self, v: usize) -> &[u32] {
        &self.labels[v]
    }

    pub fn has_label(&self, v: usize, p: usize) -> bool {
        self.labels[v].binary_search(&(p as u32)).is_ok()
    }

    pub fn has_label_named(&self, v: usize, name: &str) -> bool {
        self.universe.index_of(name).is_some_and(|p| self.has_label(v, p))
    }

    /// Proposition names true at `v`, sorted by name.
    pub fn label_names(&self, v: usize) -> Vec<Arc<str>> {
        let mut out: Vec<Arc<str>> =
            self.labels[v].iter().map(|&p| self.universe.names()[p as usize].clone()).collect();
        out.sort();
        out
    }

    /// Edges `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn is_regular(&self) -> bool {
        self.adj.windows(2).all(|w| w[0].len() == w[1].len())
    }

    /// Breadth-first distances from `v`; `None` for unreachable nodes.
    pub fn distances(&self, v: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n()];
        dist[v] = Some(0);
        let mut q = VecDeque::from([v]);
        while let Some(u) = q.pop_front() {
            let d = dist[u].unwrap();
            for &w in &self.adj[u] {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    q.push_back(w);
                }
            }
        }
        dist
    }

    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.n()];
        let mut count = 0;
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut stack = vec![s];
            seen[s] = true;
            while let Some(u) = stack.pop() {
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// True iff the graph has no cycles.
    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.component_count() == self.n()
    }

    /// Induced subgraph on `nodes` (kept in the given order).
    pub fn induced(&self, nodes: &[usize]) -> (Graph, Remap) {
        let mut forward = vec![None; self.n()];
        for (i, &v) in nodes.iter().enumerate() {
            forward[v] = Some(i);
        }
        let adj = nodes
            .iter()
            .map(|&v| {
                let mut ns: Vec<usize> = self.adj[v].iter().filter_map(|&w| forward[w]).collect();
                ns.sort_unstable();
                ns
            })
            .collect();
        let labels = nodes.iter().map(|&v| self.labels[v].clone()).collect();
        let g = Graph { universe: self.universe.clone(), adj, labels };
        (g, Remap { forward, backward: nodes.to_vec() })
    }

    /// Induced subgraph on the radius-`r` ball around `v`. Nodes keep their
    /// relative order.
    pub fn ego_subgraph(&self, v: usize, r: usize) -> (Graph, Remap) {
        let nodes: Vec<usize> = self
            .distances(v)
            .iter()
            .enumerate()
            .filter(|(_, d)| d.is_some_and(|d| d <= r))
            .map(|(u, _)| u)
            .collect();
        self.induced(&nodes)
    }

    /// Appends a fresh proposition true exactly at `v`.
    pub fn mark(&self, v: usize) -> Graph {
        let name = self.universe.fresh_name();
        let universe = self.universe.with(&name);
        let fresh = (universe.len() - 1) as u32;
        let mut labels = self.labels.clone();
        labels[v].push(fresh);
        Graph { universe, adj: self.adj.clone(), labels }
    }

    /// Relabels node `v` as `perm[v]`.
    pub fn permute(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n(), "permutation length");
        let n = self.n();
        let mut adj = vec![Vec::new(); n];
        let mut labels = vec![Vec::new(); n];
        for v in 0..n {
            let mut ns: Vec<usize> = self.adj[v].iter().map(|&w| perm[w]).collect();
            ns.sort_unstable();
            adj[perm[v]] = ns;
            labels[perm[v]] = self.labels[v].clone();
        }
        Graph { universe: self.universe.clone(), adj, labels }
    }

    /// `a ⊎ b` with `b`'s ids shifted by `|a|`.
    pub fn disjoint_union(a: &Graph, b: &Graph) -> Result<Graph> {
        if a.universe != b.universe {
            return Err(Error::UniverseMismatch);
        }
        let off = a.n();
        let mut adj = a.adj.clone();
        adj.extend(b.adj.iter().map(|ns| ns.iter().map(|&w| w + off).collect()));
        let mut labels = a.labels.clone();
        labels.extend(b.labels.iter().cloned());
        Ok(Graph { universe: a.universe.clone(), adj, labels })
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .field("universe", &self.universe)
            .field("labels", &self.labels)
            .finish()
    }
}

/// Node-id translation between a graph and one of its induced subgraphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Remap {
    forward: Vec<Option<usize>>,
    backward: Vec<usize>,
}

impl Remap {
    /// New id of an old node, if it survived.
    pub fn get(&self, old: usize) -> Option<usize> {
        self.forward.get(old).copied().flatten()
    }

    /// Old id of a new node.
    pub fn original(&self, new: usize) -> usize {
        self.backward[new]
    }

    pub fn kept(&self) -> &[usize] {
        &self.backward
    }
}

/// A graph with a distinguished node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedGraph {
    pub graph: Graph,
    pub point: usize,
}

impl PointedGraph {
    pub fn new(graph: Graph, point: usize) -> Result<Self> {
        if point >= graph.n() {
            return Err(Error::NodeOutOfRange(point));
        }
        Ok(PointedGraph { graph, point })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn ego_on_cycle_is_path() {
        let (h, m) = cycle(10).ego_subgraph(4, 1);
        assert_eq!(h.n(), 3);
        assert_eq!(h.edge_count(), 2);
        assert_eq!(m.get(4), Some(1));
        assert_eq!(m.get(7), None);
    }

    #[test]
    fn ego_of_triangle_is_itself() {
        let (h, _) = cycle(3).ego_subgraph(0, 1);
        assert_eq!(h, cycle(3));
    }

    #[test]
    fn ego_radius_two_in_two_pentagons() {
        let g = Graph::disjoint_union(&cycle(5), &cycle(5)).unwrap();
        let (h, _) = g.ego_subgraph(7, 2);
        assert_eq!(h.n(), 5);
        assert_eq!(h.edge_count(), 5);
        let (h, _) = cycle(10).ego_subgraph(0, 2);
        assert_eq!((h.n(), h.edge_count()), (5, 4));
    }

    #[test]
    fn marks_are_fresh() {
        let g = Graph::empty(2);
        let m = g.mark(0);
        assert!(m.has_label_named(0, "^1"));
        assert!(!m.has_label_named(1, "^1"));
        let mm = m.mark(1);
        assert_eq!(mm.universe().len(), 2);
        assert!(mm.has_label_named(1, "^2"));
    }

    #[test]
    fn union_shifts_and_counts() {
        let g = Graph::disjoint_union(&cycle(5), &cycle(5)).unwrap();
        assert_eq!((g.n(), g.edge_count(), g.component_count()), (10, 10, 2));
        assert_eq!(Graph::disjoint_union(&cycle(4), &Graph::empty(0)).unwrap(), cycle(4));
        let labelled = Graph::edgeless(1, Universe::new(["p"]).unwrap());
        assert_eq!(Graph::disjoint_union(&labelled, &cycle(3)), Err(Error::UniverseMismatch));
    }

    #[test]
    fn loops_rejected() {
        assert!(Graph::from_edges(2, &[(1, 1)]).is_err());
        assert!(Graph::from_edges(2, &[(0, 2)]).is_err());
    }
}
