//! WL-IR: alternate refinement with individualization of every member of
//! the least non-singleton color class.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use rayon::prelude::*;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::color::{Color, Histogram};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::refine::{initial_coloring, wl, Coloring};

#[derive(PartialEq, Eq, Hash)]
struct KeyTerm {
    hist: Histogram,
    children: Box<[CanonicalTreeKey]>,
}

struct KeyNode {
    term: KeyTerm,
    digest: OnceLock<[u8; 32]>,
}

/// Hash-consed `(histogram, multiset of child keys)`; equal iff the trees
/// are equal up to reordering children.
#[derive(Clone)]
pub struct CanonicalTreeKey(Arc<KeyNode>);

impl PartialEq for CanonicalTreeKey {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for CanonicalTreeKey {}

impl Hash for CanonicalTreeKey {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.0) as usize).hash(state)
    }
}

fn keys() -> &'static DashMap<KeyTerm, CanonicalTreeKey> {
    static KEYS: OnceLock<DashMap<KeyTerm, CanonicalTreeKey>> = OnceLock::new();
    KEYS.get_or_init(DashMap::new)
}

impl CanonicalTreeKey {
    fn new(hist: Histogram, children: &[CanonicalTreeKey]) -> Self {
        let mut ch = children.to_vec();
        ch.sort_unstable_by_key(|k| Arc::as_ptr(&k.0) as usize);
        let term = KeyTerm { hist, children: ch.into_boxed_slice() };
        if let Some(k) = keys().get(&term) {
            return k.clone();
        }
        let probe = KeyTerm { hist: term.hist.clone(), children: term.children.clone() };
        keys()
            .entry(probe)
            .or_insert_with(|| CanonicalTreeKey(Arc::new(KeyNode { term, digest: OnceLock::new() })))
            .clone()
    }

    /// SHA-256 over the histogram digest and the sorted child digests.
    pub fn digest(&self) -> [u8; 32] {
        *self.0.digest.get_or_init(|| {
            let mut ds: Vec<[u8; 32]> = self.0.term.children.iter().map(|c| c.digest()).collect();
            ds.sort_unstable();
            let mut h = Sha256::new();
            h.update(b"ego-refine/tree/1");
            h.update(self.0.term.hist.digest());
            h.update((ds.len() as u64).to_le_bytes());
            for d in ds {
                h.update(d);
            }
            h.finalize().into()
        })
    }

    pub fn to_hex(&self) -> String {
        hex::encode(self.digest())
    }
}

impl fmt::Debug for CanonicalTreeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TreeKey({})", &self.to_hex()[..12])
    }
}

/// A node of the WL-IR tree.
#[derive(Clone, Debug)]
pub struct RefinementTree {
    pub coloring: Coloring,
    pub histogram: Histogram,
    /// Sorted by key digest.
    pub children: Vec<RefinementTree>,
    key: CanonicalTreeKey,
}

impl RefinementTree {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn leaves(&self) -> Vec<&RefinementTree> {
        if self.is_leaf() {
            vec![self]
        } else {
            self.children.iter().flat_map(|c| c.leaves()).collect()
        }
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(RefinementTree::node_count).sum::<usize>()
    }

    /// `{key, histogram: [[digest, count], ...], children: [...]}`.
    pub fn to_json(&self) -> Value {
        json!({
            "key": self.key.to_hex(),
            "histogram": self.histogram.entries().iter().map(|(c, k)| json!([c.digest_hex(), k])).collect::<Vec<_>>(),
            "children": self.children.iter().map(RefinementTree::to_json).collect::<Vec<_>>(),
        })
    }
}

/// Least color (canonical order) whose class has at least two members.
pub fn select_target_cell(col: &Coloring) -> Result<Color> {
    let mut counts: HashMap<&Color, usize> = HashMap::new();
    for c in col.colors() {
        *counts.entry(c).or_default() += 1;
    }
    counts.into_iter().filter(|&(_, k)| k >= 2).map(|(c, _)| c.clone()).min().ok_or(Error::Discrete)
}

/// Tags `v` as individualized and every other node as not.
pub fn individualize(g: &Graph, col: &Coloring, v: usize) -> Coloring {
    assert_eq!(col.len(), g.n(), "coloring does not fit the graph");
    Coloring::new(col.colors().iter().enumerate().map(|(u, c)| Color::individualized(c, u == v)).collect())
}

/// The WL-IR tree with individualization budget `d`.
pub fn wlir(g: &Graph, col: &Coloring, d: usize) -> RefinementTree {
    let refined = wl(g, col, g.n());
    let children = if d == 0 || refined.is_discrete() {
        Vec::new()
    } else {
        let target = select_target_cell(&refined).expect("not discrete");
        let cell: Vec<usize> = (0..g.n()).filter(|&v| *refined.get(v) == target).collect();
        let mut ch: Vec<RefinementTree> =
            cell.par_iter().map(|&v| wlir(g, &individualize(g, &refined, v), d - 1)).collect();
        ch.sort_by_cached_key(|t| t.key.digest());
        ch
    };
    let histogram = refined.histogram();
    let child_keys: Vec<CanonicalTreeKey> = children.iter().map(|c| c.key.clone()).collect();
    let key = CanonicalTreeKey::new(histogram.clone(), &child_keys);
    RefinementTree { coloring: refined, histogram, children, key }
}

pub fn canonical_key(t: &RefinementTree) -> CanonicalTreeKey {
    t.key.clone()
}

pub fn wlir_graph_equiv(a: &Graph, b: &Graph, d: usize) -> bool {
    canonical_key(&wlir(a, &initial_coloring(a), d)) == canonical_key(&wlir(b, &initial_coloring(b), d))
}

/// Largest graph [`iso_test`] accepts.
pub const ISO_TEST_GUARD: usize = 64;

/// Full-depth WL-IR comparison, which decides isomorphism.
pub fn iso_test(a: &Graph, b: &Graph) -> Result<bool> {
    let got = a.n().max(b.n());
    if got > ISO_TEST_GUARD {
        return Err(Error::Guard { what: "iso_test input", got, limit: ISO_TEST_GUARD });
    }
    Ok(wlir_graph_equiv(a, b, a.n().min(b.n())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, path, prism, k33};
    use crate::refine::graph_equiv_wl;

    fn sizes(col: &Coloring) -> Vec<usize> {
        let mut s: Vec<usize> = col.histogram().entries().iter().map(|e| e.1).collect();
        s.sort();
        s
    }

    #[test]
    fn target_cell() {
        let k3 = complete(3);
        let init = initial_coloring(&k3);
        assert_eq!(select_target_cell(&init).unwrap(), *init.get(0));
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let c = wl(&star, &initial_coloring(&star), 1);
        assert_eq!(select_target_cell(&c).unwrap(), *c.get(1));
        let p2 = path(2);
        let disc = individualize(&p2, &initial_coloring(&p2), 0);
        assert_eq!(select_target_cell(&disc), Err(Error::Discrete));
    }

    #[test]
    fn individualization() {
        let g = cycle(5);
        let c = individualize(&g, &initial_coloring(&g), 2);
        assert_eq!(sizes(&c), vec![1, 4]);
    }

    #[test]
    fn trees() {
        let t = wlir(&complete(3), &initial_coloring(&complete(3)), 0);
        assert!(t.is_leaf());
        assert_eq!(sizes(&t.coloring), vec![3]);

        let c4 = cycle(4);
        let t = wlir(&c4, &initial_coloring(&c4), 1);
        assert_eq!(t.children.len(), 4);
        for ch in &t.children {
            assert!(ch.is_leaf());
            assert_eq!(sizes(&ch.coloring), vec![1, 1, 2]);
        }

        let p3 = path(3);
        let t = wlir(&p3, &initial_coloring(&p3), 5);
        assert_eq!(t.children.len(), 2);
        assert!(t.children.iter().all(|c| c.is_leaf() && c.coloring.is_discrete()));
    }

    #[test]
    fn equivalence() {
        let c3c3 = Graph::disjoint_union(&cycle(3), &cycle(3)).unwrap();
        assert!(wlir_graph_equiv(&cycle(6), &c3c3, 0));
        assert_eq!(wlir_graph_equiv(&cycle(6), &c3c3, 0), graph_equiv_wl(&cycle(6), &c3c3));
        assert!(!wlir_graph_equiv(&cycle(6), &c3c3, 1));
        assert!(!iso_test(&prism(), &k33()).unwrap());
        assert!(iso_test(&prism(), &prism().permute(&[5, 3, 1, 0, 2, 4])).unwrap());
    }

    #[test]
    fn full_depth_leaves_are_discrete() {
        let g = prism();
        let t = wlir(&g, &initial_coloring(&g), g.n());
        assert!(t.leaves().iter().all(|l| l.coloring.is_discrete()));
    }
}
