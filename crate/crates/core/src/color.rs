//! Canonical refinement colors.
//!
//! A color is its construction history: an initial label set, then
//! `(previous color, multiset of neighbor colors)` pairs, individualization
//! tags and nested hierarchical signatures. Histories are hash-consed, so
//! structurally equal histories share one allocation and equality is a
//! pointer comparison. Nothing about the allocation leaks: ordering and
//! digests are computed from structure alone.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, OnceLock};

use dashmap::DashMap;
use sha2::{Digest, Sha256};

#[derive(Clone, PartialEq, Eq, Hash)]
enum Term {
    /// Sorted proposition names.
    Labels(Box<[Arc<str>]>),
    /// Previous color and neighbor multiset (stored in allocation order;
    /// canonical order is derived lazily).
    Refined(Color, Box<[Color]>),
    Individualized(Color, bool),
    Nested(Color, Color),
}

impl Term {
    fn rank(&self) -> u8 {
        match self {
            Term::Labels(_) => 0,
            Term::Refined(..) => 1,
            Term::Individualized(..) => 2,
            Term::Nested(..) => 3,
        }
    }

    fn children(&self) -> Vec<&Color> {
        match self {
            Term::Labels(_) => Vec::new(),
            Term::Refined(p, ns) => std::iter::once(p).chain(ns.iter()).collect(),
            Term::Individualized(p, _) => vec![p],
            Term::Nested(a, b) => vec![a, b],
        }
    }
}

struct Node {
    term: Term,
    /// Neighbor multiset in canonical order; set once every color reachable
    /// from this one is ready as well.
    canon: OnceLock<Box<[Color]>>,
    digest: OnceLock<[u8; 32]>,
}

/// An interned, canonically ordered refinement color.
#[derive(Clone)]
pub struct Color(Arc<Node>);

impl PartialEq for Color {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }
}

impl Eq for Color {}

impl Hash for Color {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (Arc::as_ptr(&self.0) as usize).hash(state)
    }
}

fn table() -> &'static DashMap<Term, Color> {
    static TABLE: OnceLock<DashMap<Term, Color>> = OnceLock::new();
    TABLE.get_or_init(DashMap::new)
}

fn intern(term: Term) -> Color {
    if let Some(c) = table().get(&term) {
        return c.clone();
    }
    table()
        .entry(term.clone())
        .or_insert_with(|| Color(Arc::new(Node { term, canon: OnceLock::new(), digest: OnceLock::new() })))
        .clone()
}

/// Number of distinct colors interned so far in this process.
pub fn interned_count() -> usize {
    table().len()
}

impl Color {
    /// Initial color of a node with the given proposition names.
    pub fn labels<I, S>(names: I) -> Color
    where
        I: IntoIterator<Item = S>,
        S: Into<Arc<str>>,
    {
        let mut v: Vec<Arc<str>> = names.into_iter().map(Into::into).collect();
        v.sort();
        v.dedup();
        intern(Term::Labels(v.into_boxed_slice()))
    }

    /// One refinement step: own color plus the multiset of neighbor colors.
    pub fn refined(prev: &Color, mut neighbors: Vec<Color>) -> Color {
        neighbors.sort_unstable_by_key(|c| Arc::as_ptr(&c.0) as usize);
        intern(Term::Refined(prev.clone(), neighbors.into_boxed_slice()))
    }

    /// `prev` tagged as individualized (`marked`) or not.
    pub fn individualized(prev: &Color, marked: bool) -> Color {
        intern(Term::Individualized(prev.clone(), marked))
    }

    /// Pairs a base color with a signature from a nested run.
    pub fn nested(base: &Color, inner: &Color) -> Color {
        intern(Term::Nested(base.clone(), inner.clone()))
    }

    fn term(&self) -> &Term {
        &self.0.term
    }

    /// Makes sure every color reachable from `self` has its canonical
    /// neighbor order computed. Iterative, so deep histories are fine.
    fn ensure_canon(&self) {
        if self.0.canon.get().is_some() {
            return;
        }
        let mut stack: Vec<(Color, bool)> = vec![(self.clone(), false)];
        while let Some((c, expanded)) = stack.pop() {
            if c.0.canon.get().is_some() {
                continue;
            }
            if expanded {
                let list: Box<[Color]> = match c.term() {
                    Term::Refined(_, ns) => {
                        let mut v = ns.to_vec();
                        v.sort_by(cmp_ready);
                        v.into_boxed_slice()
                    }
                    _ => Box::new([]),
                };
                let _ = c.0.canon.set(list);
            } else {
                stack.push((c.clone(), true));
                for ch in c.term().children() {
                    if ch.0.canon.get().is_none() {
                        stack.push((ch.clone(), false));
                    }
                }
            }
        }
    }

    fn canon(&self) -> &[Color] {
        self.0.canon.get().expect("canonical order computed")
    }

    /// SHA-256 digest of the history. Structural, hence identical across
    /// runs, threads and graphs.
    pub fn digest(&self) -> [u8; 32] {
        if let Some(d) = self.0.digest.get() {
            return *d;
        }
        let mut stack: Vec<(Color, bool)> = vec![(self.clone(), false)];
        while let Some((c, expanded)) = stack.pop() {
            if c.0.digest.get().is_some() {
                continue;
            }
            if expanded {
                let d = digest_term(c.term());
                let _ = c.0.digest.set(d);
            } else {
                stack.push((c.clone(), true));
                for ch in c.term().children() {
                    if ch.0.digest.get().is_none() {
                        stack.push((ch.clone(), false));
                    }
                }
            }
        }
        *self.0.digest.get().unwrap()
    }

    pub fn digest_hex(&self) -> String {
        hex::encode(self.digest())
    }

    /// The full textual key. Its length grows quickly with the number of
    /// refinement steps; meant for small examples and debugging.
    pub fn full_key(&self) -> String {
        self.ensure_canon();
        let mut s = String::new();
        write_key(self, &mut s);
        s
    }
}

fn digest_term(t: &Term) -> [u8; 32] {
    let d = |c: &Color| *c.0.digest.get().expect("children digested first");
    let mut h = Sha256::new();
    h.update(b"ego-refine/color/1");
    h.update([t.rank()]);
    match t {
        Term::Labels(names) => {
            h.update((names.len() as u64).to_le_bytes());
            for n in names.iter() {
                h.update((n.len() as u64).to_le_bytes());
                h.update(n.as_bytes());
            }
        }
        Term::Refined(p, ns) => {
            h.update(d(p));
            let mut ds: Vec<[u8; 32]> = ns.iter().map(d).collect();
            ds.sort_unstable();
            h.update((ds.len() as u64).to_le_bytes());
            for x in ds {
                h.update(x);
            }
        }
        Term::Individualized(p, m) => {
            h.update(d(p));
            h.update([*m as u8]);
        }
        Term::Nested(a, b) => {
            h.update(d(a));
            h.update(d(b));
        }
    }
    h.finalize().into()
}

fn write_key(c: &Color, s: &mut String) {
    match c.term() {
        Term::Labels(names) => {
            s.push('{');
            for (i, n) in names.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                s.push_str(n);
            }
            s.push('}');
        }
        Term::Refined(p, _) => {
            s.push('(');
            write_key(p, s);
            s.push_str(";[");
            for (i, n) in c.canon().iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                write_key(n, s);
            }
            s.push_str("])");
        }
        Term::Individualized(p, m) => {
            s.push('(');
            write_key(p, s);
            s.push_str(if *m { ";*)" } else { ";.)" });
        }
        Term::Nested(a, b) => {
            s.push('<');
            write_key(a, s);
            s.push('|');
            write_key(b, s);
            s.push('>');
        }
    }
}

/// Structural lexicographic comparison; both sides must be canon-ready.
/// Only one pair of subterms is ever descended into, so this is a loop.
fn cmp_ready(a: &Color, b: &Color) -> Ordering {
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        if a == b {
            return Ordering::Equal;
        }
        let (ta, tb) = (a.term(), b.term());
        if ta.rank() != tb.rank() {
            return ta.rank().cmp(&tb.rank());
        }
        let next = match (ta, tb) {
            (Term::Labels(x), Term::Labels(y)) => return x.cmp(y),
            (Term::Refined(pa, _), Term::Refined(pb, _)) => {
                if pa != pb {
                    (pa.clone(), pb.clone())
                } else {
                    let (la, lb) = (a.canon(), b.canon());
                    match la.iter().zip(lb).find(|(x, y)| x != y) {
                        Some((x, y)) => (x.clone(), y.clone()),
                        None => return la.len().cmp(&lb.len()),
                    }
                }
            }
            (Term::Individualized(pa, ma), Term::Individualized(pb, mb)) => {
                if pa != pb {
                    (pa.clone(), pb.clone())
                } else {
                    return ma.cmp(mb);
                }
            }
            (Term::Nested(xa, ya), Term::Nested(xb, yb)) => {
                if xa != xb {
                    (xa.clone(), xb.clone())
                } else {
                    (ya.clone(), yb.clone())
                }
            }
            _ => unreachable!("ranks are equal"),
        };
        a = next.0;
        b = next.1;
    }
}

impl Ord for Color {
    fn cmp(&self, other: &Self) -> Ordering {
        self.ensure_canon();
        other.ensure_canon();
        cmp_ready(self, other)
    }
}

impl PartialOrd for Color {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Color({})", &self.digest_hex()[..12])
    }
}

/// Multiset of colors, sorted canonically.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Histogram(Vec<(Color, usize)>);

impl Histogram {
    pub fn of<'a>(colors: impl IntoIterator<Item = &'a Color>) -> Histogram {
        let mut counts: HashMap<Color, usize> = HashMap::new();
        for c in colors {
            *counts.entry(c.clone()).or_default() += 1;
        }
        let mut v: Vec<(Color, usize)> = counts.into_iter().collect();
        v.sort_by(|x, y| x.0.cmp(&y.0));
        Histogram(v)
    }

    pub fn entries(&self) -> &[(Color, usize)] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|e| e.1).sum()
    }

    /// Digest of the multiset.
    pub fn digest(&self) -> [u8; 32] {
        let mut ds: Vec<([u8; 32], usize)> = self.0.iter().map(|(c, k)| (c.digest(), *k)).collect();
        ds.sort_unstable();
        let mut h = Sha256::new();
        h.update(b"ego-refine/histogram/1");
        for (d, k) in ds {
            h.update(d);
            h.update((k as u64).to_le_bytes());
        }
        h.finalize().into()
    }

    pub fn digest_hex(&self) -> String {
        hex::encode(self.digest())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_consing() {
        let a = Color::labels(["p", "q"]);
        let b = Color::labels(["q", "p", "q"]);
        assert_eq!(a, b);
        let e = Color::labels(Vec::<String>::new());
        let r1 = Color::refined(&e, vec![a.clone(), e.clone()]);
        let r2 = Color::refined(&e, vec![e.clone(), b.clone()]);
        assert_eq!(r1, r2);
        assert_ne!(r1, Color::refined(&e, vec![a.clone()]));
    }

    #[test]
    fn order_is_structural() {
        let e = Color::labels(Vec::<String>::new());
        let p = Color::labels(["p"]);
        assert!(e < p);
        assert!(p < Color::refined(&e, vec![]));
        let x = Color::refined(&e, vec![e.clone(), p.clone()]);
        let y = Color::refined(&e, vec![p.clone(), p.clone()]);
        let z = Color::refined(&e, vec![e.clone()]);
        assert!(z < x && x < y);
        assert_eq!(x.full_key(), "({};[{},{p}])");
        assert!(Color::individualized(&x, false) < Color::individualized(&x, true));
    }

    #[test]
    fn deep_histories_do_not_recurse() {
        let mut c = Color::labels(["deep"]);
        let mut d = Color::labels(["deeper"]);
        for _ in 0..50_000 {
            c = Color::refined(&c, vec![c.clone()]);
            d = Color::refined(&d, vec![d.clone()]);
        }
        assert!(c < d);
        assert_ne!(c.digest(), d.digest());
    }

    #[test]
    fn digests_are_structural() {
        let e = Color::labels(Vec::<String>::new());
        let x = Color::refined(&e, vec![Color::labels(["a"]), Color::labels(["b"])]);
        assert_eq!(
            x.digest_hex(),
            Color::refined(&e, vec![Color::labels(["b"]), Color::labels(["a"])]).digest_hex()
        );
        assert_ne!(x.digest(), e.digest());
    }
}
