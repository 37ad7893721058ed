//! Message-passing networks with Sum aggregation and ReLU feed-forward
//! combination, hierarchical (ego) nesting, and an exact integer mode.

mod compile;
mod json;

use std::fmt::Debug;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use compile::{compile_gml, compile_hgml};
pub use json::NetworkFile;

/// `y = W x + b`, optionally followed by ReLU. `weights` is row-major with
/// `rows` rows and `cols` columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub rows: usize,
    pub cols: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
    pub relu: bool,
}

impl Affine {
    pub fn zeros(rows: usize, cols: usize, relu: bool) -> Self {
        Affine { rows, cols, weights: vec![0.0; rows * cols], bias: vec![0.0; rows], relu }
    }

    /// Selects input coordinates: row `i` copies column `pick[i]`.
    pub fn select(cols: usize, pick: &[usize], relu: bool) -> Self {
        let mut a = Affine::zeros(pick.len(), cols, relu);
        for (i, &c) in pick.iter().enumerate() {
            a.set(i, c, 1.0);
        }
        a
    }

    pub fn set(&mut self, r: usize, c: usize, w: f64) {
        self.weights[r * self.cols + c] = w;
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.weights[r * self.cols + c]
    }

    fn check(&self) -> Result<()> {
        if self.weights.len() != self.rows * self.cols || self.bias.len() != self.rows {
            return Err(Error::Schema(format!(
                "affine layer {}x{} has {} weights and {} biases",
                self.rows,
                self.cols,
                self.weights.len(),
                self.bias.len()
            )));
        }
        Ok(())
    }

    fn apply<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        (0..self.rows)
            .map(|r| {
                let mut acc = T::from_weight(self.bias[r])?;
                for (c, &xc) in x.iter().enumerate() {
                    let w = self.weights[r * self.cols + c];
                    if w != 0.0 {
                        acc = acc.add(T::from_weight(w)?.mul(xc)?)?;
                    }
                }
                Ok(if self.relu { acc.relu() } else { acc })
            })
            .collect()
    }
}

/// A stack of affine layers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Ffnn {
    pub layers: Vec<Affine>,
}

impl Ffnn {
    pub fn new(layers: Vec<Affine>) -> Self {
        Ffnn { layers }
    }

    fn check(&self, input: usize) -> Result<usize> {
        if self.layers.is_empty() {
            return Err(Error::Schema("feed-forward network without layers".into()));
        }
        let mut d = input;
        for a in &self.layers {
            a.check()?;
            if a.cols != d {
                return Err(Error::Dimension { expected: d, got: a.cols });
            }
            d = a.rows;
        }
        Ok(d)
    }

    fn apply<T: Scalar>(&self, x: &[T]) -> Result<Vec<T>> {
        let mut cur = x.to_vec();
        for a in &self.layers {
            cur = a.apply(&cur)?;
        }
        Ok(cur)
    }

    fn shape(&self) -> Vec<bool> {
        self.layers.iter().map(|a| a.relu).collect()
    }
}

/// One round: Sum over neighbors, then `combine(self ⊕ sum)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GnnLayer {
    pub combine: Ffnn,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GnnSpec {
    pub input_dim: usize,
    pub layers: Vec<GnnLayer>,
}

impl GnnSpec {
    /// Checks dimensions and returns the output dimension.
    pub fn validate(&self) -> Result<usize> {
        let mut d = self.input_dim;
        for l in &self.layers {
            d = l.combine.check(2 * d)?;
        }
        Ok(d)
    }

    pub fn output_dim(&self) -> usize {
        self.layers.last().map_or(self.input_dim, |l| l.combine.layers.last().expect("nonempty").rows)
    }

    fn shape(&self) -> Vec<Vec<bool>> {
        self.layers.iter().map(|l| l.combine.shape()).collect()
    }
}

/// A flat network, or a nested one whose inner part runs on every node's
/// marked (ego) graph. `radius: None` means the whole graph.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HeGnnSpec {
    Leaf(GnnSpec),
    Node { inner: Box<HeGnnSpec>, outer: GnnSpec, radius: Option<usize> },
}

impl HeGnnSpec {
    pub fn input_dim(&self) -> usize {
        match self {
            HeGnnSpec::Leaf(g) => g.input_dim,
            HeGnnSpec::Node { inner, .. } => inner.input_dim() - 1,
        }
    }

    pub fn output_dim(&self) -> usize {
        match self {
            HeGnnSpec::Leaf(g) => g.output_dim(),
            HeGnnSpec::Node { outer, .. } => outer.output_dim(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            HeGnnSpec::Leaf(_) => 0,
            HeGnnSpec::Node { inner, .. } => 1 + inner.depth(),
        }
    }

    /// Checks the dimension chain and returns the output dimension.
    pub fn validate(&self) -> Result<usize> {
        match self {
            HeGnnSpec::Leaf(g) => g.validate(),
            HeGnnSpec::Node { inner, outer, radius } => {
                if *radius == Some(0) {
                    return Err(Error::Schema("radius must be positive".into()));
                }
                if inner.input_dim() == 0 && matches!(**inner, HeGnnSpec::Leaf(_)) {
                    return Err(Error::Schema("inner input must include the mark channel".into()));
                }
                let inner_out = inner.validate()?;
                let expected = inner.input_dim() - 1 + inner_out;
                if outer.input_dim != expected {
                    return Err(Error::Dimension { expected, got: outer.input_dim });
                }
                outer.validate()
            }
        }
    }
}

/// Arithmetic used by the executor.
pub trait Scalar: Copy + PartialEq + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_weight(w: f64) -> Result<Self>;
    fn add(self, o: Self) -> Result<Self>;
    fn mul(self, o: Self) -> Result<Self>;
    fn relu(self) -> Self;
    fn to_f64(self) -> f64;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_weight(w: f64) -> Result<Self> {
        Ok(w)
    }
    fn add(self, o: Self) -> Result<Self> {
        Ok(self + o)
    }
    fn mul(self, o: Self) -> Result<Self> {
        Ok(self * o)
    }
    fn relu(self) -> Self {
        self.max(0.0)
    }
    fn to_f64(self) -> f64 {
        self
    }
}

/// Exact mode: every weight must be an integer and overflow is an error.
impl Scalar for i64 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_weight(w: f64) -> Result<Self> {
        if w.fract() != 0.0 || w.abs() > 9.0e15 {
            return Err(Error::NonIntegral(w.to_string()));
        }
        Ok(w as i64)
    }
    fn add(self, o: Self) -> Result<Self> {
        self.checked_add(o).ok_or(Error::Overflow)
    }
    fn mul(self, o: Self) -> Result<Self> {
        self.checked_mul(o).ok_or(Error::Overflow)
    }
    fn relu(self) -> Self {
        self.max(0)
    }
    fn to_f64(self) -> f64 {
        self as f64
    }
}

/// One vector per node, all of dimension `dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding<T = f64> {
    pub dim: usize,
    pub rows: Vec<Vec<T>>,
}

impl<T: Scalar> Embedding<T> {
    pub fn new(dim: usize, rows: Vec<Vec<T>>) -> Result<Self> {
        for r in &rows {
            if r.len() != dim {
                return Err(Error::Dimension { expected: dim, got: r.len() });
            }
        }
        Ok(Embedding { dim, rows })
    }

    pub fn row(&self, v: usize) -> &[T] {
        &self.rows[v]
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(T) -> U) -> Embedding<U> {
        Embedding { dim: self.dim, rows: self.rows.iter().map(|r| r.iter().map(|&x| f(x)).collect()).collect() }
    }
}

/// Multi-hot encoding over the graph's own universe.
pub fn multihot(g: &Graph) -> Embedding<f64> {
    let d = g.universe().len();
    let rows = (0..g.n())
        .map(|v| {
            let mut r = vec![0.0; d];
            for &p in g.labels(v) {
                r[p as usize] = 1.0;
            }
            r
        })
        .collect();
    Embedding { dim: d, rows }
}

/// Multi-hot encoding over an explicit proposition list; names missing from
/// the graph's universe are false everywhere.
pub fn multihot_over<S: AsRef<str>>(g: &Graph, names: &[S]) -> Embedding<f64> {
    let rows = (0..g.n())
        .map(|v| names.iter().map(|p| if g.has_label_named(v, p.as_ref()) { 1.0 } else { 0.0 }).collect())
        .collect();
    Embedding { dim: names.len(), rows }
}

fn check_emb<T: Scalar>(g: &Graph, emb: &Embedding<T>, dim: usize) -> Result<()> {
    if emb.dim != dim {
        return Err(Error::Dimension { expected: dim, got: emb.dim });
    }
    if emb.rows.len() != g.n() {
        return Err(Error::Dimension { expected: g.n(), got: emb.rows.len() });
    }
    Ok(())
}

/// Runs every layer: aggregate by Sum over neighbors, then combine.
pub fn run_gnn<T: Scalar>(spec: &GnnSpec, g: &Graph, emb: &Embedding<T>) -> Result<Embedding<T>> {
    check_emb(g, emb, spec.input_dim)?;
    let mut cur = emb.rows.clone();
    let mut dim = spec.input_dim;
    for layer in &spec.layers {
        let next: Vec<Vec<T>> = (0..g.n())
            .map(|v| {
                let mut input = cur[v].clone();
                let mut sum = vec![T::zero(); dim];
                for &w in g.neighbors(v) {
                    for (s, &x) in sum.iter_mut().zip(&cur[w]) {
                        *s = s.add(x)?;
                    }
                }
                input.extend(sum);
                layer.combine.apply(&input)
            })
            .collect::<Result<_>>()?;
        dim = layer.combine.layers.last().expect("nonempty").rows;
        cur = next;
    }
    Ok(Embedding { dim, rows: cur })
}

/// Runs a nested network: every node `v` gets `emb(v) ⊕ inner(v)` where the
/// inner network runs on the graph (or the radius ball around `v`) with an
/// extra channel marking `v`; then the outer network runs on the result.
pub fn run_hegnn<T: Scalar>(spec: &HeGnnSpec, g: &Graph, emb: &Embedding<T>) -> Result<Embedding<T>> {
    match spec {
        HeGnnSpec::Leaf(gnn) => run_gnn(gnn, g, emb),
        HeGnnSpec::Node { inner, outer, radius } => {
            check_emb(g, emb, spec.input_dim())?;
            let rows: Vec<Vec<T>> = (0..g.n())
                .into_par_iter()
                .map(|v| {
                    let (sub, keep, pv) = match radius {
                        None => (None, None, v),
                        Some(r) => {
                            let (s, m) = g.ego_subgraph(v, *r);
                            let pv = m.get(v).expect("center survives");
                            (Some(s), Some(m.kept().to_vec()), pv)
                        }
                    };
                    let h = sub.as_ref().unwrap_or(g);
                    let marked: Vec<Vec<T>> = (0..h.n())
                        .map(|u| {
                            let orig = keep.as_ref().map_or(u, |k| k[u]);
                            let mut r = emb.rows[orig].clone();
                            r.push(if u == pv { T::one() } else { T::zero() });
                            r
                        })
                        .collect();
                    let out = run_hegnn(inner, h, &Embedding { dim: emb.dim + 1, rows: marked })?;
                    let mut r = emb.rows[v].clone();
                    r.extend_from_slice(out.row(pv));
                    Ok(r)
                })
                .collect::<Result<_>>()?;
            let dim = emb.dim + inner.output_dim();
            run_gnn(outer, g, &Embedding { dim, rows })
        }
    }
}

/// Runs in exact integer arithmetic; the input must be integral.
pub fn run_hegnn_exact(spec: &HeGnnSpec, g: &Graph, emb: &Embedding<f64>) -> Result<Embedding<i64>> {
    let rows = emb
        .rows
        .iter()
        .map(|r| r.iter().map(|&x| i64::from_weight(x)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    run_hegnn(spec, g, &Embedding { dim: emb.dim, rows })
}

/// 1 iff the scalar output at `v` exceeds 0.5.
pub fn classify(spec: &HeGnnSpec, g: &Graph, emb: &Embedding<f64>, v: usize) -> Result<u8> {
    Ok(classify_all(spec, g, emb)?[v])
}

/// [`classify`] at every node.
pub fn classify_all(spec: &HeGnnSpec, g: &Graph, emb: &Embedding<f64>) -> Result<Vec<u8>> {
    if spec.output_dim() != 1 {
        return Err(Error::Dimension { expected: 1, got: spec.output_dim() });
    }
    let out = run_hegnn(spec, g, emb)?;
    Ok(out.rows.iter().map(|r| (r[0] > 0.5) as u8).collect())
}

/// Output is the concatenation of the members' outputs. Flat members need
/// the same input dimension and the same layer shape (layer count, affine
/// layers per combine, ReLU flags).
pub fn concat(specs: &[GnnSpec]) -> Result<GnnSpec> {
    let first = specs.first().ok_or_else(|| Error::Schema("nothing to concatenate".into()))?;
    for s in specs {
        s.validate()?;
        if s.input_dim != first.input_dim {
            return Err(Error::Dimension { expected: first.input_dim, got: s.input_dim });
        }
        if s.shape() != first.shape() {
            return Err(Error::Schema("members have different layer shapes".into()));
        }
    }
    let d = first.input_dim;
    let mut in_dims: Vec<usize> = vec![d; specs.len()];
    let mut layers = Vec::new();
    for (li, shape) in first.shape().iter().enumerate() {
        let mut subs = Vec::new();
        for (si, &relu) in shape.iter().enumerate() {
            let parts: Vec<&Affine> = specs.iter().map(|s| &s.layers[li].combine.layers[si]).collect();
            let rows: usize = parts.iter().map(|a| a.rows).sum();
            let cols = if si > 0 {
                parts.iter().map(|a| a.cols).sum()
            } else if li == 0 {
                2 * d
            } else {
                2 * in_dims.iter().sum::<usize>()
            };
            let mut out = Affine::zeros(rows, cols, relu);
            let total_in: usize = in_dims.iter().sum();
            let (mut r0, mut c0, mut off) = (0, 0, 0);
            for (j, a) in parts.iter().enumerate() {
                for r in 0..a.rows {
                    out.bias[r0 + r] = a.bias[r];
                    for c in 0..a.cols {
                        let col = if si > 0 {
                            c0 + c
                        } else if li == 0 {
                            c
                        } else if c < in_dims[j] {
                            off + c
                        } else {
                            total_in + off + c - in_dims[j]
                        };
                        out.set(r0 + r, col, a.get(r, c));
                    }
                }
                r0 += a.rows;
                c0 += a.cols;
                off += in_dims[j];
            }
            subs.push(out);
        }
        layers.push(GnnLayer { combine: Ffnn::new(subs) });
        for (j, s) in specs.iter().enumerate() {
            in_dims[j] = s.layers[li].combine.layers.last().unwrap().rows;
        }
    }
    Ok(GnnSpec { input_dim: d, layers })
}

/// Hierarchical [`concat`]: members need the same depth and radius at every
/// level, and shape-compatible networks.
pub fn concat_he(specs: &[HeGnnSpec]) -> Result<HeGnnSpec> {
    let first = specs.first().ok_or_else(|| Error::Schema("nothing to concatenate".into()))?;
    match first {
        HeGnnSpec::Leaf(_) => {
            let flat = specs
                .iter()
                .map(|s| match s {
                    HeGnnSpec::Leaf(g) => Ok(g.clone()),
                    _ => Err(Error::Schema("members have different depths".into())),
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(HeGnnSpec::Leaf(concat(&flat)?))
        }
        HeGnnSpec::Node { radius, .. } => {
            let mut inners = Vec::new();
            let mut outers = Vec::new();
            for s in specs {
                match s {
                    HeGnnSpec::Node { inner, outer, radius: r } if r == radius => {
                        inners.push((**inner).clone());
                        outers.push(outer);
                    }
                    HeGnnSpec::Node { .. } => return Err(Error::Schema("members have different radii".into())),
                    HeGnnSpec::Leaf(_) => return Err(Error::Schema("members have different depths".into())),
                }
            }
            let d = first.input_dim();
            let inner_dims: Vec<usize> = inners.iter().map(HeGnnSpec::output_dim).collect();
            let inner = concat_he(&inners)?;
            // Member j's outer reads emb ⊕ inner_j; widen each to read
            // emb ⊕ inner_1 ⊕ ... ⊕ inner_m before concatenating.
            let total = d + inner_dims.iter().sum::<usize>();
            let mut widened = Vec::new();
            let mut off = d;
            for (j, o) in outers.iter().enumerate() {
                let map: Vec<usize> = (0..d).chain(off..off + inner_dims[j]).collect();
                off += inner_dims[j];
                widened.push(widen(o, total, &map)?);
            }
            Ok(HeGnnSpec::Node { inner: Box::new(inner), outer: concat(&widened)?, radius: *radius })
        }
    }
}

/// Same network reading its input coordinate `i` from coordinate `map[i]`
/// of a wider input.
fn widen(spec: &GnnSpec, new_dim: usize, map: &[usize]) -> Result<GnnSpec> {
    if map.len() != spec.input_dim {
        return Err(Error::Dimension { expected: spec.input_dim, got: map.len() });
    }
    let mut out = spec.clone();
    out.input_dim = new_dim;
    if let Some(first) = out.layers.first_mut() {
        let a = &spec.layers[0].combine.layers[0];
        let mut w = Affine::zeros(a.rows, 2 * new_dim, a.relu);
        w.bias = a.bias.clone();
        let d = spec.input_dim;
        for r in 0..a.rows {
            for c in 0..a.cols {
                let col = if c < d { map[c] } else { new_dim + map[c - d] };
                w.set(r, col, a.get(r, c));
            }
        }
        first.combine.layers[0] = w;
    } else {
        return Err(Error::Schema("cannot widen a network without layers".into()));
    }
    Ok(out)
}

/// Depth-1 network on a constant 1-dim input. The inner part runs `rounds`
/// layers of `x + Σ neighbors` on (constant, mark), so its mark channel at
/// the center is the number of closed walks of length at most `rounds`
/// weighted by binomials: the diagonal of `(I + A)^rounds`. The outer part
/// has no layers.
pub fn walk_count_network(rounds: usize, radius: Option<usize>) -> HeGnnSpec {
    let mut a = Affine::zeros(2, 4, false);
    for i in 0..2 {
        a.set(i, i, 1.0);
        a.set(i, 2 + i, 1.0);
    }
    let layer = GnnLayer { combine: Ffnn::new(vec![a]) };
    let b = GnnSpec { input_dim: 2, layers: vec![layer; rounds] };
    HeGnnSpec::Node { inner: Box::new(HeGnnSpec::Leaf(b)), outer: GnnSpec { input_dim: 3, layers: vec![] }, radius }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle, k33, path, prism};

    fn sum_only(d: usize) -> GnnSpec {
        let mut a = Affine::zeros(d, 2 * d, false);
        for i in 0..d {
            a.set(i, d + i, 1.0);
        }
        GnnSpec { input_dim: d, layers: vec![GnnLayer { combine: Ffnn::new(vec![a]) }] }
    }

    fn ones(n: usize) -> Embedding<f64> {
        Embedding { dim: 1, rows: vec![vec![1.0]; n] }
    }

    #[test]
    fn neighbor_sum() {
        let out = run_gnn(&sum_only(1), &cycle(3), &ones(3)).unwrap();
        assert!(out.rows.iter().all(|r| r == &vec![2.0]));
        let out = run_gnn(&sum_only(1), &Graph::empty(1), &ones(1)).unwrap();
        assert_eq!(out.rows, vec![vec![0.0]]);
        assert!(run_gnn(&sum_only(2), &cycle(3), &ones(3)).is_err());
    }

    #[test]
    fn multihot_encoding() {
        let mut g = Graph::edgeless(2, crate::graph::Universe::new(["p1", "p2"]).unwrap());
        g.add_label(1, "p1").unwrap();
        assert_eq!(multihot(&g).rows, vec![vec![0.0, 0.0], vec![1.0, 0.0]]);
        assert_eq!(multihot_over(&g, &["p2", "p1", "zz"]).rows[1], vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn example_network_counts_closed_walks() {
        // (I + A)^3 at the diagonal: 1 + 3·deg + (closed 3-walks) = 1 + 9 + 2·triangles.
        let spec = walk_count_network(3, None);
        assert_eq!(spec.validate().unwrap(), 3);
        let p = run_hegnn_exact(&spec, &prism(), &ones(6)).unwrap();
        let k = run_hegnn_exact(&spec, &k33(), &ones(6)).unwrap();
        assert_eq!(p.row(0), &[1, 64, 12]);
        assert_eq!(k.row(0), &[1, 64, 10]);
    }

    #[test]
    fn radius_one_matches_ego_paths() {
        let spec = walk_count_network(3, Some(1));
        let on_cycle = run_hegnn_exact(&spec, &cycle(10), &ones(10)).unwrap();
        let unbounded = run_hegnn_exact(&walk_count_network(3, None), &path(3), &ones(3)).unwrap();
        assert_eq!(on_cycle.row(4)[1..], unbounded.row(1)[1..]);
    }

    #[test]
    fn concat_of_constants() {
        let constant = |c: f64| {
            let mut a = Affine::zeros(1, 2, true);
            a.bias[0] = c;
            GnnSpec { input_dim: 1, layers: vec![GnnLayer { combine: Ffnn::new(vec![a]) }] }
        };
        let both = concat(&[constant(2.0), constant(5.0)]).unwrap();
        let out = run_gnn(&both, &cycle(4), &ones(4)).unwrap();
        assert!(out.rows.iter().all(|r| r == &vec![2.0, 5.0]));
        let single = concat(&[sum_only(1)]).unwrap();
        assert_eq!(run_gnn(&single, &path(4), &ones(4)).unwrap(), run_gnn(&sum_only(1), &path(4), &ones(4)).unwrap());
        assert!(concat(&[constant(1.0), sum_only(1)]).is_err());
    }

    #[test]
    fn exact_mode_rejects_fractions() {
        let mut a = Affine::zeros(1, 2, false);
        a.set(0, 0, 0.5);
        let spec = HeGnnSpec::Leaf(GnnSpec { input_dim: 1, layers: vec![GnnLayer { combine: Ffnn::new(vec![a]) }] });
        assert!(matches!(run_hegnn_exact(&spec, &cycle(3), &ones(3)), Err(Error::NonIntegral(_))));
    }
}
