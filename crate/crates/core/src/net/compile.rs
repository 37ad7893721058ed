//! Formula to network compilers.
//!
//! Every compiled network keeps one coordinate per subformula of the
//! (desugared) input. Layer 1 reads the atoms; each later layer recomputes
//! every coordinate from the previous one, so after `i` layers all
//! subformulas of operator depth below `i` are exact. The last layer ends
//! with a projection onto the root coordinate.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::logic::{canonicalize, desugar, Formula};
use crate::net::{concat_he, Affine, Ffnn, GnnLayer, GnnSpec, HeGnnSpec};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Key {
    Prop(String),
    Var(String),
}

type Channels = HashMap<Key, usize>;

fn closure(f: &Formula, out: &mut Vec<Formula>, index: &mut HashMap<Formula, usize>) -> usize {
    if let Some(&i) = index.get(f) {
        return i;
    }
    for c in f.children() {
        closure(c, out, index);
    }
    out.push(f.clone());
    index.insert(f.clone(), out.len() - 1);
    out.len() - 1
}

/// `f` must be desugared and binder-free; variables are read from channels.
fn gml_spec(f: &Formula, channels: &Channels, dim: usize, layers: usize) -> GnnSpec {
    let mut subs = Vec::new();
    let mut index = HashMap::new();
    let root = closure(f, &mut subs, &mut index);
    let k = subs.len();
    let id: Vec<usize> = (0..k).collect();

    let mut first = Affine::zeros(k, 2 * dim, true);
    for (i, s) in subs.iter().enumerate() {
        let key = match s {
            Formula::Top => {
                first.bias[i] = 1.0;
                None
            }
            Formula::Prop(p) => Some(Key::Prop(p.clone())),
            Formula::Var(x) => Some(Key::Var(x.clone())),
            _ => None,
        };
        // Unknown atoms stay 0.
        if let Some(&c) = key.and_then(|k| channels.get(&k)) {
            first.set(i, c, 1.0);
        }
    }
    let mut out = vec![GnnLayer { combine: Ffnn::new(vec![first, Affine::select(k, &id, true)]) }];

    for _ in 1..layers {
        let mut h = Affine::zeros(k, 2 * k, true);
        let mut z = Affine::zeros(k, k, true);
        for (i, s) in subs.iter().enumerate() {
            z.set(i, i, 1.0);
            match s {
                Formula::Not(a) => {
                    h.bias[i] = 1.0;
                    h.set(i, index[&**a], -1.0);
                }
                Formula::And(a, b) => {
                    h.bias[i] = -1.0;
                    let (a, b) = (index[&**a], index[&**b]);
                    h.set(i, a, 1.0);
                    h.set(i, b, h.get(i, b) + 1.0);
                }
                Formula::Dia(n, a) => {
                    h.bias[i] = *n as f64;
                    h.set(i, k + index[&**a], -1.0);
                    z.bias[i] = 1.0;
                    z.set(i, i, -1.0);
                }
                _ => h.set(i, i, 1.0),
            }
        }
        out.push(GnnLayer { combine: Ffnn::new(vec![h, z]) });
    }
    out.last_mut().unwrap().combine.layers.push(Affine::select(k, &[root], true));
    GnnSpec { input_dim: dim, layers: out }
}

fn prop_channels<S: AsRef<str>>(props: &[S]) -> Channels {
    let mut ch = Channels::new();
    for (i, p) in props.iter().enumerate() {
        ch.entry(Key::Prop(p.as_ref().to_string())).or_insert(i);
    }
    ch
}

/// Compiles a graded modal sentence into a flat network with one output.
/// Input coordinate `i` is proposition `props[i]`; the network has
/// operator depth plus one layers.
pub fn compile_gml<S: AsRef<str>>(phi: &Formula, props: &[S]) -> Result<GnnSpec> {
    if !phi.is_gml() {
        return Err(Error::Fragment("expected a formula without variables or binders".into()));
    }
    let f = desugar(phi);
    Ok(gml_spec(&f, &prop_channels(props), props.len(), f.operator_depth() + 1))
}

/// Replaces every outermost `↓x.ψ` by the atom `q j` (a name the parser
/// cannot produce) and collects the distinct `(x, ψ)`.
fn cut_binders(f: &Formula, found: &mut Vec<(String, Formula)>) -> Formula {
    match f {
        Formula::Down(x, body) => {
            let entry = (x.clone(), (**body).clone());
            let j = found.iter().position(|e| *e == entry).unwrap_or_else(|| {
                found.push(entry);
                found.len() - 1
            });
            Formula::var(format!("q {j}"))
        }
        Formula::Not(a) => Formula::not(cut_binders(a, found)),
        Formula::And(a, b) => Formula::and(cut_binders(a, found), cut_binders(b, found)),
        Formula::Dia(k, a) => Formula::Dia(*k, Box::new(cut_binders(a, found))),
        _ => f.clone(),
    }
}

fn bodies(f: &Formula) -> (Formula, Vec<(String, Formula)>) {
    let mut found = Vec::new();
    let star = cut_binders(f, &mut found);
    if found.is_empty() {
        found.push((String::new(), Formula::not(Formula::Top)));
    }
    (star, found)
}

fn plan(f: &Formula, level: usize, remaining: usize, layers: &mut Vec<usize>) {
    let (star, found) = bodies(f);
    layers[level] = layers[level].max(star.operator_depth() + 1);
    if remaining > 0 {
        for (_, body) in &found {
            plan(body, level + 1, remaining - 1, layers);
        }
    }
}

struct Level<'a> {
    layers: &'a [usize],
    radius: Option<usize>,
}

impl Level<'_> {
    fn compile(&self, f: &Formula, level: usize, remaining: usize, channels: &Channels, dim: usize) -> Result<HeGnnSpec> {
        let (star, found) = bodies(f);
        if remaining == 0 {
            return Ok(HeGnnSpec::Leaf(gml_spec(&star, channels, dim, self.layers[level])));
        }
        let inners = found
            .iter()
            .map(|(x, body)| {
                let mut ch = channels.clone();
                ch.insert(Key::Var(x.clone()), dim);
                self.compile(body, level + 1, remaining - 1, &ch, dim + 1)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut ch = channels.clone();
        for j in 0..found.len() {
            ch.insert(Key::Var(format!("q {j}")), dim + j);
        }
        let outer = gml_spec(&star, &ch, dim + found.len(), self.layers[level]);
        Ok(HeGnnSpec::Node { inner: Box::new(concat_he(&inners)?), outer, radius: self.radius })
    }
}

fn strip_within(f: &Formula) -> Formula {
    match f {
        Formula::Down(x, a) => match &**a {
            Formula::Within(_, b) => Formula::down(x.clone(), strip_within(b)),
            _ => Formula::down(x.clone(), strip_within(a)),
        },
        Formula::Not(a) => Formula::not(strip_within(a)),
        Formula::And(a, b) => Formula::and(strip_within(a), strip_within(b)),
        Formula::Or(a, b) => Formula::or(strip_within(a), strip_within(b)),
        Formula::Dia(k, a) => Formula::Dia(*k, Box::new(strip_within(a))),
        Formula::Box(a) => Formula::boxed(strip_within(a)),
        _ => f.clone(),
    }
}

fn binder_radii(f: &Formula, out: &mut Vec<Option<usize>>) {
    if let Formula::Down(_, a) = f {
        out.push(match &**a {
            Formula::Within(r, _) => Some(*r as usize),
            _ => None,
        });
    }
    for c in f.children() {
        binder_radii(c, out);
    }
}

/// Compiles a sentence of the `↓`/`W` fragment into a nested network whose
/// depth is the `↓`-nesting depth. Every binder must use the same radius
/// (a plain `↓` counts as unbounded).
pub fn compile_hgml<S: AsRef<str>>(phi: &Formula, props: &[S]) -> Result<HeGnnSpec> {
    let canon = canonicalize(phi)?;
    let mut radii = Vec::new();
    binder_radii(&canon, &mut radii);
    radii.sort();
    radii.dedup();
    if radii.len() > 1 {
        return Err(Error::Fragment("all binders must share one radius".into()));
    }
    let f = desugar(&strip_within(&canon));
    let d = f.down_depth();
    let mut layers = vec![0; d + 1];
    plan(&f, 0, d, &mut layers);
    let ctx = Level { layers: &layers, radius: radii.first().copied().flatten() };
    ctx.compile(&f, 0, d, &prop_channels(props), props.len())
}
