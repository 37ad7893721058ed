use std::collections::BTreeMap;

use crate::graph::Graph;
use crate::logic::Formula;

/// Variable bindings. A binding can be dropped by a within operator whose
/// ego subgraph does not contain the bound node; dropped variables never
/// hold.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Env(BTreeMap<String, Option<usize>>);

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    pub fn bind(mut self, x: impl Into<String>, v: usize) -> Self {
        self.0.insert(x.into(), Some(v));
        self
    }

    pub fn get(&self, x: &str) -> Option<usize> {
        self.0.get(x).copied().flatten()
    }
}

/// `G, v, env ⊨ φ`.
pub fn eval(g: &Graph, v: usize, env: &Env, phi: &Formula) -> bool {
    assert!(v < g.n(), "node {v} out of range");
    match phi {
        Formula::Top => true,
        Formula::Prop(p) => g.has_label_named(v, p),
        Formula::Var(x) => env.get(x) == Some(v),
        Formula::Not(f) => !eval(g, v, env, f),
        Formula::And(a, b) => eval(g, v, env, a) && eval(g, v, env, b),
        Formula::Or(a, b) => eval(g, v, env, a) || eval(g, v, env, b),
        Formula::Dia(k, f) => {
            let need = *k as usize;
            if g.degree(v) < need {
                return false;
            }
            let mut hits = 0;
            for &w in g.neighbors(v) {
                if eval(g, w, env, f) {
                    hits += 1;
                    if hits >= need {
                        return true;
                    }
                }
            }
            false
        }
        Formula::Box(f) => g.neighbors(v).iter().all(|&w| eval(g, w, env, f)),
        Formula::Down(x, f) => {
            let inner = env.clone().bind(x.clone(), v);
            eval(g, v, &inner, f)
        }
        Formula::Within(r, f) => {
            let (sub, remap) = g.ego_subgraph(v, *r as usize);
            let inner = Env(env.0.iter().map(|(x, b)| (x.clone(), b.and_then(|u| remap.get(u)))).collect());
            eval(&sub, remap.get(v).expect("center survives"), &inner, f)
        }
        Formula::At(x, f) => match env.get(x) {
            Some(u) => eval(g, u, env, f),
            None => false,
        },
    }
}

/// Truth value at every node under the empty environment.
pub fn eval_all(g: &Graph, phi: &Formula) -> Vec<bool> {
    let env = Env::new();
    (0..g.n()).map(|v| eval(g, v, &env, phi)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{cycle_pair, k33, prism, rs_pair};
    use crate::logic::builtin_formula;

    #[test]
    fn triangle() {
        let tri = builtin_formula("triangle").unwrap();
        assert!(eval_all(&prism(), &tri).iter().all(|&b| b));
        assert!(eval_all(&k33(), &tri).iter().all(|&b| !b));
    }

    #[test]
    fn phi_cycle() {
        let phi = builtin_formula("phi-cycle(1)").unwrap();
        let (a, b) = cycle_pair(1);
        assert!(eval_all(&a, &phi).iter().all(|&x| x));
        assert!(eval_all(&b, &phi).iter().all(|&x| !x));
    }

    #[test]
    fn psi_rs() {
        let psi = builtin_formula("psi-rs").unwrap();
        let (a, b) = rs_pair();
        let sat: Vec<usize> = (0..28).filter(|&v| eval(&a, v, &Env::new(), &psi)).collect();
        assert_eq!(sat, vec![0, 2]);
        assert!(eval_all(&b, &psi).iter().all(|&x| !x));
    }

    #[test]
    fn dropped_bindings_never_hold() {
        let g = crate::graph::path(4);
        let f = Formula::within(1, Formula::dia(1, Formula::var("x")));
        assert!(eval(&g, 1, &Env::new().bind("x", 0), &f));
        assert!(!eval(&g, 2, &Env::new().bind("x", 0), &f));
        let back = Formula::within(1, Formula::at("x", Formula::Top));
        assert!(!eval(&g, 3, &Env::new().bind("x", 0), &back));
    }
}
