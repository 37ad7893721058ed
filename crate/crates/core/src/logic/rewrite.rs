use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::logic::Formula;

fn map_children(f: &Formula, mut go: impl FnMut(&Formula) -> Formula) -> Formula {
    match f {
        Formula::Top | Formula::Prop(_) | Formula::Var(_) => f.clone(),
        Formula::Not(a) => Formula::not(go(a)),
        Formula::And(a, b) => Formula::and(go(a), go(b)),
        Formula::Or(a, b) => Formula::or(go(a), go(b)),
        Formula::Dia(k, a) => Formula::Dia(*k, Box::new(go(a))),
        Formula::Box(a) => Formula::boxed(go(a)),
        Formula::Down(x, a) => Formula::down(x.clone(), go(a)),
        Formula::Within(r, a) => Formula::within(*r, go(a)),
        Formula::At(x, a) => Formula::at(x.clone(), go(a)),
    }
}

fn all_names(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Var(x) | Formula::Down(x, _) | Formula::At(x, _) => {
            out.insert(x.clone());
        }
        _ => {}
    }
    for c in f.children() {
        all_names(c, out);
    }
}

/// Rewrites `Or` and `Box` in terms of `Not`, `And` and `Dia`.
pub fn desugar(f: &Formula) -> Formula {
    match f {
        Formula::Or(a, b) => Formula::not(Formula::and(Formula::not(desugar(a)), Formula::not(desugar(b)))),
        Formula::Box(a) => Formula::not(Formula::dia(1, Formula::not(desugar(a)))),
        _ => map_children(f, desugar),
    }
}

/// Renames every binder that shadows an enclosing binder of the same name.
pub fn rename_apart(f: &Formula) -> Formula {
    let mut used = BTreeSet::new();
    all_names(f, &mut used);
    fn go(f: &Formula, scope: &mut Vec<(String, String)>, used: &mut BTreeSet<String>) -> Formula {
        let lookup = |scope: &Vec<(String, String)>, x: &str| {
            scope.iter().rev().find(|(o, _)| o == x).map_or_else(|| x.to_string(), |(_, n)| n.clone())
        };
        match f {
            Formula::Var(x) => Formula::var(lookup(scope, x)),
            Formula::At(x, a) => {
                let name = lookup(scope, x);
                Formula::at(name, go(a, scope, used))
            }
            Formula::Down(x, a) => {
                let name = if scope.iter().any(|(_, n)| n == x) {
                    let fresh = (1..).map(|k| format!("{x}_{k}")).find(|c| !used.contains(c)).unwrap();
                    used.insert(fresh.clone());
                    fresh
                } else {
                    x.clone()
                };
                scope.push((x.clone(), name.clone()));
                let body = go(a, scope, used);
                scope.pop();
                Formula::down(name, body)
            }
            _ => map_children(f, |c| go(c, scope, used)),
        }
    }
    go(f, &mut Vec::new(), &mut used)
}

/// Checks that every `W` sits directly under a `↓` and that there is no `@`.
fn check_down_within(f: &Formula, parent_is_down: bool) -> Result<()> {
    match f {
        Formula::At(..) => return Err(Error::Fragment("`at` is not allowed here".into())),
        Formula::Within(..) if !parent_is_down => {
            return Err(Error::Fragment("`within` must directly follow a `down`".into()))
        }
        _ => {}
    }
    let is_down = matches!(f, Formula::Down(..));
    f.children().into_iter().try_for_each(|c| check_down_within(c, is_down))
}

/// Renames the binder at nesting level `l` (outermost is 1) to `x{d+1-l}`,
/// where `d` is the `↓`-nesting depth.
pub fn canonicalize(f: &Formula) -> Result<Formula> {
    check_down_within(f, false)?;
    if !f.is_sentence() {
        return Err(Error::Fragment("canonical form needs a sentence".into()));
    }
    let d = f.down_depth();
    fn go(f: &Formula, d: usize, scope: &mut Vec<(String, String)>) -> Formula {
        match f {
            Formula::Var(x) => {
                let n = scope.iter().rev().find(|(o, _)| o == x).map(|(_, n)| n.clone()).expect("sentence");
                Formula::Var(n)
            }
            Formula::Down(x, a) => {
                let name = format!("x{}", d + 1 - (scope.len() + 1));
                scope.push((x.clone(), name.clone()));
                let body = go(a, d, scope);
                scope.pop();
                Formula::down(name, body)
            }
            _ => map_children(f, |c| go(c, d, scope)),
        }
    }
    Ok(go(f, d, &mut Vec::new()))
}

/// True iff `f` is in the `↓`/`W` fragment and every binder at level `l`
/// is called `x{d+1-l}`.
pub fn is_canonical(f: &Formula) -> bool {
    if check_down_within(f, false).is_err() {
        return false;
    }
    let d = f.down_depth();
    fn go(f: &Formula, d: usize, level: usize) -> bool {
        match f {
            Formula::Down(x, a) => *x == format!("x{}", d - level) && go(a, d, level + 1),
            _ => f.children().iter().all(|c| go(c, d, level)),
        }
    }
    go(f, d, 0)
}

/// `x ∨ ◇x ∨ … ∨ ◇_r x`: the current node is within distance `r` of `x`.
fn near(x: &str, r: u32) -> Formula {
    Formula::or_all((0..=r as usize).map(|j| Formula::dia_chain(j, Formula::var(x))))
}

fn relativize(f: &Formula, xi: &Formula) -> Formula {
    match f {
        Formula::Dia(k, t) => Formula::Dia(*k, Box::new(Formula::and(xi.clone(), relativize(t, xi)))),
        Formula::Box(t) => Formula::not(Formula::dia(1, Formula::and(xi.clone(), Formula::not(relativize(t, xi))))),
        _ => map_children(f, |c| relativize(c, xi)),
    }
}

/// Removes every `W^r` by relativizing the diamonds below it to the
/// radius-`r` ball around the enclosing binder's node.
pub fn eliminate_within(f: &Formula) -> Result<Formula> {
    check_down_within(f, false)?;
    fn go(f: &Formula) -> Formula {
        match f {
            Formula::Down(x, a) => match &**a {
                Formula::Within(r, body) => Formula::down(x.clone(), relativize(&go(body), &near(x, *r))),
                _ => Formula::down(x.clone(), go(a)),
            },
            _ => map_children(f, go),
        }
    }
    Ok(go(&rename_apart(f)))
}

/// Replaces `@x ψ` by `⋁_{i=0..2n} ◇_i (x ∧ ψ)` with `n` the modal depth of
/// the whole sentence.
pub fn eliminate_at(f: &Formula) -> Result<Formula> {
    if f.stats().radii.iter().next().is_some() {
        return Err(Error::Fragment("`within` is not allowed here".into()));
    }
    let n = f.modal_depth();
    fn go(f: &Formula, n: usize) -> Formula {
        match f {
            Formula::At(x, a) => {
                let body = Formula::and(Formula::var(x.clone()), go(a, n));
                Formula::or_all((0..=2 * n).map(|i| Formula::dia_chain(i, body.clone())))
            }
            _ => map_children(f, |c| go(c, n)),
        }
    }
    Ok(go(f, n))
}
