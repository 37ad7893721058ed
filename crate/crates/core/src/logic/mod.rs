//! Graded modal logic with binders (`↓`), within operators (`W^r`) and
//! satisfaction operators (`@`).

mod builtin;
mod eval;
mod parse;
mod rewrite;

use std::collections::BTreeSet;
use std::fmt;

pub use builtin::{builtin_formula, builtin_formula_names, phi_cycle};
pub use eval::{eval, eval_all, Env};
pub use parse::{parse_formula, parse_open_formula, MAX_COUNT, MAX_RADIUS};
pub use rewrite::{canonicalize, desugar, eliminate_at, eliminate_within, is_canonical, rename_apart};

/// A formula. `Or`, `Box` and `At` are definable from the rest but kept so
/// that printed formulas stay readable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Prop(String),
    Var(String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// At least `k >= 1` neighbors satisfy the argument.
    Dia(u32, Box<Formula>),
    Box(Box<Formula>),
    Down(String, Box<Formula>),
    /// Evaluate in the radius-`r` ego subgraph, `r >= 1`.
    Within(u32, Box<Formula>),
    At(String, Box<Formula>),
}

impl Formula {
    pub fn prop(p: impl Into<String>) -> Self {
        Formula::Prop(p.into())
    }

    pub fn var(x: impl Into<String>) -> Self {
        Formula::Var(x.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    /// `◇^{≥k} f`; `k = 0` is `⊤`.
    pub fn dia(k: u32, f: Formula) -> Self {
        if k == 0 {
            Formula::Top
        } else {
            Formula::Dia(k, Box::new(f))
        }
    }

    /// `◇_j f`: `j` nested single diamonds.
    pub fn dia_chain(j: usize, f: Formula) -> Self {
        (0..j).fold(f, |acc, _| Formula::dia(1, acc))
    }

    pub fn boxed(f: Formula) -> Self {
        Formula::Box(Box::new(f))
    }

    pub fn down(x: impl Into<String>, f: Formula) -> Self {
        Formula::Down(x.into(), Box::new(f))
    }

    pub fn within(r: u32, f: Formula) -> Self {
        Formula::Within(r, Box::new(f))
    }

    pub fn at(x: impl Into<String>, f: Formula) -> Self {
        Formula::At(x.into(), Box::new(f))
    }

    /// `⊥` when empty.
    pub fn or_all(fs: impl IntoIterator<Item = Formula>) -> Self {
        fs.into_iter().reduce(Formula::or).unwrap_or_else(|| Formula::not(Formula::Top))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Top | Formula::Prop(_) | Formula::Var(_) => Vec::new(),
            Formula::Not(f)
            | Formula::Dia(_, f)
            | Formula::Box(f)
            | Formula::Down(_, f)
            | Formula::Within(_, f)
            | Formula::At(_, f) => vec![f],
            Formula::And(a, b) | Formula::Or(a, b) => vec![a, b],
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn go(f: &Formula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            match f {
                Formula::Var(x) | Formula::At(x, _) if !bound.contains(x) => {
                    out.insert(x.clone());
                }
                _ => {}
            }
            if let Formula::Down(x, body) = f {
                bound.push(x.clone());
                go(body, bound, out);
                bound.pop();
            } else {
                for c in f.children() {
                    go(c, bound, out);
                }
            }
        }
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Propositions mentioned anywhere, sorted.
    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if let Formula::Prop(p) = f {
                out.insert(p.clone());
            }
            stack.extend(f.children());
        }
        out
    }

    /// True iff there are no `↓`, `W` or `@` operators and no variables.
    pub fn is_gml(&self) -> bool {
        !matches!(self, Formula::Var(_) | Formula::Down(..) | Formula::Within(..) | Formula::At(..))
            && self.children().iter().all(|c| c.is_gml())
    }

    pub fn stats(&self) -> FormulaStats {
        let mut radii = BTreeSet::new();
        let mut stack = vec![self];
        while let Some(f) = stack.pop() {
            if let Formula::Within(r, _) = f {
                radii.insert(*r);
            }
            stack.extend(f.children());
        }
        FormulaStats {
            down_depth: self.down_depth(),
            radii,
            free_vars: self.free_vars(),
            operator_depth: self.operator_depth(),
            modal_depth: self.modal_depth(),
        }
    }

    pub fn down_depth(&self) -> usize {
        let inner = self.children().iter().map(|c| c.down_depth()).max().unwrap_or(0);
        inner + matches!(self, Formula::Down(..)) as usize
    }

    /// Atoms have depth 0; every operator adds one.
    pub fn operator_depth(&self) -> usize {
        self.children().iter().map(|c| c.operator_depth() + 1).max().unwrap_or(0)
    }

    /// Nesting of `◇` and `□`.
    pub fn modal_depth(&self) -> usize {
        let inner = self.children().iter().map(|c| c.modal_depth()).max().unwrap_or(0);
        inner + matches!(self, Formula::Dia(..) | Formula::Box(_)) as usize
    }
}

/// Summary numbers of a formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormulaStats {
    pub down_depth: usize,
    pub radii: BTreeSet<u32>,
    pub free_vars: BTreeSet<String>,
    pub operator_depth: usize,
    pub modal_depth: usize,
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("true"),
            Formula::Prop(p) => write!(f, "(prop {p})"),
            Formula::Var(x) => write!(f, "(var {x})"),
            Formula::Not(a) => write!(f, "(not {a})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Dia(k, a) => write!(f, "(dia {k} {a})"),
            Formula::Box(a) => write!(f, "(box {a})"),
            Formula::Down(x, a) => write!(f, "(down {x} {a})"),
            Formula::Within(r, a) => write!(f, "(within {r} {a})"),
            Formula::At(x, a) => write!(f, "(at {x} {a})"),
        }
    }
}
