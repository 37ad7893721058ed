use crate::error::{Error, Result};
use crate::logic::{parse_formula, Formula};

const TRIANGLE: &str = "(down x (dia 1 (dia 1 (dia 1 (var x)))))";

/// Names accepted by [`builtin_formula`].
pub fn builtin_formula_names() -> &'static [&'static str] {
    &["triangle", "psi-rs", "phi-cycle(r)", "psi-triangle-cycle"]
}

fn psi_rs() -> Formula {
    let deg8 = || Formula::dia(8, Formula::Top);
    let low = || Formula::not(deg8());
    let tri = Formula::and(
        low(),
        Formula::dia(1, Formula::and(low(), Formula::dia(1, Formula::and(low(), Formula::dia(1, Formula::var("x")))))),
    );
    let phi = Formula::and(deg8(), Formula::dia(1, Formula::down("x", Formula::within(2, tri))));
    Formula::and(phi.clone(), Formula::not(Formula::dia(1, phi)))
}

/// `↓x.W^{r+1} ◇_{r+1} ¬◇^{≥2}⊤`: some node at distance `r+1` has degree
/// below two inside the ball.
pub fn phi_cycle(r: u32) -> Formula {
    Formula::down("x", Formula::within(r + 1, Formula::dia_chain(r as usize + 1, Formula::not(Formula::dia(2, Formula::Top)))))
}

fn psi_triangle_cycle() -> Formula {
    let t = TRIANGLE;
    parse_formula(&format!(
        "(down x (dia 1 (and {t} (dia 1 (and {t} (and (dia 1 {t}) (dia 1 (and {t} (var x)))))))))"
    ))
    .expect("well-formed")
}

/// Built-in sentences: `triangle`, `psi-rs`, `phi-cycle(r)` (also
/// `phi-cycle:r`) and `psi-triangle-cycle`.
pub fn builtin_formula(spec: &str) -> Result<Formula> {
    let arg = spec
        .strip_prefix("phi-cycle")
        .map(|rest| {
            let inner = rest.strip_prefix('(').and_then(|s| s.strip_suffix(')')).or_else(|| rest.strip_prefix(':'));
            inner.and_then(|s| s.trim().parse::<u32>().ok()).ok_or_else(|| Error::BadParam {
                name: spec.to_string(),
                msg: "expected phi-cycle(r) with r a non-negative integer".into(),
            })
        })
        .transpose()?;
    if let Some(r) = arg {
        return Ok(phi_cycle(r));
    }
    match spec {
        "triangle" => Ok(parse_formula(TRIANGLE).expect("well-formed")),
        "psi-rs" => Ok(psi_rs()),
        "psi-triangle-cycle" => Ok(psi_triangle_cycle()),
        _ => Err(Error::UnknownBuiltin(spec.to_string())),
    }
}
