use crate::error::{Error, Result};
use crate::logic::Formula;

/// Largest count accepted in `(dia K F)`.
pub const MAX_COUNT: u64 = (1 << 31) - 1;
/// Largest radius accepted in `(within R F)`.
pub const MAX_RADIUS: u64 = 1 << 16;

#[derive(Debug, PartialEq)]
enum Tok<'a> {
    Open,
    Close,
    Atom(&'a str),
}

fn tokenize(text: &str) -> Vec<(usize, Tok<'_>)> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'(' => {
                out.push((i, Tok::Open));
                i += 1;
            }
            b')' => {
                out.push((i, Tok::Close));
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            _ => {
                let start = i;
                while i < bytes.len() && !matches!(bytes[i], b'(' | b')' | b';') && !bytes[i].is_ascii_whitespace() {
                    i += 1;
                }
                out.push((start, Tok::Atom(&text[start..i])));
            }
        }
    }
    out
}

struct Parser<'a> {
    toks: Vec<(usize, Tok<'a>)>,
    pos: usize,
    end: usize,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Formula { pos, msg: msg.into() }
}

impl<'a> Parser<'a> {
    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn next(&mut self) -> Result<(usize, &Tok<'a>)> {
        let t = self.toks.get(self.pos).ok_or_else(|| err(self.end, "unexpected end of input"))?;
        self.pos += 1;
        Ok((t.0, &t.1))
    }

    fn atom(&mut self, what: &str) -> Result<(usize, &'a str)> {
        match self.next()? {
            (p, Tok::Atom(a)) => Ok((p, a)),
            (p, _) => Err(err(p, format!("expected {what}"))),
        }
    }

    fn number(&mut self, what: &str, min: u64, max: u64) -> Result<u32> {
        let (p, a) = self.atom(what)?;
        let k: u64 = a.parse().map_err(|_| err(p, format!("expected {what}, found `{a}`")))?;
        if k < min {
            return Err(err(p, format!("{what} must be at least {min}")));
        }
        if k > max {
            return Err(err(p, format!("{what} exceeds {max}")));
        }
        Ok(k as u32)
    }

    fn close(&mut self) -> Result<()> {
        match self.next()? {
            (_, Tok::Close) => Ok(()),
            (p, _) => Err(err(p, "expected `)`")),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let (p, t) = self.next()?;
        match t {
            Tok::Atom("true") => return Ok(Formula::Top),
            Tok::Atom(a) => return Err(err(p, format!("unexpected atom `{a}`"))),
            Tok::Close => return Err(err(p, "unexpected `)`")),
            Tok::Open => {}
        }
        let (op_pos, op) = self.atom("operator")?;
        let f = match op {
            "prop" => Formula::prop(self.atom("proposition name")?.1),
            "var" => Formula::var(self.atom("variable name")?.1),
            "not" => Formula::not(self.formula()?),
            "and" => {
                let a = self.formula()?;
                Formula::and(a, self.formula()?)
            }
            "or" => {
                let a = self.formula()?;
                Formula::or(a, self.formula()?)
            }
            "dia" => {
                let k = self.number("count", 1, MAX_COUNT)?;
                Formula::dia(k, self.formula()?)
            }
            "box" => Formula::boxed(self.formula()?),
            "down" => {
                let x = self.atom("variable name")?.1;
                Formula::down(x, self.formula()?)
            }
            "within" => {
                let r = self.number("radius", 1, MAX_RADIUS)?;
                Formula::within(r, self.formula()?)
            }
            "at" => {
                let x = self.atom("variable name")?.1;
                Formula::at(x, self.formula()?)
            }
            other => return Err(err(op_pos, format!("unknown operator `{other}`"))),
        };
        self.close()?;
        Ok(f)
    }
}

/// Parses one formula that may have free variables.
pub fn parse_open_formula(text: &str) -> Result<Formula> {
    let mut p = Parser { toks: tokenize(text), pos: 0, end: text.len() };
    let f = p.formula()?;
    if p.pos < p.toks.len() {
        return Err(err(p.here(), "trailing input"));
    }
    Ok(f)
}

/// Parses one sentence; free variables are an error.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let f = parse_open_formula(text)?;
    if let Some(x) = f.free_vars().into_iter().next() {
        let pos = text.find(&format!("(var {x})")).or_else(|| text.find(&format!("(at {x}"))).unwrap_or(0);
        return Err(err(pos, format!("free variable `{x}` in a sentence")));
    }
    Ok(f)
}
