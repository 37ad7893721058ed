//! Resolving command-line sources into graphs, patterns, formulas and
//! networks.

use std::path::Path;

use ego_refine::graph::{builtin, parse_graph6, parse_labeled_text, parse_pattern, serialize_labeled_text, Graph};
use ego_refine::hom::RootedPattern;
use ego_refine::logic::{builtin_formula, parse_open_formula, Formula};
use ego_refine::net::NetworkFile;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::CliError;

/// A loaded graph and where it came from.
#[derive(Clone, Debug)]
pub struct Named {
    pub name: String,
    pub graph: Graph,
    pub point: usize,
}

impl Named {
    /// SHA-256 of the labeled-text serialization.
    pub fn digest(&self) -> String {
        sha_hex(serialize_labeled_text(&self.graph).as_bytes())
    }

    pub fn describe(&self) -> Value {
        json!({"name": self.name, "n": self.graph.n(), "m": self.graph.edge_count(), "digest": self.digest()})
    }
}

pub fn sha_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.display().to_string(), source: e })
}

fn graph6_lines(src: &str, text: &str) -> Result<Vec<Named>, CliError> {
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let many = lines.len() > 1;
    lines
        .iter()
        .enumerate()
        .map(|(i, l)| {
            let name = if many { format!("{src}#{i}") } else { src.to_string() };
            Ok(Named { name, graph: parse_graph6(l)?, point: 0 })
        })
        .collect()
}

/// `builtin:NAME` (`builtin:PAIR/0` picks one side), `g6:LINE`, a file
/// (graph6 lines for `.g6`, otherwise labeled text), or a bare graph6 line.
pub fn graphs(src: &str) -> Result<Vec<Named>, CliError> {
    if let Some(name) = src.strip_prefix("builtin:") {
        if let Some((base, side @ ("0" | "1"))) = name.rsplit_once('/') {
            let all = graphs(&format!("builtin:{base}"))?;
            let i: usize = side.parse().expect("0 or 1");
            let p = all.into_iter().nth(i).ok_or_else(|| CliError::Usage(format!("`builtin:{base}` is not a pair")))?;
            return Ok(vec![Named { name: src.to_string(), ..p }]);
        }
        let b = builtin(name)?;
        let all = b.graphs();
        let many = all.len() > 1;
        return Ok(all
            .into_iter()
            .enumerate()
            .map(|(i, p)| Named {
                name: if many { format!("{src}/{i}") } else { src.to_string() },
                graph: p.graph.clone(),
                point: p.point,
            })
            .collect());
    }
    if let Some(line) = src.strip_prefix("g6:") {
        return graph6_lines(src, line);
    }
    let path = Path::new(src);
    if path.is_file() {
        let text = read(path)?;
        let g6 = matches!(path.extension().and_then(|e| e.to_str()), Some("g6" | "graph6"));
        if g6 {
            return graph6_lines(src, &text);
        }
        return match parse_labeled_text(&text) {
            Ok(graph) => Ok(vec![Named { name: src.to_string(), graph, point: 0 }]),
            Err(e) => graph6_lines(src, &text).map_err(|_| e.into()),
        };
    }
    graph6_lines(src, src).map_err(|e| CliError::Usage(format!("`{src}` is not a file, builtin or graph6 line ({e})")))
}

/// Exactly one graph.
pub fn graph(src: &str) -> Result<Named, CliError> {
    let mut all = graphs(src)?;
    if all.len() != 1 {
        return Err(CliError::Usage(format!("`{src}` holds {} graphs, expected one", all.len())));
    }
    Ok(all.remove(0))
}

/// Two graphs: `left right`, or a single source holding a pair.
pub fn pair(left: &str, right: Option<&str>) -> Result<(Named, Named), CliError> {
    match right {
        Some(r) => Ok((graph(left)?, graph(r)?)),
        None => {
            let mut all = graphs(left)?;
            if all.len() != 2 {
                return Err(CliError::Usage(format!("`{left}` holds {} graphs; give a pair or two sources", all.len())));
            }
            let b = all.pop().unwrap();
            Ok((all.pop().unwrap(), b))
        }
    }
}

/// A rooted pattern: `builtin:NAME` (rooted at its point), a pattern file
/// with a `root:` trailer, or inline pattern text.
pub fn pattern(src: &str) -> Result<(String, RootedPattern), CliError> {
    let p = if src.starts_with("builtin:") || src.starts_with("g6:") {
        let g = graph(src)?;
        ego_refine::graph::PointedGraph::new(g.graph, g.point)?
    } else if Path::new(src).is_file() {
        parse_pattern(&read(Path::new(src))?)?
    } else {
        parse_pattern(src)?
    };
    Ok((src.to_string(), RootedPattern::try_from(p)?))
}

/// `builtin:NAME`, a file holding an s-expression, or the s-expression
/// itself.
pub fn formula(src: &str) -> Result<Formula, CliError> {
    if let Some(name) = src.strip_prefix("builtin:") {
        return Ok(builtin_formula(name)?);
    }
    let path = Path::new(src);
    let text = if !src.trim_start().starts_with('(') && path.is_file() { read(path)? } else { src.to_string() };
    Ok(parse_open_formula(text.trim())?)
}

pub fn network(path: &str) -> Result<NetworkFile, CliError> {
    Ok(NetworkFile::from_json(&read(Path::new(path))?)?)
}
